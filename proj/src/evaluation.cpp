#include "dereg/evaluation.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

#include "dereg/error.hpp"

namespace dereg {

PRCurve pr_curve(std::span<const double> scores, std::span<const bool> labels) {
  if (scores.size() != labels.size()) throw InvalidArgument("scores and labels differ in size");
  const auto positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), true));
  if (positives == 0) throw InvalidArgument("no positive pair: recall is undefined");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  PRCurve curve;
  std::size_t tp = 0, called = 0;
  double last_recall = 0.0;
  for (std::size_t k = 0; k < order.size();) {
    const double threshold = scores[order[k]];
    if (!(threshold > 0.0)) break;
    for (; k < order.size() && scores[order[k]] == threshold; ++k) {
      ++called;
      if (labels[order[k]]) ++tp;
    }
    PRPoint p;
    p.threshold = threshold;
    p.recall = static_cast<double>(tp) / static_cast<double>(positives);
    p.precision = static_cast<double>(tp) / static_cast<double>(called);
    curve.auprc += (p.recall - last_recall) * p.precision;
    last_recall = p.recall;
    curve.points.push_back(p);
  }
  return curve;
}

PRCurve pr_curve(const DeregulationScores& scores, const GroundTruth& truth) {
  if (scores.scores.rows() != truth.deregulated.rows() ||
      scores.scores.cols() != truth.deregulated.cols()) {
    throw InvalidArgument("scores and ground truth differ in shape");
  }
  std::vector<double> s(scores.scores.data(), scores.scores.data() + scores.scores.size());
  // both matrices are column-major
  return pr_curve(s, std::span<const bool>(truth.deregulated.data(),
                                           static_cast<std::size_t>(truth.deregulated.size())));
}

std::vector<FdrPoint> estimate_fdr(std::span<const double> sorted_scores) {
  std::vector<FdrPoint> out;
  out.reserve(sorted_scores.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < sorted_scores.size(); ++k) {
    sum += sorted_scores[k];
    const auto calls = static_cast<double>(k + 1);
    out.push_back({k + 1, std::max(0.0, (calls - sum) / calls)});
  }
  return out;
}

FdrSelection select_at_fdr(const DeregulationScores& scores, double target_fdr) {
  if (!(target_fdr > 0.0 && target_fdr < 1.0)) throw InvalidArgument("target FDR must lie in (0, 1)");
  const auto n = scores.scores.rows();
  const auto t = scores.scores.cols();
  if (static_cast<std::size_t>(n) != scores.sample_ids.size() ||
      static_cast<std::size_t>(t) != scores.target_ids.size()) {
    throw InvalidArgument("score matrix shape does not match its identifiers");
  }

  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  pairs.reserve(static_cast<std::size_t>(n * t));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index g = 0; g < t; ++g) pairs.emplace_back(i, g);
  }
  std::sort(pairs.begin(), pairs.end(), [&](const auto& a, const auto& b) {
    const double sa = scores.scores(a.first, a.second), sb = scores.scores(b.first, b.second);
    if (sa != sb) return sa > sb;
    return std::tie(scores.sample_ids[static_cast<std::size_t>(a.first)],
                    scores.target_ids[static_cast<std::size_t>(a.second)]) <
           std::tie(scores.sample_ids[static_cast<std::size_t>(b.first)],
                    scores.target_ids[static_cast<std::size_t>(b.second)]);
  });

  std::vector<double> sorted;
  sorted.reserve(pairs.size());
  for (const auto& [i, g] : pairs) sorted.push_back(scores.scores(i, g));
  const auto fdr = estimate_fdr(sorted);

  // estimated FDR is non-decreasing in K, so the admissible prefixes are contiguous
  std::size_t best = 0;
  for (const auto& point : fdr) {
    if (point.estimated_fdr <= target_fdr) best = point.calls;
  }

  FdrSelection out;
  for (std::size_t k = 0; k < best; ++k) {
    const auto [i, g] = pairs[k];
    out.selected.push_back({scores.sample_ids[static_cast<std::size_t>(i)],
                            scores.target_ids[static_cast<std::size_t>(g)], sorted[k]});
  }
  if (best > 0) {
    out.threshold = sorted[best - 1];
    out.estimated_fdr = fdr[best - 1].estimated_fdr;
  }
  return out;
}

}  // namespace dereg
