#include "dereg/em.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dereg/error.hpp"
#include "dereg/graph_builder.hpp"
#include "parallel.hpp"

namespace dereg {
namespace {

const ExpressionMatrix& require_aligned(const RegulatoryNetwork& net, const ExpressionMatrix& data) {
  if (!is_aligned(net, data)) {
    throw AlignmentError("expression matrix is not aligned to the network gene order");
  }
  return data;
}

// Linear interpolation between order statistics.
double quantile(const std::vector<double>& sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double sigma_floor(const ExpressionMatrix& data) {
  return std::max(kSigmaFloorRatio * overall_sd(data), 1e-12);
}

}  // namespace

double overall_sd(const ExpressionMatrix& data) {
  const auto count = static_cast<double>(data.values.size());
  if (count < 2) return 0.0;
  const double mean = data.values.mean();
  return std::sqrt((data.values.array() - mean).square().sum() / (count - 1.0));
}

SampleMarginals e_step(const RegulatoryNetwork& net, const ModelParams& params,
                       const ExpressionMatrix& data, const EStepSettings& settings) {
  require_aligned(net, data);
  require_valid(params);
  const Eigen::Index n = data.values.rows();
  const auto genes = static_cast<Eigen::Index>(net.gene_count());
  const auto t = static_cast<Eigen::Index>(net.target_count());

  SampleMarginals q;
  for (auto& m : q.state) m.resize(n, genes);
  q.deregulated.resize(n, t);

  detail::parallel_for(static_cast<std::size_t>(n), settings.threads, [&](std::size_t sample) {
    const auto i = static_cast<Eigen::Index>(sample);
    try {
      const auto compiled = build_sample_graph(net, params, data.values.row(i).transpose());
      const auto beliefs = fg::run_sum_product(compiled.graph, settings.bp);
      for (Eigen::Index g = 0; g < genes; ++g) {
        const auto b = beliefs[compiled.gene_state[static_cast<std::size_t>(g)]];
        for (int s = 0; s < 3; ++s) q.state[static_cast<std::size_t>(s)](i, g) = b(s);
      }
      for (Eigen::Index g = 0; g < t; ++g) {
        q.deregulated(i, g) = beliefs[compiled.targets[static_cast<std::size_t>(g)].deregulated](1);
      }
    } catch (const ZeroEvidenceError& e) {
      throw ZeroEvidenceError("sample " + data.sample_ids[sample] + ": " + e.what());
    }
  });
  return q;
}

ModelParams m_step(const SampleMarginals& q, const ExpressionMatrix& data,
                   const RegulatoryNetwork& net, const ModelParams& previous) {
  require_aligned(net, data);
  const auto r = static_cast<Eigen::Index>(net.regulator_count());
  const auto& x = data.values;

  ModelParams next = previous;

  Eigen::Vector3d regulator_mass;
  for (int s = 0; s < 3; ++s) regulator_mass(s) = q.state[static_cast<std::size_t>(s)].leftCols(r).sum();
  if (regulator_mass.sum() > 0.0) next.alpha = regulator_mass / regulator_mass.sum();

  if (q.deregulated.size() > 0) next.epsilon = q.deregulated.mean();

  const double floor = sigma_floor(data);
  for (int s = 0; s < 3; ++s) {
    const auto& w = q.state[static_cast<std::size_t>(s)];
    const double mass = w.sum();
    if (mass < kEmptyStateMass) continue;
    const double mu = w.cwiseProduct(x).sum() / mass;
    const double var = (w.array() * (x.array() - mu).square()).sum() / mass;
    next.mu(s) = mu;
    next.sigma(s) = std::max(std::sqrt(var), floor);
  }

  // canonical order: states sorted by mean
  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return next.mu(a) < next.mu(b); });
  if (order != std::array<int, 3>{0, 1, 2}) {
    const ModelParams unsorted = next;
    for (int s = 0; s < 3; ++s) {
      next.alpha(s) = unsorted.alpha(order[static_cast<std::size_t>(s)]);
      next.mu(s) = unsorted.mu(order[static_cast<std::size_t>(s)]);
      next.sigma(s) = unsorted.sigma(order[static_cast<std::size_t>(s)]);
    }
  }
  return next;
}

ModelParams initial_params(const ExpressionMatrix& data) {
  if (data.values.size() == 0) throw InvalidArgument("expression matrix is empty");
  std::vector<double> all(data.values.data(), data.values.data() + data.values.size());
  std::sort(all.begin(), all.end());

  ModelParams p;
  p.alpha = Eigen::Vector3d::Constant(1.0 / 3.0);
  p.epsilon = 0.05;
  p.mu = {quantile(all, 0.2), quantile(all, 0.5), quantile(all, 0.8)};
  const double half_mean_gap = (p.mu(2) - p.mu(0)) / 4.0;
  p.sigma = Eigen::Vector3d::Constant(std::max(half_mean_gap, sigma_floor(data)));
  return p;
}

FitResult fit(const RegulatoryNetwork& net, const ExpressionMatrix& data,
              const FitSettings& settings) {
  require_aligned(net, data);
  if (settings.max_iterations < 1) throw InvalidArgument("max_iterations must be >= 1");
  if (!(settings.tol > 0.0)) throw InvalidArgument("tol must be positive");

  FitResult result;
  result.params = settings.initial ? *settings.initial : initial_params(data);
  require_valid(result.params);

  for (int it = 1; it <= settings.max_iterations; ++it) {
    const auto q = e_step(net, result.params, data, settings.estep);
    ModelParams next = m_step(q, data, net, result.params);
    const double change = next.max_abs_change(result.params);
    result.trajectory.push_back({next, change});
    result.params = next;
    result.iterations = it;
    if (change < settings.tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

DeregulationScores score(const RegulatoryNetwork& net, const ModelParams& params,
                         const ExpressionMatrix& data, const EStepSettings& settings) {
  auto q = e_step(net, params, data, settings);
  return {data.sample_ids, net.targets(), std::move(q.deregulated)};
}

}  // namespace dereg
