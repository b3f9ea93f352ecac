#pragma once

#include <span>
#include <string>
#include <vector>

#include "dereg/model.hpp"
#include "dereg/simulator.hpp"

namespace dereg {

struct PRPoint {
  double recall = 0.0;
  double precision = 0.0;
  double threshold = 0.0;  ///< pairs with score >= threshold are called
};

struct PRCurve {
  std::vector<PRPoint> points;  ///< decreasing threshold, non-decreasing recall
  double auprc = 0.0;
};

/// Precision-recall sweep over the distinct positive scores, highest first.
/// Equal scores form a single point. Pairs scored exactly 0 are never called.
/// The area is the right-continuous step integral sum (r_k - r_{k-1}) p_k.
/// Throws InvalidArgument when there is no positive label or sizes differ.
PRCurve pr_curve(std::span<const double> scores, std::span<const bool> labels);

/// Same, pairing a score matrix with the deregulation mask of a simulation.
PRCurve pr_curve(const DeregulationScores& scores, const GroundTruth& truth);

struct FdrPoint {
  std::size_t calls = 0;  ///< K
  double estimated_fdr = 0.0;
};

/// (K - S_K) / K for every prefix of scores sorted in decreasing order, where
/// S_K is the sum of the top K posterior probabilities.
std::vector<FdrPoint> estimate_fdr(std::span<const double> sorted_scores);

struct PairCall {
  std::string sample;
  std::string target;
  double score = 0.0;
};

struct FdrSelection {
  double threshold = 1.0;  ///< lowest selected score; 1 when nothing is selected
  std::vector<PairCall> selected;
  double estimated_fdr = 0.0;
};

/// Longest prefix of pairs, by decreasing score with ties ordered by (sample
/// id, target id), whose estimated FDR stays at or below `target_fdr`.
FdrSelection select_at_fdr(const DeregulationScores& scores, double target_fdr);

}  // namespace dereg
