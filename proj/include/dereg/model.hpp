#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "dereg/network.hpp"
#include "dereg/ternary.hpp"

namespace dereg {

/// Parameters of the generative model. Triples are indexed by index_of(Ternary),
/// i.e. (under, normal, over).
struct ModelParams {
  Eigen::Vector3d alpha = Eigen::Vector3d::Constant(1.0 / 3.0);
  double epsilon = 0.05;
  Eigen::Vector3d mu{-1.0, 0.0, 1.0};
  Eigen::Vector3d sigma = Eigen::Vector3d::Constant(0.5);

  /// Largest absolute difference over the ten scalar parameters.
  double max_abs_change(const ModelParams& other) const;

  friend bool operator==(const ModelParams& a, const ModelParams& b) {
    return a.alpha == b.alpha && a.epsilon == b.epsilon && a.mu == b.mu && a.sigma == b.sigma;
  }
};

/// Empty string when the invariants hold (simplex alpha, 0 <= epsilon < 1,
/// positive sigma, ordered mu), otherwise a description of the first failure.
std::string check_params(const ModelParams& params);
/// Throws InvalidArgument if check_params() fails.
void require_valid(const ModelParams& params);

/// Samples x genes expression values.
struct ExpressionMatrix {
  std::vector<std::string> sample_ids;
  std::vector<std::string> gene_ids;
  Eigen::MatrixXd values;  ///< rows: samples, columns: genes

  Eigen::Index samples() const { return values.rows(); }
};

/// Reorders columns into the network's gene order. Throws AlignmentError naming
/// missing and extra gene ids, or InvalidArgument for non-finite values.
ExpressionMatrix align_to(const RegulatoryNetwork& net, const ExpressionMatrix& data);

/// True when the gene ids are exactly the network's gene order.
bool is_aligned(const RegulatoryNetwork& net, const ExpressionMatrix& data);

/// Posterior deregulation probabilities q(D = 1), samples x targets.
struct DeregulationScores {
  std::vector<std::string> sample_ids;
  std::vector<std::string> target_ids;
  Eigen::MatrixXd scores;
};

}  // namespace dereg
