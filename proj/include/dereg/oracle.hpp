#pragma once

// Brute-force inference over the generative model for small instances. Works
// directly from the model definition and shares no code with the graph
// compiler, so it can serve as ground truth for it.

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "dereg/model.hpp"
#include "dereg/network.hpp"
#include "dereg/ternary.hpp"

namespace dereg {

struct SampleMarginals;

namespace oracle {

/// Upper bound on 3^r * 2^t * 3^t accepted by the enumerating functions.
inline constexpr double kMaxConfigurations = 1e7;

/// Hidden states that are not determined by others: every gene state and every
/// deregulation flag. Collective and expected states follow from these.
struct HiddenConfiguration {
  std::vector<Ternary> states;  ///< network gene order
  std::vector<std::uint8_t> deregulated;
};

/// Every configuration with non-zero prior mass, weighted by its posterior
/// probability given one expression row.
struct JointEnumeration {
  std::vector<HiddenConfiguration> configurations;
  std::vector<double> weights;      ///< normalized, sum to 1
  double log_normalizer = 0.0;      ///< log p(x | theta)
};

/// log p(x, z | theta) straight from the generative process; -inf when z is
/// impossible (a non-deregulated target off its truth-table state, or a
/// deregulated one on it).
double log_joint(const RegulatoryNetwork& net, const ModelParams& params,
                 const Eigen::Ref<const Eigen::VectorXd>& expression_row,
                 const HiddenConfiguration& z);

/// Throws InvalidArgument when the instance is too large to enumerate.
JointEnumeration enumerate_posterior(const RegulatoryNetwork& net, const ModelParams& params,
                                     const Eigen::Ref<const Eigen::VectorXd>& expression_row);

/// Exact posterior marginals for one sample. Rows of the Nx3 matrices are
/// distributions over (under, normal, over).
struct ExactMarginals {
  Eigen::MatrixX3d state;        ///< every gene
  Eigen::VectorXd deregulated;   ///< q(D = 1) per target
  Eigen::MatrixX3d activators;   ///< collective state of A(g)
  Eigen::MatrixX3d inhibitors;   ///< collective state of I(g)
  Eigen::MatrixX3d expected;     ///< truth-table output
};

ExactMarginals exact_marginals(const RegulatoryNetwork& net, const ModelParams& params,
                               const Eigen::Ref<const Eigen::VectorXd>& expression_row);

/// sum_z q(z) log p(X, z | theta) where q is the exact posterior under
/// `posterior_params`, evaluated by enumeration over every sample.
double expected_complete_loglik(const RegulatoryNetwork& net, const ModelParams& params,
                                const ExpressionMatrix& data,
                                const ModelParams& posterior_params);

/// Same quantity from per-variable marginals. The log joint is a sum of terms
/// that each involve a single gene state or deregulation flag, so marginals
/// suffice whenever q only supports consistent configurations.
double expected_complete_loglik(const RegulatoryNetwork& net, const ModelParams& params,
                                const ExpressionMatrix& data, const SampleMarginals& q);

/// log p(X | theta), by enumeration.
double log_likelihood(const RegulatoryNetwork& net, const ModelParams& params,
                      const ExpressionMatrix& data);

}  // namespace oracle
}  // namespace dereg
