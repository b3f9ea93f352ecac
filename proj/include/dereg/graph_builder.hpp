#pragma once

#include <Eigen/Dense>
#include <vector>

#include "dereg/factor_graph.hpp"
#include "dereg/model.hpp"
#include "dereg/network.hpp"

namespace dereg {

/// Model variables of one target in a compiled graph.
struct TargetNodes {
  fg::VariableId activators;   ///< collective state of A(g)
  fg::VariableId inhibitors;   ///< collective state of I(g)
  fg::VariableId expected;     ///< truth-table output
  fg::VariableId deregulated;  ///< D, cardinality 2
  /// Partial collective states of the combination trees (activators first).
  std::vector<fg::VariableId> internal;
};

/// Factor graph of the model posterior for a single sample. Ternary variables
/// use index_of(Ternary) as their discrete state.
struct CompiledSampleGraph {
  fg::FactorGraph<double> graph;
  std::vector<fg::VariableId> gene_state;  ///< S_g for every gene, network order
  std::vector<TargetNodes> targets;
};

/// Compiles (network, params, expression row) into a factor graph whose
/// unnormalized joint is proportional to the posterior of the hidden states.
///
/// Factors: a prior alpha on every regulator state; a Gaussian evidence factor
/// on every gene state (rescaled so its largest entry is 1); balanced binary
/// trees of three-variable agreement factors for each co-activator and
/// co-inhibitor set (an equality factor for a singleton, a pin to 0 for an
/// empty set); the truth table over (activators, inhibitors, expected); and one
/// factor over (expected, deregulated, state) worth 1 - epsilon when the target
/// follows its regulators and epsilon / 2 for each of the two other states
/// when it is deregulated. Every factor has degree <= 3.
CompiledSampleGraph build_sample_graph(const RegulatoryNetwork& net, const ModelParams& params,
                                       const Eigen::Ref<const Eigen::VectorXd>& expression_row);

/// Node counts of the compiled graph for one target (its regulators excluded).
struct TargetCensus {
  std::size_t variables = 0;           ///< S, S^A, S^I, S^R, D plus internal nodes
  std::size_t internal_variables = 0;  ///< partial collective states
  std::size_t factors = 0;
};

struct GraphCensus {
  std::vector<TargetCensus> per_target;
  std::size_t variables = 0;
  std::size_t factors = 0;
  std::size_t nodes() const { return variables + factors; }
};

/// Counts the nodes build_sample_graph() creates, without building anything.
GraphCensus hidden_variable_census(const RegulatoryNetwork& net);

/// Compiled nodes never exceed this multiple of 2E + G (E edges, G genes).
/// A target with one regulator costs 10 nodes for 3 units of 2E + G, which is
/// the worst case; targets with two or more regulators stay at or below 2.
inline constexpr double kNodeCountFactor = 10.0 / 3.0;

}  // namespace dereg
