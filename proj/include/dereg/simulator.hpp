#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "dereg/model.hpp"
#include "dereg/network.hpp"

namespace dereg {

using StateMatrix = Eigen::Matrix<std::int8_t, Eigen::Dynamic, Eigen::Dynamic>;
using MaskMatrix = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Realized hidden states of a simulation.
struct GroundTruth {
  std::vector<std::string> sample_ids;
  std::vector<std::string> gene_ids;
  std::vector<std::string> target_ids;
  StateMatrix states;        ///< samples x genes, values in {-1, 0, +1}
  MaskMatrix deregulated;    ///< samples x targets
};

struct Simulation {
  ExpressionMatrix data;
  GroundTruth truth;
};

/// Draws n samples from the generative model. Each sample uses its own
/// sub-stream of `seed`, so results do not depend on evaluation order.
Simulation simulate(const RegulatoryNetwork& net, const ModelParams& params, int n,
                    std::uint64_t seed);

/// Random bipartite network: regulators tf1..tfR, targets g1..gT; each target
/// gets k ~ U{1..min(max_regulators, r)} distinct regulators, each an activator
/// or an inhibitor with probability 1/2.
RegulatoryNetwork random_network(int regulators, int targets, int max_regulators,
                                 std::uint64_t seed);

/// True when every non-deregulated target state equals the truth table of its
/// realized collective states.
bool is_consistent(const RegulatoryNetwork& net, const GroundTruth& truth);

}  // namespace dereg
