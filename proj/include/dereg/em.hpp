#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <vector>

#include "dereg/factor_graph.hpp"
#include "dereg/model.hpp"
#include "dereg/network.hpp"

namespace dereg {

/// Posterior marginals of the observed-gene states and deregulation flags.
struct SampleMarginals {
  /// state[s](i, g) = q(S_{i,g} = s), s indexed by index_of(Ternary).
  std::array<Eigen::MatrixXd, 3> state;
  /// q(D_{i,g} = 1), samples x targets.
  Eigen::MatrixXd deregulated;
};

struct EStepSettings {
  fg::BpSettings bp{};
  /// Worker threads; 0 uses every available core.
  unsigned threads = 0;
};

/// Runs belief propagation on one compiled graph per sample. Samples are
/// independent, so they are processed in parallel. A zero-evidence failure is
/// rethrown with the sample id prepended.
SampleMarginals e_step(const RegulatoryNetwork& net, const ModelParams& params,
                       const ExpressionMatrix& data, const EStepSettings& settings = {});

/// Lower bound applied to every sigma, relative to the overall standard
/// deviation of the data.
inline constexpr double kSigmaFloorRatio = 1e-3;
/// A state whose total posterior mass is below this keeps its previous mu and sigma.
inline constexpr double kEmptyStateMass = 1e-12;

/// Closed-form maximizer of the expected complete-data log-likelihood, followed
/// by the sigma floor and the canonical reordering of states by increasing mu.
ModelParams m_step(const SampleMarginals& q, const ExpressionMatrix& data,
                   const RegulatoryNetwork& net, const ModelParams& previous);

/// Deterministic starting point: uniform alpha, epsilon 0.05, mu at the 20th,
/// 50th and 80th percentiles of all values, every sigma a quarter of the
/// spread between the outer two means.
ModelParams initial_params(const ExpressionMatrix& data);

struct FitSettings {
  double tol = 1e-4;
  int max_iterations = 100;
  EStepSettings estep{};
  /// Starting parameters; initial_params() when empty.
  std::optional<ModelParams> initial;
};

struct IterationRecord {
  ModelParams params;
  double max_change = 0.0;
};

struct FitResult {
  ModelParams params;
  int iterations = 0;
  std::vector<IterationRecord> trajectory;
  bool converged = false;
};

/// Alternates e_step and m_step until the largest parameter change drops below
/// `tol` or `max_iterations` is reached.
FitResult fit(const RegulatoryNetwork& net, const ExpressionMatrix& data,
              const FitSettings& settings = {});

/// q(D = 1) for every (sample, target) from a single E-step.
DeregulationScores score(const RegulatoryNetwork& net, const ModelParams& params,
                         const ExpressionMatrix& data, const EStepSettings& settings = {});

/// Overall standard deviation of every expression value.
double overall_sd(const ExpressionMatrix& data);

}  // namespace dereg
