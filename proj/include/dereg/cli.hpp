#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dereg/model.hpp"

namespace dereg::cli {

namespace fs = std::filesystem;

/// Settings shared by every command that runs belief propagation.
struct InferenceConfig {
  int passes = 10;
  double damping = 0.0;
  unsigned threads = 0;  ///< 0: all available cores
};

struct SimulateConfig {
  std::optional<fs::path> network;  ///< random network when empty
  int regulators = 20;
  int targets = 50;
  int max_regulators = 3;
  std::optional<fs::path> params;   ///< `model` when empty
  ModelParams model{Eigen::Vector3d::Constant(1.0 / 3.0), 0.1, {-1.0, 0.0, 1.0},
                    Eigen::Vector3d::Constant(0.5)};
  int samples = 50;
  std::uint64_t seed = 1;
  fs::path out_dir;
};

struct FitConfig {
  fs::path network;
  fs::path expression;
  fs::path out;
  std::optional<fs::path> trajectory;
  std::optional<fs::path> initial;
  double tol = 1e-4;
  int max_iterations = 100;
  InferenceConfig inference;
};

struct ScoreConfig {
  fs::path network;
  fs::path expression;
  fs::path params;
  fs::path out;
  InferenceConfig inference;
};

struct EvalConfig {
  fs::path scores;
  fs::path truth;  ///< deregulation mask
  fs::path out;
};

struct FdrConfig {
  fs::path scores;
  double target_fdr = 0.1;
  fs::path out;
};

/// Writes network.tsv, expression.tsv, states.tsv, deregulated.tsv and
/// params.tsv into out_dir.
void cmd_simulate(const SimulateConfig& config);
/// Writes the fitted params and, if requested, the per-iteration trajectory.
/// Returns whether EM converged.
bool cmd_fit(const FitConfig& config);
void cmd_score(const ScoreConfig& config);
/// Writes the PR points and returns the AUPRC.
double cmd_eval(const EvalConfig& config);
/// Writes the selection and returns the number of selected pairs.
std::size_t cmd_fdr(const FdrConfig& config);

/// Parses argv and dispatches. Returns the process exit code; failures print
/// one `error<TAB>code<TAB>message` line to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dereg::cli
