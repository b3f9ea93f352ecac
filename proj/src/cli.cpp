#include "dereg/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <ostream>

#include "dereg/em.hpp"
#include "dereg/error.hpp"
#include "dereg/evaluation.hpp"
#include "dereg/io.hpp"
#include "dereg/simulator.hpp"

namespace dereg::cli {
namespace {

template <typename T, typename Reader>
T read_file(const fs::path& path, Reader&& reader) {
  auto in = io::open_in(path);
  return reader(in);
}

template <typename Writer>
void write_file(const fs::path& path, Writer&& writer) {
  auto out = io::open_out(path);
  writer(out);
  out.flush();
  if (!out) throw Error("write failed: " + path.string());
}

EStepSettings estep_settings(const InferenceConfig& c) {
  if (c.passes < 1) throw InvalidArgument("--passes must be >= 1");
  if (!(c.damping >= 0.0 && c.damping < 1.0)) throw InvalidArgument("--damping must lie in [0, 1)");
  return {{c.passes, c.damping}, c.threads};
}

ExpressionMatrix load_aligned(const RegulatoryNetwork& net, const fs::path& expression) {
  return align_to(net, read_file<ExpressionMatrix>(expression, [](auto& in) { return io::read_expression(in); }));
}

RegulatoryNetwork load_network(const fs::path& path) {
  return read_file<RegulatoryNetwork>(path, [](auto& in) { return io::read_network(in); });
}

ModelParams load_params(const fs::path& path) {
  return read_file<ModelParams>(path, [](auto& in) { return io::read_params(in); });
}

Eigen::Vector3d to_triple(const std::vector<double>& v) { return {v[0], v[1], v[2]}; }

void add_inference_options(CLI::App* cmd, InferenceConfig& c) {
  cmd->add_option("--passes", c.passes, "belief propagation sweeps per E-step")->capture_default_str();
  cmd->add_option("--damping", c.damping, "message damping in [0, 1)")->capture_default_str();
  cmd->add_option("--threads", c.threads, "worker threads (0 = all cores)")->capture_default_str();
}

}  // namespace

void cmd_simulate(const SimulateConfig& c) {
  if (c.samples < 1) throw InvalidArgument("--samples must be >= 1");
  const RegulatoryNetwork net =
      c.network ? load_network(*c.network)
                : random_network(c.regulators, c.targets, c.max_regulators, c.seed);
  const ModelParams params = c.params ? load_params(*c.params) : c.model;
  require_valid(params);
  const auto sim = simulate(net, params, c.samples, c.seed);

  fs::create_directories(c.out_dir);
  write_file(c.out_dir / "network.tsv", [&](auto& out) { io::write_network(out, net); });
  write_file(c.out_dir / "expression.tsv", [&](auto& out) { io::write_expression(out, sim.data); });
  write_file(c.out_dir / "states.tsv", [&](auto& out) { io::write_states(out, sim.truth); });
  write_file(c.out_dir / "deregulated.tsv", [&](auto& out) { io::write_mask(out, sim.truth); });
  write_file(c.out_dir / "params.tsv", [&](auto& out) { io::write_params(out, params); });
}

bool cmd_fit(const FitConfig& c) {
  const auto net = load_network(c.network);
  const auto data = load_aligned(net, c.expression);
  FitSettings settings;
  settings.tol = c.tol;
  settings.max_iterations = c.max_iterations;
  settings.estep = estep_settings(c.inference);
  if (c.initial) settings.initial = load_params(*c.initial);
  const auto result = fit(net, data, settings);
  write_file(c.out, [&](auto& out) { io::write_params(out, result.params); });
  if (c.trajectory) write_file(*c.trajectory, [&](auto& out) { io::write_trajectory(out, result); });
  return result.converged;
}

void cmd_score(const ScoreConfig& c) {
  const auto net = load_network(c.network);
  const auto data = load_aligned(net, c.expression);
  const auto params = load_params(c.params);
  const auto scores = score(net, params, data, estep_settings(c.inference));
  write_file(c.out, [&](auto& out) { io::write_scores(out, scores); });
}

double cmd_eval(const EvalConfig& c) {
  const auto scores = read_file<DeregulationScores>(c.scores, [](auto& in) { return io::read_scores(in); });
  const auto truth = read_file<GroundTruth>(c.truth, [](auto& in) { return io::read_mask(in); });
  if (scores.sample_ids != truth.sample_ids || scores.target_ids != truth.target_ids) {
    throw AlignmentError("scores and truth list different samples or targets");
  }
  const auto curve = pr_curve(scores, truth);
  write_file(c.out, [&](auto& out) { io::write_pr_curve(out, curve); });
  return curve.auprc;
}

std::size_t cmd_fdr(const FdrConfig& c) {
  const auto scores = read_file<DeregulationScores>(c.scores, [](auto& in) { return io::read_scores(in); });
  const auto selection = select_at_fdr(scores, c.target_fdr);
  write_file(c.out, [&](auto& out) { io::write_selection(out, selection); });
  return selection.selected.size();
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Posterior gene deregulation scoring on a regulatory network"};
  app.require_subcommand(1);

  SimulateConfig sim;
  std::vector<double> alpha, mu, sigma;
  auto* simulate_cmd = app.add_subcommand("simulate", "draw expression data from the model");
  simulate_cmd->add_option("--network", sim.network, "network TSV (random network when omitted)");
  simulate_cmd->add_option("--regulators", sim.regulators, "random network: regulator count")->capture_default_str();
  simulate_cmd->add_option("--targets", sim.targets, "random network: target count")->capture_default_str();
  simulate_cmd->add_option("--max-regulators", sim.max_regulators, "random network: regulators per target")
      ->capture_default_str();
  simulate_cmd->add_option("--params", sim.params, "params file (overrides the flags below)");
  simulate_cmd->add_option("--alpha", alpha, "regulator state proportions a-,a0,a+")->delimiter(',')->expected(3);
  simulate_cmd->add_option("--epsilon", sim.model.epsilon, "deregulation rate")->capture_default_str();
  simulate_cmd->add_option("--mu", mu, "means m-,m0,m+")->delimiter(',')->expected(3);
  simulate_cmd->add_option("--sigma", sigma, "standard deviations s-,s0,s+")->delimiter(',')->expected(3);
  simulate_cmd->add_option("--samples", sim.samples, "sample count")->capture_default_str();
  simulate_cmd->add_option("--seed", sim.seed, "random seed")->capture_default_str();
  simulate_cmd->add_option("--out-dir", sim.out_dir, "output directory")->required();

  FitConfig fitc;
  auto* fit_cmd = app.add_subcommand("fit", "estimate model parameters by EM");
  fit_cmd->add_option("--network", fitc.network)->required();
  fit_cmd->add_option("--expression", fitc.expression)->required();
  fit_cmd->add_option("--out", fitc.out, "fitted params file")->required();
  fit_cmd->add_option("--trajectory", fitc.trajectory, "per-iteration parameter log");
  fit_cmd->add_option("--init", fitc.initial, "starting params file");
  fit_cmd->add_option("--tol", fitc.tol, "stop when no parameter moves more than this")->capture_default_str();
  fit_cmd->add_option("--max-iters", fitc.max_iterations)->capture_default_str();
  add_inference_options(fit_cmd, fitc.inference);

  ScoreConfig scorec;
  auto* score_cmd = app.add_subcommand("score", "posterior deregulation probabilities");
  score_cmd->add_option("--network", scorec.network)->required();
  score_cmd->add_option("--expression", scorec.expression)->required();
  score_cmd->add_option("--params", scorec.params)->required();
  score_cmd->add_option("--out", scorec.out)->required();
  add_inference_options(score_cmd, scorec.inference);

  EvalConfig evalc;
  auto* eval_cmd = app.add_subcommand("eval", "precision-recall curve against a deregulation mask");
  eval_cmd->add_option("--scores", evalc.scores)->required();
  eval_cmd->add_option("--truth", evalc.truth, "deregulated.tsv from simulate")->required();
  eval_cmd->add_option("--out", evalc.out, "PR points TSV")->required();

  FdrConfig fdrc;
  auto* fdr_cmd = app.add_subcommand("fdr", "select pairs at an estimated false discovery rate");
  fdr_cmd->add_option("--scores", fdrc.scores)->required();
  fdr_cmd->add_option("--target-fdr", fdrc.target_fdr)->required();
  fdr_cmd->add_option("--out", fdrc.out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error\tconfig\t" << e.what() << '\n';
    return 2;
  }

  try {
    if (*simulate_cmd) {
      if (!alpha.empty()) sim.model.alpha = to_triple(alpha);
      if (!mu.empty()) sim.model.mu = to_triple(mu);
      if (!sigma.empty()) sim.model.sigma = to_triple(sigma);
      cmd_simulate(sim);
    } else if (*fit_cmd) {
      const bool converged = cmd_fit(fitc);
      out << "converged\t" << (converged ? "true" : "false") << '\n';
    } else if (*score_cmd) {
      cmd_score(scorec);
    } else if (*eval_cmd) {
      out << "auprc\t" << io::format_double(cmd_eval(evalc)) << '\n';
    } else if (*fdr_cmd) {
      out << "selected\t" << cmd_fdr(fdrc) << '\n';
    }
  } catch (const Error& e) {
    err << "error\t" << e.code() << '\t' << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error\tinternal\t" << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace dereg::cli
