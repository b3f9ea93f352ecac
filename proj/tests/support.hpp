#pragma once

// Generators and brute-force references shared by the test suites. Nothing
// here calls into the message-passing or graph-compilation code.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "dereg/factor_graph.hpp"
#include "dereg/model.hpp"
#include "dereg/network.hpp"
#include "dereg/oracle.hpp"
#include "dereg/em.hpp"

namespace dereg::test {

/// Exact marginals of a factor graph by summing the joint over every assignment.
inline std::vector<Eigen::VectorXd> enumerate_marginals(const fg::FactorGraph<double>& g) {
  const std::size_t nv = g.variable_count();
  std::vector<Eigen::VectorXd> marg(nv);
  for (std::uint32_t v = 0; v < nv; ++v) marg[v] = Eigen::VectorXd::Zero(g.cardinality({v}));
  std::vector<int> x(nv, 0);
  double total = 0.0;
  for (;;) {
    const double w = g.joint_weight(x);
    total += w;
    for (std::size_t v = 0; v < nv; ++v) marg[v](x[v]) += w;
    std::size_t k = 0;
    for (; k < nv; ++k) {
      if (++x[k] < g.cardinality({static_cast<std::uint32_t>(k)})) break;
      x[k] = 0;
    }
    if (k == nv) break;
  }
  for (auto& m : marg) m /= total;
  return marg;
}

/// Random acyclic factor graph: variables attached one factor at a time, each
/// new factor joining one existing variable with up to two fresh ones, plus
/// random unary factors. Tables are strictly positive.
inline fg::FactorGraph<double> random_tree_graph(std::mt19937_64& rng, int max_variables,
                                                 int max_cardinality = 3) {
  std::uniform_int_distribution<int> card(2, max_cardinality);
  std::uniform_real_distribution<double> weight(0.05, 1.0);
  fg::FactorGraph<double> g;
  std::vector<fg::VariableId> vars{g.add_variable(card(rng))};
  while (static_cast<int>(vars.size()) < max_variables) {
    const int room = max_variables - static_cast<int>(vars.size());
    const int fresh = std::uniform_int_distribution<int>(1, std::min(2, room))(rng);
    std::vector<fg::VariableId> scope{
        vars[std::uniform_int_distribution<std::size_t>(0, vars.size() - 1)(rng)]};
    for (int k = 0; k < fresh; ++k) {
      scope.push_back(g.add_variable(card(rng)));
      vars.push_back(scope.back());
    }
    std::shuffle(scope.begin(), scope.end(), rng);
    Eigen::Index size = 1;
    for (auto v : scope) size *= g.cardinality(v);
    Eigen::VectorXd table(size);
    for (auto& t : table) t = weight(rng);
    g.add_factor(scope, table);
  }
  std::bernoulli_distribution unary(0.5);
  for (auto v : vars) {
    if (!unary(rng)) continue;
    Eigen::VectorXd table(g.cardinality(v));
    for (auto& t : table) t = weight(rng);
    g.add_factor({v}, table);
  }
  return g;
}

/// Random valid parameters with ordered means.
inline ModelParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ModelParams p;
  Eigen::Vector3d a(0.1 + u(rng), 0.1 + u(rng), 0.1 + u(rng));
  p.alpha = a / a.sum();
  p.alpha(2) = 1.0 - p.alpha(0) - p.alpha(1);
  p.epsilon = 0.02 + 0.4 * u(rng);
  p.mu = {-1.5 + u(rng), -0.3 + 0.6 * u(rng), 0.5 + u(rng)};
  p.sigma = {0.2 + u(rng), 0.2 + u(rng), 0.2 + u(rng)};
  return p;
}

/// Network without shared regulators, so every compiled graph is a tree.
/// Each target owns between 1 and `max_per_target` regulators, split randomly
/// between activators and inhibitors.
inline RegulatoryNetwork random_tree_network(std::mt19937_64& rng, int max_regulators,
                                             int max_targets, int max_per_target = 4) {
  const int t = std::uniform_int_distribution<int>(1, max_targets)(rng);
  std::vector<std::string> regs, targets;
  std::vector<std::vector<std::string>> act(static_cast<std::size_t>(t)), inh(static_cast<std::size_t>(t));
  int budget = max_regulators;
  for (int g = 0; g < t; ++g) {
    targets.push_back("g" + std::to_string(g + 1));
    const int left_for_others = t - g - 1;
    const int cap = std::max(1, std::min(max_per_target, budget - left_for_others));
    const int k = std::uniform_int_distribution<int>(1, cap)(rng);
    budget -= k;
    for (int j = 0; j < k; ++j) {
      regs.push_back("tf" + std::to_string(regs.size() + 1));
      (std::bernoulli_distribution(0.5)(rng) ? act : inh)[static_cast<std::size_t>(g)].push_back(regs.back());
    }
  }
  return RegulatoryNetwork(regs, targets, act, inh);
}

/// Expression row drawn around the means with extra spread.
inline Eigen::VectorXd random_row(std::mt19937_64& rng, const RegulatoryNetwork& net) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Eigen::VectorXd x(static_cast<Eigen::Index>(net.gene_count()));
  for (auto& v : x) v = u(rng);
  return x;
}

inline double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

// Golden-section search for the maximum of a unimodal function on [lo, hi].
template <typename F>
inline double golden_max(F&& f, double lo, double hi) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > 1e-11) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  return (a + b) / 2.0;
}

// Coordinate-wise maximization of the oracle objective; knows nothing about
// the closed forms.
inline ModelParams numerical_maximizer(const RegulatoryNetwork& net, const ExpressionMatrix& data,
                                const SampleMarginals& q, ModelParams p) {
  auto objective = [&](const ModelParams& candidate) {
    return oracle::expected_complete_loglik(net, candidate, data, q);
  };
  auto coordinate = [&](auto setter, double lo, double hi) {
    const double best = golden_max(
        [&](double v) {
          ModelParams c = p;
          setter(c, v);
          return objective(c);
        },
        lo, hi);
    setter(p, best);
  };
  for (int cycle = 0; cycle < 400; ++cycle) {
    const ModelParams before = p;
    // move mass between each pair of alpha entries, keeping the sum fixed
    for (auto [s, t] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
      const double pair_total = p.alpha(s) + p.alpha(t);
      coordinate(
          [s, t, pair_total](ModelParams& c, double v) {
            c.alpha(s) = v;
            c.alpha(t) = pair_total - v;
          },
          1e-12, pair_total - 1e-12);
    }
    coordinate([](ModelParams& c, double v) { c.epsilon = v; }, 1e-12, 1.0 - 1e-12);
    for (int s = 0; s < 3; ++s) {
      coordinate([s](ModelParams& c, double v) { c.mu(s) = v; }, -10.0, 10.0);
      coordinate([s](ModelParams& c, double v) { c.sigma(s) = v; }, 1e-3, 10.0);
    }
    if (p.max_abs_change(before) < 1e-12) break;
  }
  return p;
}

}  // namespace dereg::test
