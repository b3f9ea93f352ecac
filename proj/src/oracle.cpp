#include "dereg/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dereg/em.hpp"
#include "dereg/error.hpp"

namespace dereg::oracle {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_gaussian(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return -std::log(sigma) - 0.5 * std::log(2.0 * std::numbers::pi) - 0.5 * z * z;
}

// 0 * log 0 = 0
double xlogy(double x, double y) { return x == 0.0 ? 0.0 : x * std::log(y); }

Ternary collective_of(const std::vector<std::size_t>& members, const std::vector<Ternary>& states) {
  std::vector<Ternary> picked;
  picked.reserve(members.size());
  for (auto m : members) picked.push_back(states[m]);
  return collective_state(picked);
}

void check_size(const RegulatoryNetwork& net) {
  const double r = static_cast<double>(net.regulator_count());
  const double t = static_cast<double>(net.target_count());
  const double configurations = std::pow(3.0, r) * std::pow(2.0, t) * std::pow(3.0, t);
  if (configurations > kMaxConfigurations) {
    throw InvalidArgument("instance too large to enumerate (" + std::to_string(configurations) +
                          " configurations)");
  }
}

void check_row(const RegulatoryNetwork& net, const Eigen::Ref<const Eigen::VectorXd>& row) {
  if (row.size() != static_cast<Eigen::Index>(net.gene_count())) {
    throw InvalidArgument("expression row does not match the network gene count");
  }
}

}  // namespace

double log_joint(const RegulatoryNetwork& net, const ModelParams& params,
                 const Eigen::Ref<const Eigen::VectorXd>& expression_row,
                 const HiddenConfiguration& z) {
  check_row(net, expression_row);
  const std::size_t r = net.regulator_count();
  double total = 0.0;
  for (std::size_t g = 0; g < r; ++g) total += std::log(params.alpha(index_of(z.states[g])));
  for (std::size_t g = 0; g < net.target_count(); ++g) {
    const auto& reg = net.regulation(g);
    const Ternary expected =
        truth_table(collective_of(reg.activators, z.states), collective_of(reg.inhibitors, z.states));
    const Ternary actual = z.states[r + g];
    if (z.deregulated[g]) {
      if (actual == expected) return kNegInf;
      total += std::log(params.epsilon / 2.0);
    } else {
      if (actual != expected) return kNegInf;
      total += std::log(1.0 - params.epsilon);
    }
  }
  for (std::size_t g = 0; g < net.gene_count(); ++g) {
    const int s = index_of(z.states[g]);
    total += log_gaussian(expression_row(static_cast<Eigen::Index>(g)), params.mu(s), params.sigma(s));
  }
  return total;
}

JointEnumeration enumerate_posterior(const RegulatoryNetwork& net, const ModelParams& params,
                                     const Eigen::Ref<const Eigen::VectorXd>& expression_row) {
  check_size(net);
  check_row(net, expression_row);
  const std::size_t r = net.regulator_count();
  const std::size_t t = net.target_count();

  JointEnumeration out;
  std::vector<double> log_weights;

  // Every free variable is ternary here: a regulator state, or per target one
  // of {follow the truth table, deregulated to state -1/0/+1}. The log joint
  // rules out the deregulated choice that coincides with the truth table.
  std::vector<int> digit(r + t, 0);
  HiddenConfiguration z;
  z.states.assign(r + t, Ternary::Normal);
  z.deregulated.assign(t, 0);
  for (;;) {
    for (std::size_t g = 0; g < r; ++g) z.states[g] = ternary_from_index(digit[g]);
    for (std::size_t g = 0; g < t; ++g) {
      const auto& reg = net.regulation(g);
      const Ternary expected = truth_table(collective_of(reg.activators, z.states),
                                           collective_of(reg.inhibitors, z.states));
      const int choice = digit[r + g];
      z.deregulated[g] = choice == 0 ? 0 : 1;
      z.states[r + g] = choice == 0 ? expected : ternary_from_index(choice - 1);
    }
    const double lw = log_joint(net, params, expression_row, z);
    if (lw > kNegInf) {
      out.configurations.push_back(z);
      log_weights.push_back(lw);
    }

    std::size_t k = 0;
    for (; k < r + t; ++k) {
      const int base = k < r ? 3 : 4;
      if (++digit[k] < base) break;
      digit[k] = 0;
    }
    if (k == r + t) break;
  }

  if (log_weights.empty()) throw ZeroEvidenceError("no configuration has positive probability");
  const double top = *std::max_element(log_weights.begin(), log_weights.end());
  double sum = 0.0;
  out.weights.reserve(log_weights.size());
  for (double lw : log_weights) {
    out.weights.push_back(std::exp(lw - top));
    sum += out.weights.back();
  }
  for (double& w : out.weights) w /= sum;
  out.log_normalizer = top + std::log(sum);
  return out;
}

ExactMarginals exact_marginals(const RegulatoryNetwork& net, const ModelParams& params,
                               const Eigen::Ref<const Eigen::VectorXd>& expression_row) {
  const auto joint = enumerate_posterior(net, params, expression_row);
  const auto genes = static_cast<Eigen::Index>(net.gene_count());
  const auto t = static_cast<Eigen::Index>(net.target_count());

  ExactMarginals m;
  m.state = Eigen::MatrixX3d::Zero(genes, 3);
  m.deregulated = Eigen::VectorXd::Zero(t);
  m.activators = Eigen::MatrixX3d::Zero(t, 3);
  m.inhibitors = Eigen::MatrixX3d::Zero(t, 3);
  m.expected = Eigen::MatrixX3d::Zero(t, 3);

  for (std::size_t c = 0; c < joint.configurations.size(); ++c) {
    const auto& z = joint.configurations[c];
    const double w = joint.weights[c];
    for (Eigen::Index g = 0; g < genes; ++g) m.state(g, index_of(z.states[static_cast<std::size_t>(g)])) += w;
    for (Eigen::Index g = 0; g < t; ++g) {
      const auto& reg = net.regulation(static_cast<std::size_t>(g));
      const Ternary a = collective_of(reg.activators, z.states);
      const Ternary i = collective_of(reg.inhibitors, z.states);
      m.activators(g, index_of(a)) += w;
      m.inhibitors(g, index_of(i)) += w;
      m.expected(g, index_of(truth_table(a, i))) += w;
      if (z.deregulated[static_cast<std::size_t>(g)]) m.deregulated(g) += w;
    }
  }
  return m;
}

double expected_complete_loglik(const RegulatoryNetwork& net, const ModelParams& params,
                                const ExpressionMatrix& data,
                                const ModelParams& posterior_params) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < data.values.rows(); ++i) {
    const Eigen::VectorXd row = data.values.row(i).transpose();
    const auto joint = enumerate_posterior(net, posterior_params, row);
    for (std::size_t c = 0; c < joint.configurations.size(); ++c) {
      if (joint.weights[c] == 0.0) continue;
      total += joint.weights[c] * log_joint(net, params, row, joint.configurations[c]);
    }
  }
  return total;
}

double expected_complete_loglik(const RegulatoryNetwork& net, const ModelParams& params,
                                const ExpressionMatrix& data, const SampleMarginals& q) {
  const auto r = static_cast<Eigen::Index>(net.regulator_count());
  const auto genes = static_cast<Eigen::Index>(net.gene_count());
  double total = 0.0;
  for (Eigen::Index i = 0; i < data.values.rows(); ++i) {
    for (Eigen::Index g = 0; g < genes; ++g) {
      for (int s = 0; s < 3; ++s) {
        const double w = q.state[static_cast<std::size_t>(s)](i, g);
        if (w == 0.0) continue;
        if (g < r) total += xlogy(w, params.alpha(s));
        total += w * log_gaussian(data.values(i, g), params.mu(s), params.sigma(s));
      }
    }
    for (Eigen::Index g = 0; g < q.deregulated.cols(); ++g) {
      const double d = q.deregulated(i, g);
      total += xlogy(d, params.epsilon / 2.0) + xlogy(1.0 - d, 1.0 - params.epsilon);
    }
  }
  return total;
}

double log_likelihood(const RegulatoryNetwork& net, const ModelParams& params,
                      const ExpressionMatrix& data) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < data.values.rows(); ++i) {
    const Eigen::VectorXd row = data.values.row(i).transpose();
    total += enumerate_posterior(net, params, row).log_normalizer;
  }
  return total;
}

}  // namespace dereg::oracle
