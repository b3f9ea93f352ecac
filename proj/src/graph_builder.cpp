#include "dereg/graph_builder.hpp"

#include <cmath>
#include <optional>
#include <span>

#include "dereg/error.hpp"
#include "dereg/ternary.hpp"

namespace dereg {
namespace {

using fg::VariableId;
using Table = fg::FactorGraph<double>::Vector;

const Table& agreement_table() {
  static const Table table = [] {
    Table t = Table::Zero(27);
    for (auto a : kTernaryStates) {
      for (auto b : kTernaryStates) {
        t(index_of(a) * 9 + index_of(b) * 3 + index_of(combine(a, b))) = 1.0;
      }
    }
    return t;
  }();
  return table;
}

const Table& equality_table() {
  static const Table table = [] {
    Table t = Table::Zero(9);
    for (int s = 0; s < 3; ++s) t(s * 3 + s) = 1.0;
    return t;
  }();
  return table;
}

const Table& truth_factor_table() {
  static const Table table = [] {
    Table t = Table::Zero(27);
    for (auto a : kTernaryStates) {
      for (auto i : kTernaryStates) {
        t(index_of(a) * 9 + index_of(i) * 3 + index_of(truth_table(a, i))) = 1.0;
      }
    }
    return t;
  }();
  return table;
}

Table deregulation_table(double epsilon) {
  // scope (expected, deregulated, state)
  Table t = Table::Zero(18);
  for (int r = 0; r < 3; ++r) {
    for (int s = 0; s < 3; ++s) {
      t(r * 6 + 0 * 3 + s) = s == r ? 1.0 - epsilon : 0.0;
      t(r * 6 + 1 * 3 + s) = s != r ? epsilon / 2.0 : 0.0;
    }
  }
  return t;
}

Table evidence_table(const ModelParams& p, double x) {
  Eigen::Array3d log_kernel =
      -p.sigma.array().log() - (x - p.mu.array()).square() / (2.0 * p.sigma.array().square());
  return (log_kernel - log_kernel.maxCoeff()).unaryExpr([](double v) { return std::exp(v); }).matrix();
}

// Ties `leaves` to `root` through a balanced tree of agreement factors.
class CollectiveCompiler {
 public:
  CollectiveCompiler(fg::FactorGraph<double>& graph, std::vector<VariableId>& internal)
      : graph_(graph), internal_(internal) {}

  void compile(std::span<const VariableId> leaves, VariableId root) {
    if (leaves.empty()) {
      graph_.add_factor({root}, Eigen::Vector3d(0.0, 1.0, 0.0));
    } else if (leaves.size() == 1) {
      graph_.add_factor({leaves[0], root}, equality_table());
    } else {
      reduce(leaves, root);
    }
  }

 private:
  VariableId reduce(std::span<const VariableId> leaves, std::optional<VariableId> out) {
    if (leaves.size() == 1) return leaves[0];
    const auto half = leaves.size() / 2;
    const VariableId left = reduce(leaves.first(half), std::nullopt);
    const VariableId right = reduce(leaves.subspan(half), std::nullopt);
    VariableId node;
    if (out) {
      node = *out;
    } else {
      node = graph_.add_variable(3);
      internal_.push_back(node);
    }
    graph_.add_factor({left, right, node}, agreement_table());
    return node;
  }

  fg::FactorGraph<double>& graph_;
  std::vector<VariableId>& internal_;
};

std::size_t internal_nodes(std::size_t set_size) { return set_size >= 2 ? set_size - 2 : 0; }
std::size_t collective_factors(std::size_t set_size) { return set_size >= 2 ? set_size - 1 : 1; }

}  // namespace

CompiledSampleGraph build_sample_graph(const RegulatoryNetwork& net, const ModelParams& params,
                                       const Eigen::Ref<const Eigen::VectorXd>& expression_row) {
  if (expression_row.size() != static_cast<Eigen::Index>(net.gene_count())) {
    throw InvalidArgument("expression row has " + std::to_string(expression_row.size()) +
                          " values, network has " + std::to_string(net.gene_count()) + " genes");
  }
  if (!expression_row.allFinite()) throw InvalidArgument("expression row must be finite");
  require_valid(params);

  CompiledSampleGraph out;
  auto& graph = out.graph;
  const std::size_t r = net.regulator_count();
  const std::size_t t = net.target_count();

  out.gene_state.reserve(r + t);
  for (std::size_t g = 0; g < r + t; ++g) out.gene_state.push_back(graph.add_variable(3));

  for (std::size_t g = 0; g < r; ++g) graph.add_factor({out.gene_state[g]}, params.alpha);
  for (std::size_t g = 0; g < r + t; ++g) {
    graph.add_factor({out.gene_state[g]},
                     evidence_table(params, expression_row(static_cast<Eigen::Index>(g))));
  }

  const Table dereg = deregulation_table(params.epsilon);
  std::vector<VariableId> leaves;
  out.targets.reserve(t);
  for (std::size_t g = 0; g < t; ++g) {
    TargetNodes nodes;
    nodes.activators = graph.add_variable(3);
    nodes.inhibitors = graph.add_variable(3);
    nodes.expected = graph.add_variable(3);
    nodes.deregulated = graph.add_variable(2);

    const auto& reg = net.regulation(g);
    CollectiveCompiler compiler(graph, nodes.internal);
    leaves.clear();
    for (auto a : reg.activators) leaves.push_back(out.gene_state[a]);
    compiler.compile(leaves, nodes.activators);
    leaves.clear();
    for (auto i : reg.inhibitors) leaves.push_back(out.gene_state[i]);
    compiler.compile(leaves, nodes.inhibitors);

    graph.add_factor({nodes.activators, nodes.inhibitors, nodes.expected}, truth_factor_table());
    graph.add_factor({nodes.expected, nodes.deregulated, out.gene_state[r + g]}, dereg);
    out.targets.push_back(std::move(nodes));
  }
  return out;
}

GraphCensus hidden_variable_census(const RegulatoryNetwork& net) {
  GraphCensus census;
  const std::size_t r = net.regulator_count();
  // regulator state, its prior and its evidence
  census.variables = r;
  census.factors = 2 * r;
  for (std::size_t g = 0; g < net.target_count(); ++g) {
    const auto& reg = net.regulation(g);
    TargetCensus tc;
    tc.internal_variables = internal_nodes(reg.activators.size()) + internal_nodes(reg.inhibitors.size());
    tc.variables = 5 + tc.internal_variables;
    // evidence, truth table, deregulation, plus the two collective structures
    tc.factors = 3 + collective_factors(reg.activators.size()) + collective_factors(reg.inhibitors.size());
    census.variables += tc.variables;
    census.factors += tc.factors;
    census.per_target.push_back(tc);
  }
  return census;
}

}  // namespace dereg
