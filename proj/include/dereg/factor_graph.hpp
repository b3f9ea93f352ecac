#pragma once

// Discrete factor graphs with dense tables and flooding sum-product belief
// propagation. Independent of the regulation model.

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dereg/error.hpp"

namespace dereg::fg {

struct VariableId {
  std::uint32_t index = 0;
  friend bool operator==(VariableId, VariableId) = default;
};

struct FactorId {
  std::uint32_t index = 0;
  friend bool operator==(FactorId, FactorId) = default;
};

/// Variables and factors. A factor table is stored row-major over its scope:
/// the last scope variable varies fastest.
template <typename Scalar = double>
class FactorGraph {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  VariableId add_variable(int cardinality) {
    if (cardinality < 2) throw InvalidArgument("variable cardinality must be >= 2");
    cardinality_.push_back(cardinality);
    return VariableId{static_cast<std::uint32_t>(cardinality_.size() - 1)};
  }

  FactorId add_factor(std::span<const VariableId> scope, const Vector& table) {
    if (scope.empty()) throw InvalidArgument("factor scope must not be empty");
    Eigen::Index expected = 1;
    for (auto v : scope) {
      if (v.index >= cardinality_.size()) {
        throw InvalidArgument("factor scope references undeclared variable " +
                              std::to_string(v.index));
      }
      expected *= cardinality_[v.index];
    }
    for (std::size_t a = 0; a < scope.size(); ++a) {
      for (std::size_t b = a + 1; b < scope.size(); ++b) {
        if (scope[a] == scope[b]) throw InvalidArgument("factor scope repeats a variable");
      }
    }
    if (table.size() != expected) {
      throw InvalidArgument("factor table has " + std::to_string(table.size()) +
                            " entries, scope needs " + std::to_string(expected));
    }
    if ((table.array() < Scalar(0)).any() || !(table.array() > Scalar(0)).any() ||
        !table.allFinite()) {
      throw InvalidArgument("factor table must be finite, non-negative and not all zero");
    }
    scope_offset_.push_back(scope_.size());
    scope_.insert(scope_.end(), scope.begin(), scope.end());
    table_offset_.push_back(static_cast<std::size_t>(tables_.size()));
    tables_.insert(tables_.end(), table.data(), table.data() + table.size());
    return FactorId{static_cast<std::uint32_t>(scope_offset_.size() - 1)};
  }

  FactorId add_factor(std::initializer_list<VariableId> scope, const Vector& table) {
    return add_factor(std::span<const VariableId>(scope.begin(), scope.size()), table);
  }

  std::size_t variable_count() const { return cardinality_.size(); }
  std::size_t factor_count() const { return scope_offset_.size(); }
  int cardinality(VariableId v) const { return cardinality_[v.index]; }

  std::span<const VariableId> scope(FactorId f) const {
    return {scope_.data() + scope_offset_[f.index], degree(f)};
  }
  std::size_t degree(FactorId f) const {
    const auto end = f.index + 1 < scope_offset_.size() ? scope_offset_[f.index + 1] : scope_.size();
    return end - scope_offset_[f.index];
  }
  Eigen::Map<const Vector> table(FactorId f) const {
    const auto end =
        f.index + 1 < table_offset_.size() ? table_offset_[f.index + 1] : tables_.size();
    return {tables_.data() + table_offset_[f.index],
            static_cast<Eigen::Index>(end - table_offset_[f.index])};
  }

  std::size_t max_factor_degree() const {
    std::size_t deg = 0;
    for (std::uint32_t f = 0; f < factor_count(); ++f) deg = std::max(deg, degree(FactorId{f}));
    return deg;
  }

  /// Product of every factor table at a full assignment (one state per variable).
  Scalar joint_weight(std::span<const int> assignment) const {
    if (assignment.size() != variable_count()) throw InvalidArgument("assignment size mismatch");
    Scalar w(1);
    for (std::uint32_t f = 0; f < factor_count(); ++f) {
      std::size_t idx = 0;
      for (auto v : scope(FactorId{f})) {
        idx = idx * static_cast<std::size_t>(cardinality_[v.index]) +
              static_cast<std::size_t>(assignment[v.index]);
      }
      w *= tables_[table_offset_[f] + idx];
    }
    return w;
  }

 private:
  std::vector<int> cardinality_;
  std::vector<std::size_t> scope_offset_;
  std::vector<VariableId> scope_;
  std::vector<std::size_t> table_offset_;
  std::vector<Scalar> tables_;
};

/// Total number of variable and factor nodes.
template <typename Scalar>
std::size_t node_count(const FactorGraph<Scalar>& graph) {
  return graph.variable_count() + graph.factor_count();
}

/// Normalized belief per variable.
template <typename Scalar = double>
class MarginalSet {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  MarginalSet() = default;
  MarginalSet(std::vector<std::size_t> offsets, Vector values)
      : offsets_(std::move(offsets)), values_(std::move(values)) {}

  std::size_t size() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }

  auto operator[](VariableId v) const {
    return values_.segment(static_cast<Eigen::Index>(offsets_[v.index]),
                           static_cast<Eigen::Index>(offsets_[v.index + 1] - offsets_[v.index]));
  }

  friend bool operator==(const MarginalSet& a, const MarginalSet& b) {
    return a.offsets_ == b.offsets_ && a.values_.size() == b.values_.size() &&
           (a.values_.array() == b.values_.array()).all();
  }

 private:
  std::vector<std::size_t> offsets_;
  Vector values_;
};

struct BpSettings {
  int passes = 10;
  /// Weight of the previous message in each update; 0 disables damping.
  double damping = 0.0;
};

/// Flooding sum-product on a fixed graph. Each sweep recomputes every
/// variable-to-factor message from the previous factor-to-variable messages,
/// then every factor-to-variable message. Messages live in the linear domain and
/// are renormalized to sum 1 after every update.
template <typename Scalar = double>
class SumProduct {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  SumProduct(const FactorGraph<Scalar>& graph, double damping = 0.0)
      : graph_(graph), damping_(static_cast<Scalar>(damping)) {
    if (!(damping >= 0.0 && damping < 1.0)) throw InvalidArgument("damping must lie in [0, 1)");

    const std::size_t nv = graph.variable_count();
    const std::size_t nf = graph.factor_count();

    // edges are numbered factor by factor, in scope order
    factor_edge_offset_.resize(nf + 1);
    std::vector<std::size_t> var_degree(nv, 0);
    std::size_t edges = 0;
    for (std::uint32_t f = 0; f < nf; ++f) {
      factor_edge_offset_[f] = edges;
      for (auto v : graph.scope(FactorId{f})) {
        edge_variable_.push_back(v.index);
        ++var_degree[v.index];
        ++edges;
      }
    }
    factor_edge_offset_[nf] = edges;

    var_edge_offset_.assign(nv + 1, 0);
    for (std::size_t v = 0; v < nv; ++v) var_edge_offset_[v + 1] = var_edge_offset_[v] + var_degree[v];
    var_edges_.resize(edges);
    std::vector<std::size_t> fill(var_edge_offset_.begin(), var_edge_offset_.end() - 1);
    for (std::size_t e = 0; e < edges; ++e) var_edges_[fill[edge_variable_[e]]++] = e;

    message_offset_.resize(edges + 1);
    message_offset_[0] = 0;
    for (std::size_t e = 0; e < edges; ++e) {
      message_offset_[e + 1] =
          message_offset_[e] + static_cast<std::size_t>(graph.cardinality(VariableId{edge_variable_[e]}));
    }
    const auto total = static_cast<Eigen::Index>(message_offset_[edges]);
    to_factor_.resize(total);
    to_variable_.resize(total);
    for (std::size_t e = 0; e < edges; ++e) {
      auto len = static_cast<Eigen::Index>(message_offset_[e + 1] - message_offset_[e]);
      to_variable_.segment(static_cast<Eigen::Index>(message_offset_[e]), len).setConstant(Scalar(1) / Scalar(len));
    }
    to_factor_ = to_variable_;

    std::size_t max_degree = 0;
    for (std::uint32_t f = 0; f < nf; ++f) max_degree = std::max(max_degree, graph.degree(FactorId{f}));
    states_.resize(max_degree);
    partial_.resize(max_degree + 1);
  }

  std::size_t edge_count() const { return edge_variable_.size(); }

  /// Message from the factor side of edge `e` to its variable.
  auto factor_to_variable(std::size_t e) const { return segment(to_variable_, e); }
  /// Message from the variable side of edge `e` to its factor.
  auto variable_to_factor(std::size_t e) const { return segment(to_factor_, e); }

  void sweep() {
    update_variable_messages();
    update_factor_messages();
  }

  MarginalSet<Scalar> beliefs() const {
    const std::size_t nv = graph_.variable_count();
    std::vector<std::size_t> offsets(nv + 1, 0);
    for (std::size_t v = 0; v < nv; ++v) {
      offsets[v + 1] = offsets[v] + static_cast<std::size_t>(graph_.cardinality(VariableId{static_cast<std::uint32_t>(v)}));
    }
    Vector values(static_cast<Eigen::Index>(offsets[nv]));
    for (std::size_t v = 0; v < nv; ++v) {
      auto belief = values.segment(static_cast<Eigen::Index>(offsets[v]),
                                   static_cast<Eigen::Index>(offsets[v + 1] - offsets[v]));
      belief.setOnes();
      for (std::size_t k = var_edge_offset_[v]; k < var_edge_offset_[v + 1]; ++k) {
        belief.array() *= factor_to_variable(var_edges_[k]).array();
        rescale(belief);
      }
      const Scalar z = belief.sum();
      if (!(z > Scalar(0))) {
        throw ZeroEvidenceError("zero belief normalizer at variable " + std::to_string(v));
      }
      belief /= z;
    }
    return {std::move(offsets), std::move(values)};
  }

 private:
  auto segment(const Vector& buffer, std::size_t e) const {
    return buffer.segment(static_cast<Eigen::Index>(message_offset_[e]),
                          static_cast<Eigen::Index>(message_offset_[e + 1] - message_offset_[e]));
  }
  auto segment(Vector& buffer, std::size_t e) {
    return buffer.segment(static_cast<Eigen::Index>(message_offset_[e]),
                          static_cast<Eigen::Index>(message_offset_[e + 1] - message_offset_[e]));
  }

  // Running products are rescaled by their maximum so that high-degree
  // variables cannot underflow; outgoing messages are normalized anyway.
  template <typename Derived>
  static void rescale(Eigen::MatrixBase<Derived>& v) {
    const Scalar m = v.maxCoeff();
    if (m > Scalar(0)) v /= m;
  }

  template <typename Derived>
  void commit(Eigen::MatrixBase<Derived>&& out, const Vector& fresh, std::size_t e, const char* what) {
    const Scalar z = fresh.sum();
    if (!(z > Scalar(0))) {
      throw ZeroEvidenceError(std::string("zero normalizer in ") + what + " message on edge " +
                              std::to_string(e));
    }
    if (damping_ > Scalar(0)) {
      out = (Scalar(1) - damping_) * (fresh / z) + damping_ * out;
      out /= out.sum();
    } else {
      out = fresh / z;
    }
  }

  void update_variable_messages() {
    const std::size_t nv = graph_.variable_count();
    for (std::size_t v = 0; v < nv; ++v) {
      const std::size_t begin = var_edge_offset_[v], end = var_edge_offset_[v + 1];
      if (begin == end) continue;
      const auto card = static_cast<Eigen::Index>(graph_.cardinality(VariableId{static_cast<std::uint32_t>(v)}));
      scratch_.resize(static_cast<Eigen::Index>(end - begin) * card);
      Vector running = Vector::Ones(card);
      for (std::size_t k = begin; k < end; ++k) {
        scratch_.segment(static_cast<Eigen::Index>(k - begin) * card, card) = running;
        running.array() *= factor_to_variable(var_edges_[k]).array();
        rescale(running);
      }
      running.setOnes();
      for (std::size_t k = end; k-- > begin;) {
        auto slot = scratch_.segment(static_cast<Eigen::Index>(k - begin) * card, card);
        slot.array() *= running.array();
        running.array() *= factor_to_variable(var_edges_[k]).array();
        rescale(running);
        fresh_ = slot;
        commit(segment(to_factor_, var_edges_[k]), fresh_, var_edges_[k], "variable-to-factor");
      }
    }
  }

  void update_factor_messages() {
    const std::size_t nf = graph_.factor_count();
    for (std::uint32_t f = 0; f < nf; ++f) {
      const FactorId id{f};
      const std::size_t first = factor_edge_offset_[f];
      const std::size_t deg = factor_edge_offset_[f + 1] - first;
      const auto table = graph_.table(id);

      accum_.resize(static_cast<Eigen::Index>(message_offset_[first + deg] - message_offset_[first]));
      accum_.setZero();
      std::fill(states_.begin(), states_.begin() + static_cast<std::ptrdiff_t>(deg), std::size_t{0});

      const Scalar* incoming = to_factor_.data();
      for (Eigen::Index idx = 0; idx < table.size(); ++idx) {
        const Scalar t = table(idx);
        if (t != Scalar(0)) {
          // partial_[k] = product of incoming messages of scope positions < k
          partial_[0] = t;
          for (std::size_t k = 0; k < deg; ++k) {
            partial_[k + 1] = partial_[k] * incoming[message_offset_[first + k] + states_[k]];
          }
          Scalar suffix(1);
          for (std::size_t k = deg; k-- > 0;) {
            accum_(static_cast<Eigen::Index>(message_offset_[first + k] - message_offset_[first] + states_[k])) +=
                partial_[k] * suffix;
            suffix *= incoming[message_offset_[first + k] + states_[k]];
          }
        }
        for (std::size_t k = deg; k-- > 0;) {
          if (++states_[k] < message_offset_[first + k + 1] - message_offset_[first + k]) break;
          states_[k] = 0;
        }
      }

      for (std::size_t k = 0; k < deg; ++k) {
        const std::size_t e = first + k;
        fresh_ = accum_.segment(static_cast<Eigen::Index>(message_offset_[e] - message_offset_[first]),
                                static_cast<Eigen::Index>(message_offset_[e + 1] - message_offset_[e]));
        commit(segment(to_variable_, e), fresh_, e, "factor-to-variable");
      }
    }
  }

  const FactorGraph<Scalar>& graph_;
  Scalar damping_;

  std::vector<std::size_t> factor_edge_offset_;
  std::vector<std::uint32_t> edge_variable_;
  std::vector<std::size_t> var_edge_offset_;
  std::vector<std::size_t> var_edges_;
  std::vector<std::size_t> message_offset_;
  Vector to_factor_;
  Vector to_variable_;

  Vector scratch_, fresh_, accum_;
  std::vector<std::size_t> states_;
  std::vector<Scalar> partial_;
};

/// Runs `settings.passes` flooding sweeps and returns the variable beliefs.
/// Throws ZeroEvidenceError when a normalizer vanishes.
template <typename Scalar>
MarginalSet<Scalar> run_sum_product(const FactorGraph<Scalar>& graph, const BpSettings& settings) {
  if (settings.passes < 1) throw InvalidArgument("passes must be >= 1");
  SumProduct<Scalar> bp(graph, settings.damping);
  for (int pass = 0; pass < settings.passes; ++pass) bp.sweep();
  return bp.beliefs();
}

}  // namespace dereg::fg
