#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace dereg {

/// Regulators of one target, as indices into RegulatoryNetwork::regulators().
struct TargetRegulation {
  std::vector<std::size_t> activators;
  std::vector<std::size_t> inhibitors;

  friend bool operator==(const TargetRegulation&, const TargetRegulation&) = default;
};

/// Bipartite regulator -> target structure. Gene order is fixed by construction
/// and defines the column order of every matrix in the library: regulators
/// first, then targets.
class RegulatoryNetwork {
 public:
  RegulatoryNetwork() = default;

  /// Builds a network from identifiers. Throws InvalidArgument when
  /// validate_network() reports any violation.
  RegulatoryNetwork(std::vector<std::string> regulators, std::vector<std::string> targets,
                    std::vector<std::vector<std::string>> activators,
                    std::vector<std::vector<std::string>> inhibitors);

  const std::vector<std::string>& regulators() const { return regulators_; }
  const std::vector<std::string>& targets() const { return targets_; }
  const TargetRegulation& regulation(std::size_t target) const { return regulation_[target]; }

  std::size_t regulator_count() const { return regulators_.size(); }
  std::size_t target_count() const { return targets_.size(); }
  std::size_t gene_count() const { return regulators_.size() + targets_.size(); }
  /// Column of a target in gene order.
  std::size_t target_column(std::size_t target) const { return regulators_.size() + target; }

  /// Number of regulator -> target edges.
  std::size_t edge_count() const;
  /// Regulators followed by targets.
  std::vector<std::string> gene_ids() const;

  friend bool operator==(const RegulatoryNetwork&, const RegulatoryNetwork&) = default;

 private:
  std::vector<std::string> regulators_;
  std::vector<std::string> targets_;
  std::vector<TargetRegulation> regulation_;
};

enum class ViolationKind {
  DuplicateId,
  Overlap,
  UnknownRegulator,
  EmptyRegulation,
};

struct Violation {
  ViolationKind kind;
  std::string target;  ///< offending target, or the duplicated id
  std::string detail;
};

const char* to_string(ViolationKind kind);

/// Outcome of validate_network(); lists every problem found, not just the first.
struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string describe() const;
};

/// Checks the network invariants on raw identifier lists.
ValidationReport validate_network(const std::vector<std::string>& regulators,
                                  const std::vector<std::string>& targets,
                                  const std::vector<std::vector<std::string>>& activators,
                                  const std::vector<std::vector<std::string>>& inhibitors);

/// Re-checks an already constructed network (always ok unless it was built
/// through unchecked means).
ValidationReport validate_network(const RegulatoryNetwork& net);

}  // namespace dereg
