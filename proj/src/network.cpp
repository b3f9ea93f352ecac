#include "dereg/network.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "dereg/error.hpp"

namespace dereg {

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::DuplicateId:
      return "duplicate id";
    case ViolationKind::Overlap:
      return "overlap";
    case ViolationKind::UnknownRegulator:
      return "unknown regulator";
    case ViolationKind::EmptyRegulation:
      return "empty regulation";
  }
  return "?";
}

std::string ValidationReport::describe() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    const auto& v = violations[i];
    if (i) out << "; ";
    out << to_string(v.kind) << " [" << v.target << "]";
    if (!v.detail.empty()) out << ": " << v.detail;
  }
  return out.str();
}

ValidationReport validate_network(const std::vector<std::string>& regulators,
                                  const std::vector<std::string>& targets,
                                  const std::vector<std::vector<std::string>>& activators,
                                  const std::vector<std::vector<std::string>>& inhibitors) {
  ValidationReport report;
  auto add = [&](ViolationKind kind, std::string target, std::string detail = {}) {
    report.violations.push_back({kind, std::move(target), std::move(detail)});
  };

  std::unordered_set<std::string> seen;
  std::unordered_set<std::string> regulator_set;
  for (const auto& id : regulators) {
    if (!seen.insert(id).second) add(ViolationKind::DuplicateId, id, "listed twice");
    regulator_set.insert(id);
  }
  for (const auto& id : targets) {
    if (!seen.insert(id).second) {
      add(ViolationKind::DuplicateId, id,
          regulator_set.count(id) ? "both regulator and target" : "listed twice");
    }
  }

  if (activators.size() != targets.size() || inhibitors.size() != targets.size()) {
    add(ViolationKind::EmptyRegulation, "*", "regulation lists do not match target count");
    return report;
  }

  for (std::size_t g = 0; g < targets.size(); ++g) {
    const auto& target = targets[g];
    if (activators[g].empty() && inhibitors[g].empty()) {
      add(ViolationKind::EmptyRegulation, target, "no activator and no inhibitor");
    }
    std::unordered_set<std::string> act;
    for (const auto& a : activators[g]) {
      if (!regulator_set.count(a)) add(ViolationKind::UnknownRegulator, target, a);
      if (!act.insert(a).second) add(ViolationKind::DuplicateId, target, "activator " + a);
    }
    std::unordered_set<std::string> inh;
    for (const auto& i : inhibitors[g]) {
      if (!regulator_set.count(i)) add(ViolationKind::UnknownRegulator, target, i);
      if (!inh.insert(i).second) add(ViolationKind::DuplicateId, target, "inhibitor " + i);
      if (act.count(i)) add(ViolationKind::Overlap, target, i);
    }
  }
  return report;
}

RegulatoryNetwork::RegulatoryNetwork(std::vector<std::string> regulators,
                                     std::vector<std::string> targets,
                                     std::vector<std::vector<std::string>> activators,
                                     std::vector<std::vector<std::string>> inhibitors) {
  auto report = validate_network(regulators, targets, activators, inhibitors);
  if (!report.ok()) throw InvalidArgument("invalid network: " + report.describe());

  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < regulators.size(); ++i) index.emplace(regulators[i], i);
  regulation_.resize(targets.size());
  for (std::size_t g = 0; g < targets.size(); ++g) {
    for (const auto& a : activators[g]) regulation_[g].activators.push_back(index.at(a));
    for (const auto& i : inhibitors[g]) regulation_[g].inhibitors.push_back(index.at(i));
  }
  regulators_ = std::move(regulators);
  targets_ = std::move(targets);
}

std::size_t RegulatoryNetwork::edge_count() const {
  return std::accumulate(regulation_.begin(), regulation_.end(), std::size_t{0},
                         [](std::size_t acc, const TargetRegulation& r) {
                           return acc + r.activators.size() + r.inhibitors.size();
                         });
}

std::vector<std::string> RegulatoryNetwork::gene_ids() const {
  std::vector<std::string> ids = regulators_;
  ids.insert(ids.end(), targets_.begin(), targets_.end());
  return ids;
}

ValidationReport validate_network(const RegulatoryNetwork& net) {
  std::vector<std::vector<std::string>> act(net.target_count()), inh(net.target_count());
  for (std::size_t g = 0; g < net.target_count(); ++g) {
    for (auto a : net.regulation(g).activators) act[g].push_back(net.regulators().at(a));
    for (auto i : net.regulation(g).inhibitors) inh[g].push_back(net.regulators().at(i));
  }
  return validate_network(net.regulators(), net.targets(), act, inh);
}

}  // namespace dereg
