#include "dereg/model.hpp"

#include <cmath>
#include <sstream>
#include <unordered_map>

#include "dereg/error.hpp"

namespace dereg {

double ModelParams::max_abs_change(const ModelParams& other) const {
  double change = std::abs(epsilon - other.epsilon);
  change = std::max(change, (alpha - other.alpha).cwiseAbs().maxCoeff());
  change = std::max(change, (mu - other.mu).cwiseAbs().maxCoeff());
  change = std::max(change, (sigma - other.sigma).cwiseAbs().maxCoeff());
  return change;
}

std::string check_params(const ModelParams& p) {
  std::ostringstream err;
  if (!p.alpha.allFinite() || !p.mu.allFinite() || !p.sigma.allFinite() ||
      !std::isfinite(p.epsilon)) {
    err << "parameters must be finite";
  } else if ((p.alpha.array() < 0.0).any() || std::abs(p.alpha.sum() - 1.0) > 1e-12) {
    err << "alpha must be a probability vector (sum " << p.alpha.sum() << ")";
  } else if (!(p.epsilon >= 0.0 && p.epsilon < 1.0)) {
    err << "epsilon must lie in [0, 1), got " << p.epsilon;
  } else if ((p.sigma.array() <= 0.0).any()) {
    err << "sigma must be positive";
  } else if (!(p.mu(0) <= p.mu(1) && p.mu(1) <= p.mu(2))) {
    err << "mu must be ordered (under <= normal <= over)";
  }
  return err.str();
}

void require_valid(const ModelParams& params) {
  if (auto msg = check_params(params); !msg.empty()) throw InvalidArgument(msg);
}

bool is_aligned(const RegulatoryNetwork& net, const ExpressionMatrix& data) {
  return data.gene_ids == net.gene_ids() &&
         data.values.cols() == static_cast<Eigen::Index>(net.gene_count()) &&
         data.values.rows() == static_cast<Eigen::Index>(data.sample_ids.size());
}

ExpressionMatrix align_to(const RegulatoryNetwork& net, const ExpressionMatrix& data) {
  if (data.values.rows() != static_cast<Eigen::Index>(data.sample_ids.size()) ||
      data.values.cols() != static_cast<Eigen::Index>(data.gene_ids.size())) {
    throw InvalidArgument("expression matrix shape does not match its identifiers");
  }
  if (!data.values.allFinite()) throw InvalidArgument("expression values must be finite");

  std::unordered_map<std::string, Eigen::Index> column;
  for (std::size_t j = 0; j < data.gene_ids.size(); ++j) {
    if (!column.emplace(data.gene_ids[j], static_cast<Eigen::Index>(j)).second) {
      throw AlignmentError("duplicate gene id in expression data: " + data.gene_ids[j]);
    }
  }

  const auto genes = net.gene_ids();
  std::vector<std::string> missing;
  for (const auto& g : genes) {
    if (!column.count(g)) missing.push_back(g);
  }
  std::vector<std::string> extra;
  if (genes.size() != data.gene_ids.size() || !missing.empty()) {
    std::unordered_map<std::string, int> wanted;
    for (const auto& g : genes) wanted[g] = 1;
    for (const auto& g : data.gene_ids) {
      if (!wanted.count(g)) extra.push_back(g);
    }
  }
  if (!missing.empty() || !extra.empty()) {
    std::ostringstream msg;
    msg << "expression genes do not match network;";
    msg << " missing:";
    for (const auto& g : missing) msg << ' ' << g;
    msg << "; extra:";
    for (const auto& g : extra) msg << ' ' << g;
    throw AlignmentError(msg.str());
  }

  ExpressionMatrix out;
  out.sample_ids = data.sample_ids;
  out.gene_ids = genes;
  out.values.resize(data.values.rows(), static_cast<Eigen::Index>(genes.size()));
  for (std::size_t j = 0; j < genes.size(); ++j) {
    out.values.col(static_cast<Eigen::Index>(j)) = data.values.col(column.at(genes[j]));
  }
  return out;
}

}  // namespace dereg
