#pragma once

// Tab-separated file formats. Every floating-point value is written with 17
// significant digits so that write-then-read is exact.

#include <filesystem>
#include <fstream>
#include <string>

#include "dereg/em.hpp"
#include "dereg/evaluation.hpp"
#include "dereg/model.hpp"
#include "dereg/network.hpp"
#include "dereg/simulator.hpp"

namespace dereg::io {

/// `target<TAB>regulator<TAB>role` edge list, role in {activator, inhibitor},
/// after a required header line. An optional `#regulators<TAB>id...` line
/// declares regulator order, including regulators without targets; otherwise
/// regulators and targets are ordered by first appearance. Other lines
/// starting with '#' are comments.
RegulatoryNetwork read_network(std::istream& in);
void write_network(std::ostream& out, const RegulatoryNetwork& net);

/// Genes as rows, samples as columns; header `gene<TAB>sample...`.
ExpressionMatrix read_expression(std::istream& in);
void write_expression(std::ostream& out, const ExpressionMatrix& data);

/// Key/value lines after a `format<TAB>dereg-params<TAB>1` tag.
ModelParams read_params(std::istream& in);
void write_params(std::ostream& out, const ModelParams& params);

/// Samples x targets matrix with header `sample<TAB>target...`.
DeregulationScores read_scores(std::istream& in);
void write_scores(std::ostream& out, const DeregulationScores& scores);

/// Realized states (samples x genes, values -1/0/1).
void write_states(std::ostream& out, const GroundTruth& truth);
/// Deregulation mask (samples x targets, values 0/1).
void write_mask(std::ostream& out, const GroundTruth& truth);
GroundTruth read_ground_truth(std::istream& states, std::istream& mask);
/// Mask only; states are left empty.
GroundTruth read_mask(std::istream& mask);

void write_trajectory(std::ostream& out, const FitResult& result);
void write_pr_curve(std::ostream& out, const PRCurve& curve);
void write_selection(std::ostream& out, const FdrSelection& selection);
FdrSelection read_selection(std::istream& in);

/// Opens a file for reading or writing, throwing dereg::Error on failure.
std::ifstream open_in(const std::filesystem::path& path);
std::ofstream open_out(const std::filesystem::path& path);

/// "%.17g"
std::string format_double(double value);

}  // namespace dereg::io
