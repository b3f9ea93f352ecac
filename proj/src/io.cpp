#include "dereg/io.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "dereg/error.hpp"

namespace dereg::io {
namespace {

constexpr std::string_view kParamsTag = "dereg-params";
constexpr std::string_view kParamsVersion = "1";

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

// Next non-empty line, without a trailing '\r'. Tracks line numbers for errors.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++number_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw FormatError("line " + std::to_string(number_) + ": " + what);
  }

  double parse_double(const std::string& text) const {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = text.data() + text.size();
    if (!text.empty() && text.front() == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) fail("not a number: '" + text + "'");
    return value;
  }

  long parse_int(const std::string& text) const {
    long value = 0;
    const char* begin = text.data();
    const char* end = text.data() + text.size();
    if (!text.empty() && text.front() == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) fail("not an integer: '" + text + "'");
    return value;
  }

 private:
  std::istream& in_;
  std::size_t number_ = 0;
};

struct Table {
  std::vector<std::string> column_ids;
  std::vector<std::string> row_ids;
  std::vector<std::vector<std::string>> cells;
};

// Header `<corner><TAB>col...`, then one row per line.
Table read_table(std::istream& in, std::string_view corner) {
  LineReader reader(in);
  std::string line;
  if (!reader.next(line)) reader.fail("missing header");
  auto header = split_tabs(line);
  if (header.front() != corner) reader.fail("header must start with '" + std::string(corner) + "'");
  Table table;
  table.column_ids.assign(header.begin() + 1, header.end());
  while (reader.next(line)) {
    auto fields = split_tabs(line);
    if (fields.size() != header.size()) {
      reader.fail("expected " + std::to_string(header.size()) + " fields, got " +
                  std::to_string(fields.size()));
    }
    table.row_ids.push_back(fields.front());
    table.cells.emplace_back(fields.begin() + 1, fields.end());
  }
  return table;
}

Eigen::MatrixXd parse_matrix(const Table& table) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(table.row_ids.size()),
                    static_cast<Eigen::Index>(table.column_ids.size()));
  for (std::size_t i = 0; i < table.cells.size(); ++i) {
    for (std::size_t j = 0; j < table.cells[i].size(); ++j) {
      const auto& text = table.cells[i][j];
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
      if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw FormatError("row '" + table.row_ids[i] + "': not a number: '" + text + "'");
      }
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = value;
    }
  }
  return m;
}

void write_row_header(std::ostream& out, std::string_view corner, const std::vector<std::string>& ids) {
  out << corner;
  for (const auto& id : ids) out << '\t' << id;
  out << '\n';
}

template <typename Matrix, typename Fmt>
void write_matrix(std::ostream& out, std::string_view corner, const std::vector<std::string>& row_ids,
                  const std::vector<std::string>& column_ids, const Matrix& m, Fmt&& fmt_cell) {
  write_row_header(out, corner, column_ids);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << row_ids[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << '\t' << fmt_cell(m(i, j));
    out << '\n';
  }
}

std::string join_triple(const Eigen::Vector3d& v) {
  return fmt::format("{}\t{}\t{}", format_double(v(0)), format_double(v(1)), format_double(v(2)));
}

}  // namespace

std::string format_double(double value) { return fmt::format("{:.17g}", value); }

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open for reading: " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + path.string());
  return out;
}

RegulatoryNetwork read_network(std::istream& in) {
  LineReader reader(in);
  std::string line;
  if (!reader.next(line)) reader.fail("missing header");
  if (split_tabs(line) != std::vector<std::string>{"target", "regulator", "role"}) {
    reader.fail("header must be 'target<TAB>regulator<TAB>role'");
  }

  std::vector<std::string> regulators, targets;
  std::unordered_set<std::string> seen_regulator;
  std::unordered_map<std::string, std::size_t> target_index;
  std::vector<std::vector<std::string>> act, inh;
  auto note_regulator = [&](const std::string& id) {
    if (seen_regulator.insert(id).second) regulators.push_back(id);
  };

  while (reader.next(line)) {
    if (line.front() == '#') {
      auto fields = split_tabs(line);
      if (fields.front() == "#regulators") {
        for (std::size_t k = 1; k < fields.size(); ++k) note_regulator(fields[k]);
      }
      continue;
    }
    auto fields = split_tabs(line);
    if (fields.size() != 3) reader.fail("expected 3 fields");
    const auto& [target, regulator, role] = std::tie(fields[0], fields[1], fields[2]);
    if (target.empty() || regulator.empty()) reader.fail("empty identifier");
    auto [it, inserted] = target_index.emplace(target, targets.size());
    if (inserted) {
      targets.push_back(target);
      act.emplace_back();
      inh.emplace_back();
    }
    note_regulator(regulator);
    if (role == "activator") {
      act[it->second].push_back(regulator);
    } else if (role == "inhibitor") {
      inh[it->second].push_back(regulator);
    } else {
      reader.fail("role must be 'activator' or 'inhibitor', got '" + role + "'");
    }
  }
  auto report = validate_network(regulators, targets, act, inh);
  if (!report.ok()) throw FormatError("invalid network: " + report.describe());
  return RegulatoryNetwork(std::move(regulators), std::move(targets), std::move(act), std::move(inh));
}

void write_network(std::ostream& out, const RegulatoryNetwork& net) {
  out << "target\tregulator\trole\n";
  write_row_header(out, "#regulators", net.regulators());
  for (std::size_t g = 0; g < net.target_count(); ++g) {
    const auto& reg = net.regulation(g);
    for (auto a : reg.activators) out << net.targets()[g] << '\t' << net.regulators()[a] << "\tactivator\n";
    for (auto i : reg.inhibitors) out << net.targets()[g] << '\t' << net.regulators()[i] << "\tinhibitor\n";
  }
}

ExpressionMatrix read_expression(std::istream& in) {
  const auto table = read_table(in, "gene");
  ExpressionMatrix data;
  data.sample_ids = table.column_ids;
  data.gene_ids = table.row_ids;
  data.values = parse_matrix(table).transpose();
  if (!data.values.allFinite()) throw FormatError("expression values must be finite");
  return data;
}

void write_expression(std::ostream& out, const ExpressionMatrix& data) {
  write_matrix(out, "gene", data.gene_ids, data.sample_ids, data.values.transpose(), format_double);
}

ModelParams read_params(std::istream& in) {
  LineReader reader(in);
  std::string line;
  if (!reader.next(line)) reader.fail("empty params file");
  auto tag = split_tabs(line);
  if (tag.size() != 3 || tag[0] != "format" || tag[1] != kParamsTag) {
    reader.fail("missing 'format<TAB>dereg-params<TAB>1' tag");
  }
  if (tag[2] != kParamsVersion) reader.fail("unsupported params version " + tag[2]);

  ModelParams p;
  std::unordered_set<std::string> seen;
  while (reader.next(line)) {
    if (line.front() == '#') continue;
    auto fields = split_tabs(line);
    const auto& key = fields.front();
    if (!seen.insert(key).second) reader.fail("duplicate key " + key);
    auto triple = [&](Eigen::Vector3d& v) {
      if (fields.size() != 4) reader.fail(key + " needs 3 values");
      for (int s = 0; s < 3; ++s) v(s) = reader.parse_double(fields[static_cast<std::size_t>(s + 1)]);
    };
    if (key == "alpha") {
      triple(p.alpha);
    } else if (key == "mu") {
      triple(p.mu);
    } else if (key == "sigma") {
      triple(p.sigma);
    } else if (key == "epsilon") {
      if (fields.size() != 2) reader.fail("epsilon needs 1 value");
      p.epsilon = reader.parse_double(fields[1]);
    } else {
      reader.fail("unknown key " + key);
    }
  }
  for (const char* key : {"alpha", "epsilon", "mu", "sigma"}) {
    if (!seen.count(key)) throw FormatError(std::string("params file lacks ") + key);
  }
  if (auto msg = check_params(p); !msg.empty()) throw FormatError("invalid params: " + msg);
  return p;
}

void write_params(std::ostream& out, const ModelParams& p) {
  out << "format\t" << kParamsTag << '\t' << kParamsVersion << '\n';
  out << "# triples ordered (under, normal, over)\n";
  out << "alpha\t" << join_triple(p.alpha) << '\n';
  out << "epsilon\t" << format_double(p.epsilon) << '\n';
  out << "mu\t" << join_triple(p.mu) << '\n';
  out << "sigma\t" << join_triple(p.sigma) << '\n';
}

DeregulationScores read_scores(std::istream& in) {
  const auto table = read_table(in, "sample");
  DeregulationScores s{table.row_ids, table.column_ids, parse_matrix(table)};
  if ((s.scores.array() < 0.0).any() || (s.scores.array() > 1.0).any()) {
    throw FormatError("scores must lie in [0, 1]");
  }
  return s;
}

void write_scores(std::ostream& out, const DeregulationScores& scores) {
  write_matrix(out, "sample", scores.sample_ids, scores.target_ids, scores.scores, format_double);
}

void write_states(std::ostream& out, const GroundTruth& truth) {
  write_matrix(out, "sample", truth.sample_ids, truth.gene_ids, truth.states,
               [](std::int8_t v) { return std::to_string(static_cast<int>(v)); });
}

void write_mask(std::ostream& out, const GroundTruth& truth) {
  write_matrix(out, "sample", truth.sample_ids, truth.target_ids, truth.deregulated,
               [](bool v) { return v ? "1" : "0"; });
}

GroundTruth read_mask(std::istream& mask) {
  const auto table = read_table(mask, "sample");
  const auto values = parse_matrix(table);
  if (((values.array() != 0.0) && (values.array() != 1.0)).any()) {
    throw FormatError("deregulation mask must contain only 0 and 1");
  }
  GroundTruth truth;
  truth.sample_ids = table.row_ids;
  truth.target_ids = table.column_ids;
  truth.deregulated = values.array() != 0.0;
  return truth;
}

GroundTruth read_ground_truth(std::istream& states, std::istream& mask) {
  GroundTruth truth = read_mask(mask);
  const auto table = read_table(states, "sample");
  if (table.row_ids != truth.sample_ids) throw FormatError("states and mask list different samples");
  const auto values = parse_matrix(table);
  if (((values.array() != -1.0) && (values.array() != 0.0) && (values.array() != 1.0)).any()) {
    throw FormatError("states must be -1, 0 or 1");
  }
  truth.gene_ids = table.column_ids;
  truth.states = values.cast<std::int8_t>();
  return truth;
}

void write_trajectory(std::ostream& out, const FitResult& result) {
  out << "iteration\talpha_under\talpha_normal\talpha_over\tepsilon\tmu_under\tmu_normal\tmu_over"
         "\tsigma_under\tsigma_normal\tsigma_over\tmax_change\n";
  for (std::size_t k = 0; k < result.trajectory.size(); ++k) {
    const auto& rec = result.trajectory[k];
    out << (k + 1) << '\t' << join_triple(rec.params.alpha) << '\t' << format_double(rec.params.epsilon)
        << '\t' << join_triple(rec.params.mu) << '\t' << join_triple(rec.params.sigma) << '\t'
        << format_double(rec.max_change) << '\n';
  }
}

void write_pr_curve(std::ostream& out, const PRCurve& curve) {
  out << "recall\tprecision\tthreshold\n";
  for (const auto& p : curve.points) {
    out << format_double(p.recall) << '\t' << format_double(p.precision) << '\t'
        << format_double(p.threshold) << '\n';
  }
}

void write_selection(std::ostream& out, const FdrSelection& selection) {
  out << "threshold\t" << format_double(selection.threshold) << '\n';
  out << "estimated_fdr\t" << format_double(selection.estimated_fdr) << '\n';
  out << "selected\t" << selection.selected.size() << '\n';
  out << "sample\ttarget\tscore\n";
  for (const auto& call : selection.selected) {
    out << call.sample << '\t' << call.target << '\t' << format_double(call.score) << '\n';
  }
}

FdrSelection read_selection(std::istream& in) {
  LineReader reader(in);
  std::string line;
  FdrSelection sel;
  auto expect_key = [&](const char* key) {
    if (!reader.next(line)) reader.fail(std::string("missing ") + key);
    auto fields = split_tabs(line);
    if (fields.size() != 2 || fields[0] != key) reader.fail(std::string("expected ") + key);
    return fields[1];
  };
  sel.threshold = reader.parse_double(expect_key("threshold"));
  sel.estimated_fdr = reader.parse_double(expect_key("estimated_fdr"));
  const long count = reader.parse_int(expect_key("selected"));
  if (!reader.next(line) || line != "sample\ttarget\tscore") reader.fail("missing selection header");
  while (reader.next(line)) {
    auto fields = split_tabs(line);
    if (fields.size() != 3) reader.fail("expected 3 fields");
    sel.selected.push_back({fields[0], fields[1], reader.parse_double(fields[2])});
  }
  if (static_cast<long>(sel.selected.size()) != count) reader.fail("selected count mismatch");
  return sel;
}

}  // namespace dereg::io
