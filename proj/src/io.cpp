#include "bandcov/io.hpp"

#include "bandcov/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string_view>

namespace bandcov {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

}  // namespace

ParsedObservations parse_long_csv(std::istream& in, std::optional<int> p, double t_min, double t_max) {
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;

  struct Pending {
    std::vector<std::pair<int, double>> entries;
    std::map<int, std::size_t> first_line;
  };
  std::vector<std::string> order;
  std::map<std::string, Pending> by_subject;
  int max_index = 0;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty()) continue;
    const auto fields = split_commas(view);
    if (!header_seen) {
      if (fields.size() != 3 || fields[0] != "subject" || fields[1] != "index" || fields[2] != "value")
        throw ParseError("expected header 'subject,index,value'", line_no);
      header_seen = true;
      continue;
    }
    if (fields.size() != 3)
      throw ParseError("expected 3 fields, found " + std::to_string(fields.size()), line_no);
    if (fields[0].empty()) throw ParseError("empty subject identifier", line_no);
    int index = 0;
    if (!parse_number(fields[1], index)) throw ParseError("index '" + std::string(fields[1]) + "' is not an integer", line_no);
    if (index < 1) throw ParseError("index must be >= 1, got " + std::to_string(index), line_no);
    if (p && index > *p)
      throw ParseError("index " + std::to_string(index) + " exceeds grid size " + std::to_string(*p), line_no);
    double value = 0.0;
    if (!parse_number(fields[2], value) || !std::isfinite(value))
      throw ParseError("value '" + std::string(fields[2]) + "' is not a finite number", line_no);

    const std::string subject(fields[0]);
    auto [it, inserted] = by_subject.try_emplace(subject);
    if (inserted) order.push_back(subject);
    auto& pending = it->second;
    if (auto dup = pending.first_line.find(index); dup != pending.first_line.end())
      throw ParseError("duplicate record for subject '" + subject + "' index " + std::to_string(index) +
                           " (first seen on line " + std::to_string(dup->second) + ")",
                       line_no);
    pending.first_line.emplace(index, line_no);
    pending.entries.emplace_back(index, value);
    max_index = std::max(max_index, index);
  }
  if (!header_seen) throw ParseError("missing header 'subject,index,value'", line_no + 1);

  std::vector<std::string> warnings;
  int grid_size = p.value_or(max_index);
  if (!p) warnings.push_back("grid size not given; inferred p = " + std::to_string(grid_size) + " from the largest index");
  if (grid_size < 2) throw ParseError("grid needs at least 2 points", line_no);

  ParsedObservations parsed{ObservationSet{Grid(grid_size, t_min, t_max), {}}, std::move(warnings)};
  for (const auto& subject : order) {
    auto entries = std::move(by_subject[subject].entries);
    std::sort(entries.begin(), entries.end());
    Sample s{subject, {}, {}};
    for (const auto& [index, value] : entries) {
      s.indices.push_back(index - 1);
      s.values.push_back(value);
    }
    parsed.obs.samples.push_back(std::move(s));
  }
  return parsed;
}

ParsedObservations read_long_csv(const std::filesystem::path& path, std::optional<int> p, double t_min,
                                 double t_max) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return parse_long_csv(in, p, t_min, t_max);
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  if (ec != std::errc{}) throw NumericError("cannot format number");
  return std::string(buf, ptr);
}

void write_long_csv(std::ostream& out, const ObservationSet& obs) {
  out << "subject,index,value\n";
  for (const auto& s : obs.samples)
    for (std::size_t j = 0; j < s.indices.size(); ++j)
      out << s.subject_id << ',' << s.indices[j] + 1 << ',' << format_double(s.values[j]) << '\n';
}

void write_matrix(std::ostream& out, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

Matrix read_matrix(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto view = trim(line);
    if (view.empty()) continue;
    std::vector<double> row;
    for (auto field : split_commas(view)) {
      double v = 0.0;
      if (!parse_number(field, v)) throw ParseError("bad matrix entry '" + std::string(field) + "'", line_no);
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError("ragged matrix row", line_no);
    rows.push_back(std::move(row));
  }
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

Matrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_matrix(in);
}

std::string metadata_json(const CovarianceEstimate& est) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["p"] = est.grid.size();
  j["b"] = est.config_used.band;
  j["a"] = est.config_used.increment;
  j["rank"] = est.rank;
  j["rank_selection"] = est.config_used.rank ? "fixed" : "cross-validation";
  j["mode"] = to_string(est.config_used.mode);
  ordered_json patches = ordered_json::array();
  for (const auto& patch : est.patches) {
    patches.push_back({{"first", patch.range.first + 1},
                       {"last", patch.range.last() + 1},
                       {"n_effective", patch.n_effective},
                       {"sigma2", patch.sigma2}});
  }
  j["patches"] = std::move(patches);
  j["overlap_min_sv"] = est.chain.overlap_min_sv;
  if (est.cv) {
    ordered_json table = ordered_json::object();
    for (const auto& [r, e] : est.cv->errors) table[std::to_string(r)] = e;
    j["cv"] = {{"folds", est.config_used.cv.folds},
               {"splits", est.config_used.cv.splits},
               {"n0", est.config_used.cv.min_pairs},
               {"seed", est.config_used.cv.seed},
               {"errors", std::move(table)},
               {"excluded", est.cv->excluded},
               {"chosen_r", est.cv->chosen_r},
               {"splits_used", est.cv->splits_used},
               {"pairs_evaluated", est.cv->pairs_evaluated},
               {"failures", est.cv->failures}};
  }
  j["warnings"] = est.warnings;
  return j.dump(2) + "\n";
}

}  // namespace bandcov
