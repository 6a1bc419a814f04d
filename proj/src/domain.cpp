#include "bandcov/domain.hpp"

#include "bandcov/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bandcov {

Grid::Grid(int p, double t_min, double t_max) {
  if (p < 2) throw ConfigError("grid needs at least 2 points, got " + std::to_string(p));
  if (!(t_max > t_min) || !std::isfinite(t_min) || !std::isfinite(t_max))
    throw ConfigError("grid endpoints must be finite with t_min < t_max");
  spacing_ = (t_max - t_min) / (p - 1);
  points_.resize(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) points_[static_cast<std::size_t>(i)] = t_min + i * spacing_;
  points_.back() = t_max;
}

bool Sample::observes(int index) const { return find(index).has_value(); }

std::optional<std::size_t> Sample::find(int index) const {
  auto it = std::lower_bound(indices.begin(), indices.end(), index);
  if (it == indices.end() || *it != index) return std::nullopt;
  return static_cast<std::size_t>(it - indices.begin());
}

int Sample::window_length() const {
  if (indices.empty()) return 0;
  return indices.back() - indices.front() + 1;
}

ObservationSet ObservationSet::subset(std::span<const std::size_t> positions) const {
  ObservationSet out{grid, {}};
  out.samples.reserve(positions.size());
  for (std::size_t pos : positions) out.samples.push_back(samples.at(pos));
  return out;
}

int ObservationSet::max_window_length() const {
  int d = 0;
  for (const auto& s : samples) d = std::max(d, s.window_length());
  return d;
}

double ObservationSet::window_fraction() const {
  return static_cast<double>(max_window_length()) / grid.size();
}

const char* to_string(PatchMode mode) {
  return mode == PatchMode::complete ? "complete" : "pairwise";
}

std::optional<PatchMode> parse_patch_mode(std::string_view text) {
  if (text == "complete") return PatchMode::complete;
  if (text == "pairwise") return PatchMode::pairwise;
  return std::nullopt;
}

std::vector<int> EstimatorConfig::candidate_ranks() const {
  if (!cv.rank_candidates.empty()) return cv.rank_candidates;
  std::vector<int> out;
  for (int r = 1; r <= band - increment; ++r) out.push_back(r);
  return out;
}

ValidationReport validate(const ObservationSet& obs, const EstimatorConfig& cfg) {
  ValidationReport report;
  auto add = [&report](std::string rule, std::string detail) {
    report.push_back({std::move(rule), std::move(detail)});
  };
  const int p = obs.grid.size();

  if (obs.n() == 0) add("n >= 1", "observation set has no samples");
  for (const auto& s : obs.samples) {
    if (s.indices.empty()) {
      add("non-empty sample", "subject " + s.subject_id + " has no measurements");
      continue;
    }
    if (s.indices.size() != s.values.size())
      add("values match indices", "subject " + s.subject_id + " has mismatched lengths");
    for (std::size_t j = 0; j < s.indices.size(); ++j) {
      const int idx = s.indices[j];
      if (idx < 0 || idx >= p)
        add("index out of range", "subject " + s.subject_id + " index " +
                                      std::to_string(idx + 1) + " not in 1.." + std::to_string(p));
      if (j > 0 && s.indices[j - 1] >= idx)
        add("indices strictly increasing", "subject " + s.subject_id);
      if (j < s.values.size() && !std::isfinite(s.values[j]))
        add("finite values", "subject " + s.subject_id + " index " + std::to_string(idx + 1));
    }
  }

  const int b = cfg.band;
  const int a = cfg.increment;
  if (b < 1 || b > p) add("1 <= b <= p", "b=" + std::to_string(b) + ", p=" + std::to_string(p));
  if (a < 1) add("a >= 1", "a=" + std::to_string(a));
  if (cfg.rank) {
    const int r = *cfg.rank;
    if (r < 1) add("r >= 1", "r=" + std::to_string(r));
    if (a > b - r)
      add("a <= b - r", "a=" + std::to_string(a) + ", b=" + std::to_string(b) +
                            ", r=" + std::to_string(r));
  } else {
    const auto& cv = cfg.cv;
    if (cv.folds < 2) add("K >= 2", "folds=" + std::to_string(cv.folds));
    if (cv.splits < 1) add("T >= 1", "splits=" + std::to_string(cv.splits));
    if (cv.min_pairs < 1) add("n0 >= 1", "n0=" + std::to_string(cv.min_pairs));
    const auto candidates = cfg.candidate_ranks();
    if (candidates.empty()) add("rank candidates non-empty", "b - a < 1");
    for (int r : candidates) {
      if (r < 1 || r > b - a)
        add("rank candidate <= b - a", "candidate " + std::to_string(r) + " with b - a = " +
                                           std::to_string(b - a));
    }
    if (obs.n() < static_cast<std::size_t>(std::max(cv.folds, 0)))
      add("n >= K", "n=" + std::to_string(obs.n()) + ", folds=" + std::to_string(cv.folds));
  }
  return report;
}

std::string describe(const ValidationReport& report) {
  std::ostringstream out;
  for (std::size_t i = 0; i < report.size(); ++i) {
    if (i) out << '\n';
    out << report[i].rule << ": " << report[i].detail;
  }
  return out.str();
}

}  // namespace bandcov
