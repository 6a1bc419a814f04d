#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bandcov {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Equally spaced grid t_min = t_1 < ... < t_p = t_max.
class Grid {
 public:
  Grid(int p, double t_min = 0.0, double t_max = 1.0);

  int size() const noexcept { return static_cast<int>(points_.size()); }
  double t_min() const noexcept { return points_.front(); }
  double t_max() const noexcept { return points_.back(); }
  double spacing() const noexcept { return spacing_; }
  double point(int i) const { return points_.at(static_cast<std::size_t>(i)); }
  const std::vector<double>& points() const noexcept { return points_; }

  bool operator==(const Grid&) const = default;

 private:
  std::vector<double> points_;
  double spacing_;
};

/// One subject's measurements. Indices are 0-based grid positions, strictly
/// increasing; conversion from the 1-based external form happens at ingestion.
struct Sample {
  std::string subject_id;
  std::vector<int> indices;
  std::vector<double> values;

  bool observes(int index) const;
  /// Position of `index` inside `indices`, if observed.
  std::optional<std::size_t> find(int index) const;
  /// max(indices) - min(indices) + 1, or 0 for an empty sample.
  int window_length() const;

  bool operator==(const Sample&) const = default;
};

struct ObservationSet {
  Grid grid;
  std::vector<Sample> samples;

  std::size_t n() const noexcept { return samples.size(); }
  /// Samples at the given positions, in the given order.
  ObservationSet subset(std::span<const std::size_t> positions) const;
  /// Longest observed window length d.
  int max_window_length() const;
  /// d / p, the observed fraction of the domain.
  double window_fraction() const;

  bool operator==(const ObservationSet&) const = default;
};

enum class PatchMode { complete, pairwise };

const char* to_string(PatchMode mode);
std::optional<PatchMode> parse_patch_mode(std::string_view text);

struct CvConfig {
  int folds = 5;
  int splits = 5;
  int min_pairs = 5;
  /// Empty means every rank in 1..b-a.
  std::vector<int> rank_candidates;
  std::uint64_t seed = 0;
};

struct EstimatorConfig {
  int band = 0;
  int increment = 1;
  /// std::nullopt selects the rank by cross-validation.
  std::optional<int> rank;
  PatchMode mode = PatchMode::complete;
  CvConfig cv;

  /// Candidate ranks after applying the 1..b-a default.
  std::vector<int> candidate_ranks() const;
};

struct Violation {
  std::string rule;
  std::string detail;
};

using ValidationReport = std::vector<Violation>;

ValidationReport validate(const ObservationSet& obs, const EstimatorConfig& cfg);

/// Joins the report into one message, one violation per line.
std::string describe(const ValidationReport& report);

}  // namespace bandcov
