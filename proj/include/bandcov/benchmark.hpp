#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bandcov {

enum class BenchmarkTable { t1 = 1, t2 = 2, t3 = 3 };

/// One simulation condition: balanced design on p = 30 with window d,
/// n_rep subjects per window start and K components; rank by CV.
struct BenchmarkCell {
  std::string label;
  int n_rep = 10;
  int window = 10;
  int components = 3;
  int band = 7;
  int increment = 1;
  /// Reference mean relative error for this condition, for display.
  std::optional<double> reference_rmse;
};

struct CellSummary {
  BenchmarkCell cell;
  std::vector<double> rmse;  // successful reps only
  std::vector<int> ranks;
  std::vector<double> seconds;
  int failed = 0;
  std::vector<std::string> failures;

  double mean_rmse() const;
  double sd_rmse() const;
  double mean_rank() const;
  double sd_rank() const;
  double mean_seconds() const;
};

struct BenchmarkReport {
  BenchmarkTable table = BenchmarkTable::t1;
  int reps = 0;
  std::uint64_t seed = 0;
  std::vector<CellSummary> cells;

  const CellSummary* find(const std::string& label) const;
};

/// Pass/fail thresholds for the simulation benchmarks.
struct BenchmarkThresholds {
  int full_reps = 100;
  double t1_max_rmse_at_50 = 0.25;
  double t1_rank_mean_min = 3.0;
  double t1_rank_mean_max = 5.5;
  double t1_min_fraction_rank_ge3 = 0.90;
  double t2_max_spread_at_50 = 0.10;
  double single_fit_max_seconds = 2.0;
};

inline constexpr BenchmarkThresholds kBenchmarkThresholds{};

struct CriterionCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<BenchmarkCell> benchmark_cells(BenchmarkTable table);

/// b = ceil(0.7 d) and a = max(1, ceil(0.1 d)).
int default_band(int window);
int default_increment(int window);

/// Runs every cell for `reps` repetitions on `jobs` worker threads. The
/// dataset of repetition k depends only on (seed, k, n_rep, d, K), so
/// results are independent of `jobs` and cells differing only in (b, a)
/// share datasets.
BenchmarkReport run_benchmark(BenchmarkTable table, int reps, std::uint64_t seed, int jobs = 1);

std::vector<CriterionCheck> check_report(const BenchmarkReport& report,
                                         const BenchmarkThresholds& thresholds = kBenchmarkThresholds);

/// Aligned table with timing and reference values.
std::string format_report_table(const BenchmarkReport& report);

/// Deterministic key/value form. Wall-clock times are omitted so that
/// identical runs produce identical bytes.
std::string format_report_kv(const BenchmarkReport& report);

}  // namespace bandcov
