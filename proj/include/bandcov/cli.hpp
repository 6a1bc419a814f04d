#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace bandcov::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitInsufficientData = 2;
inline constexpr int kExitCriteriaFailed = 3;
inline constexpr int kExitUsage = 64;

struct EstimateOptions {
  std::string input;
  std::optional<int> p;
  std::optional<int> band;
  std::optional<int> increment;
  std::string rank = "auto";
  std::string mode = "complete";
  std::uint64_t seed = 0;
  int folds = 5;
  int splits = 5;
  int min_pairs = 5;
  double t_min = 0.0;
  double t_max = 1.0;
  std::string output;
  /// Defaults to <output>.meta.json.
  std::string metadata;
};

struct SimulateOptions {
  int setting = 1;
  int n_rep = 10;
  std::string dfrac = "1/3";
  int components = 3;
  std::uint64_t seed = 0;
  std::string design = "balanced";
  double boundary_fraction = 0.1;
  std::string output;
  /// Defaults to <output>.truth.csv.
  std::string truth;
};

struct BenchmarkOptions {
  int table = 1;
  int reps = 100;
  bool fast = false;
  std::uint64_t seed = 0;
  int jobs = 1;
  /// Writes <prefix>.txt and <prefix>.kv.
  std::string output_prefix;
};

int cmd_estimate(const EstimateOptions& opts, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err);
int cmd_benchmark(const BenchmarkOptions& opts, std::ostream& out, std::ostream& err);

/// Default worker count: $BANDCOV_JOBS if set and positive, else 1.
int default_jobs();

/// Parses argv (including argv[0]) and dispatches to a subcommand.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bandcov::cli
