#include "bandcov/cli.hpp"

#include "bandcov/assemble.hpp"
#include "bandcov/benchmark.hpp"
#include "bandcov/errors.hpp"
#include "bandcov/io.hpp"
#include "bandcov/simgen.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <ostream>

namespace bandcov::cli {

namespace {

bool write_file(const std::string& path, const std::string& contents, std::ostream& err) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    err << "error: cannot write " << path << '\n';
    return false;
  }
  f << contents;
  return static_cast<bool>(f);
}

std::optional<int> parse_int(const std::string& text) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return v;
}

}  // namespace

int default_jobs() {
  if (const char* env = std::getenv("BANDCOV_JOBS")) {
    if (auto v = parse_int(env); v && *v > 0) return *v;
  }
  return 1;
}

int cmd_estimate(const EstimateOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    ParsedObservations parsed = read_long_csv(opts.input, opts.p, opts.t_min, opts.t_max);
    for (const auto& w : parsed.warnings) err << "warning: " << w << '\n';
    const ObservationSet& obs = parsed.obs;

    const int d = obs.max_window_length();
    EstimatorConfig cfg;
    cfg.band = opts.band.value_or(default_band(d));
    cfg.increment = opts.increment.value_or(default_increment(d));
    if (opts.rank != "auto") {
      const auto r = parse_int(opts.rank);
      if (!r) {
        err << "error: --rank must be an integer or 'auto'\n";
        return kExitInvalid;
      }
      cfg.rank = *r;
    }
    const auto mode = parse_patch_mode(opts.mode);
    if (!mode) {
      err << "error: --mode must be 'complete' or 'pairwise'\n";
      return kExitInvalid;
    }
    cfg.mode = *mode;
    cfg.cv.folds = opts.folds;
    cfg.cv.splits = opts.splits;
    cfg.cv.min_pairs = opts.min_pairs;
    cfg.cv.seed = opts.seed;

    const ValidationReport report = validate(obs, cfg);
    if (!report.empty()) {
      for (const auto& v : report) err << "invalid: " << v.rule << ": " << v.detail << '\n';
      return kExitInvalid;
    }

    const CovarianceEstimate est = estimate_covariance(obs, cfg);
    for (const auto& w : est.warnings) err << "warning: " << w << '\n';

    std::ostringstream matrix;
    write_matrix(matrix, est.sigma0);
    const std::string meta_path = opts.metadata.empty() ? opts.output + ".meta.json" : opts.metadata;
    if (!write_file(opts.output, matrix.str(), err) || !write_file(meta_path, metadata_json(est), err))
      return kExitInvalid;
    out << "n=" << obs.n() << " p=" << obs.grid.size() << " b=" << cfg.band << " a=" << cfg.increment
        << " r=" << est.rank << " -> " << opts.output << '\n';
    return kExitOk;
  } catch (const InsufficientDataError& e) {
    err << "error: insufficient data: " << e.what() << '\n';
    return kExitInsufficientData;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
}

int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err) {
  constexpr int p = 30;
  int d = 0;
  if (opts.dfrac == "1/5") d = p / 5;
  else if (opts.dfrac == "1/3") d = p / 3;
  else if (opts.dfrac == "1/2") d = p / 2;
  else {
    err << "usage: --dfrac must be 1/5, 1/3 or 1/2\n";
    return kExitUsage;
  }
  if (opts.setting < 1 || opts.setting > 3) {
    err << "usage: --setting must be 1, 2 or 3\n";
    return kExitUsage;
  }
  if (opts.components != 3 && opts.components != 10) {
    err << "usage: --K must be 3 or 10\n";
    return kExitUsage;
  }
  if (opts.setting != 3 && (d != p / 3 || opts.components != 3)) {
    err << "usage: settings 1 and 2 use --dfrac 1/3 and --K 3; vary them with --setting 3\n";
    return kExitUsage;
  }
  if (opts.n_rep < 1) {
    err << "usage: --nrep must be positive\n";
    return kExitUsage;
  }

  try {
    SimSetting setting = standard_setting(d, opts.n_rep, opts.components, opts.seed);
    if (opts.design == "boundary") {
      setting.design.kind = DesignKind::boundary_enriched;
      setting.design.boundary_fraction = opts.boundary_fraction;
    } else if (opts.design == "extended") {
      setting.design.kind = DesignKind::extended_domain;
    } else if (opts.design != "balanced") {
      err << "usage: --design must be balanced, boundary or extended\n";
      return kExitUsage;
    }
    const Grid grid(p);
    const ObservationSet obs = sample_trajectories(setting, grid, make_design(setting.design, p, opts.seed));
    std::ostringstream data, truth;
    write_long_csv(data, obs);
    write_matrix(truth, population_covariance(setting, grid));
    const std::string truth_path = opts.truth.empty() ? opts.output + ".truth.csv" : opts.truth;
    if (!write_file(opts.output, data.str(), err) || !write_file(truth_path, truth.str(), err))
      return kExitInvalid;
    out << "n=" << obs.n() << " p=" << p << " d=" << d << " K=" << opts.components << " -> " << opts.output
        << ", " << truth_path << '\n';
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
}

int cmd_benchmark(const BenchmarkOptions& opts, std::ostream& out, std::ostream& err) {
  if (opts.table < 1 || opts.table > 3) {
    err << "usage: --table must be 1, 2 or 3\n";
    return kExitUsage;
  }
  const int reps = opts.fast ? 20 : opts.reps;
  if (reps < 1) {
    err << "usage: --reps must be positive\n";
    return kExitUsage;
  }
  try {
    const auto table = static_cast<BenchmarkTable>(opts.table);
    const BenchmarkReport report = run_benchmark(table, reps, opts.seed, opts.jobs);
    const std::string text = format_report_table(report);
    out << text;
    const std::string prefix =
        opts.output_prefix.empty() ? "benchmark_table" + std::to_string(opts.table) : opts.output_prefix;
    if (!write_file(prefix + ".txt", text, err) || !write_file(prefix + ".kv", format_report_kv(report), err))
      return kExitInvalid;
    for (const auto& cell : report.cells)
      for (const auto& f : cell.failures) err << "failed: " << cell.cell.label << ": " << f << '\n';
    for (const auto& check : check_report(report))
      if (!check.passed) return kExitCriteriaFailed;
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Covariance estimation from banded, partially observed functional data"};
  app.require_subcommand(1);

  EstimateOptions est;
  auto* estimate = app.add_subcommand("estimate", "Estimate the covariance matrix from a long-format file");
  estimate->add_option("--input", est.input, "Long-format CSV (subject,index,value)")->required();
  estimate->add_option("--p", est.p, "Grid size (default: largest index)");
  estimate->add_option("--b", est.band, "Patch width (default ceil(0.7 d))");
  estimate->add_option("--a", est.increment, "Patch increment (default max(1, ceil(0.1 d)))");
  estimate->add_option("--rank", est.rank, "Rank or 'auto' for cross-validation")->capture_default_str();
  estimate->add_option("--mode", est.mode, "complete | pairwise")->capture_default_str();
  estimate->add_option("--seed", est.seed, "Cross-validation seed")->capture_default_str();
  estimate->add_option("--folds", est.folds, "Cross-validation folds K")->capture_default_str();
  estimate->add_option("--splits", est.splits, "Random splits T")->capture_default_str();
  estimate->add_option("--n0", est.min_pairs, "Minimum test pairs per cell")->capture_default_str();
  estimate->add_option("--tmin", est.t_min, "Domain start")->capture_default_str();
  estimate->add_option("--tmax", est.t_max, "Domain end")->capture_default_str();
  estimate->add_option("--output", est.output, "Dense matrix output")->required();
  estimate->add_option("--metadata", est.metadata, "Metadata sidecar (default <output>.meta.json)");

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Generate a simulated mixed-longitudinal dataset");
  simulate->add_option("--setting", sim.setting, "1 | 2 | 3")->required();
  simulate->add_option("--nrep", sim.n_rep, "Subjects per window start")->required();
  simulate->add_option("--dfrac", sim.dfrac, "Window fraction 1/5 | 1/3 | 1/2")->capture_default_str();
  simulate->add_option("--K", sim.components, "Number of components 3 | 10")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
  simulate->add_option("--design", sim.design, "balanced | boundary | extended")->capture_default_str();
  simulate->add_option("--boundary-fraction", sim.boundary_fraction, "Extra boundary subjects as a fraction of n")
      ->capture_default_str();
  simulate->add_option("--output", sim.output, "Long-format CSV output")->required();
  simulate->add_option("--truth", sim.truth, "Truth covariance output (default <output>.truth.csv)");

  BenchmarkOptions bench;
  bench.jobs = default_jobs();
  auto* benchmark = app.add_subcommand("benchmark", "Run a simulation table and check it against thresholds");
  benchmark->add_option("--table", bench.table, "1 | 2 | 3")->required();
  benchmark->add_option("--reps", bench.reps, "Repetitions per cell")->capture_default_str();
  benchmark->add_flag("--fast", bench.fast, "Use 20 repetitions");
  benchmark->add_option("--seed", bench.seed, "Random seed")->capture_default_str();
  benchmark->add_option("--jobs", bench.jobs, "Worker threads (default $BANDCOV_JOBS or 1)")->capture_default_str();
  benchmark->add_option("--output", bench.output_prefix, "Output prefix for .txt and .kv reports");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*estimate) return cmd_estimate(est, out, err);
  if (*simulate) return cmd_simulate(sim, out, err);
  return cmd_benchmark(bench, out, err);
}

}  // namespace bandcov::cli
