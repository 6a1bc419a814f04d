#include "bandcov/benchmark.hpp"

#include "bandcov/assemble.hpp"
#include "bandcov/errors.hpp"
#include "bandcov/io.hpp"
#include "bandcov/random.hpp"
#include "bandcov/simgen.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <thread>

namespace bandcov {

namespace {

constexpr int kGridSize = 30;

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v) {
  if (v.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

std::vector<double> as_doubles(const std::vector<int>& v) { return {v.begin(), v.end()}; }

std::string nrep_label(int n_rep) { return "nrep=" + std::to_string(n_rep); }

std::string fraction_label(int window) {
  switch (window) {
    case 6: return "d/p=1/5";
    case 10: return "d/p=1/3";
    case 15: return "d/p=1/2";
    default: return "d=" + std::to_string(window);
  }
}

BenchmarkCell make_cell(std::string label, int n_rep, int d, int K, int b, int a,
                        std::optional<double> reference) {
  return {std::move(label), n_rep, d, K, b, a, reference};
}

struct RepOutcome {
  bool ok = false;
  double rmse = 0.0;
  int rank = 0;
  double seconds = 0.0;
  std::string failure;
};

RepOutcome run_rep(const BenchmarkCell& cell, int rep, std::uint64_t seed) {
  RepOutcome out;
  const std::uint64_t data_seed =
      derive_seed(seed, {static_cast<std::uint64_t>(rep), static_cast<std::uint64_t>(cell.n_rep),
                         static_cast<std::uint64_t>(cell.window),
                         static_cast<std::uint64_t>(cell.components)});
  try {
    const SimSetting setting = standard_setting(cell.window, cell.n_rep, cell.components, data_seed);
    const Grid grid(kGridSize);
    const ObservationSet obs =
        sample_trajectories(setting, grid, make_design(setting.design, kGridSize, data_seed));
    const Matrix truth = population_covariance(setting, grid);

    EstimatorConfig cfg;
    cfg.band = cell.band;
    cfg.increment = cell.increment;
    cfg.mode = PatchMode::complete;
    cfg.cv.seed = derive_seed(data_seed, {1});

    const auto start = std::chrono::steady_clock::now();
    const CovarianceEstimate est = estimate_covariance(obs, cfg);
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.rmse = rmse(est.sigma0, truth);
    out.rank = est.rank;
    out.ok = true;
  } catch (const Error& e) {
    out.failure = "rep " + std::to_string(rep) + ": " + e.what();
  }
  return out;
}

}  // namespace

double CellSummary::mean_rmse() const { return mean_of(rmse); }
double CellSummary::sd_rmse() const { return sd_of(rmse); }
double CellSummary::mean_rank() const { return mean_of(as_doubles(ranks)); }
double CellSummary::sd_rank() const { return sd_of(as_doubles(ranks)); }
double CellSummary::mean_seconds() const { return mean_of(seconds); }

const CellSummary* BenchmarkReport::find(const std::string& label) const {
  for (const auto& c : cells)
    if (c.cell.label == label) return &c;
  return nullptr;
}

int default_band(int window) { return std::max(1, (7 * window + 9) / 10); }
int default_increment(int window) { return std::max(1, (window + 9) / 10); }

std::vector<BenchmarkCell> benchmark_cells(BenchmarkTable table) {
  std::vector<BenchmarkCell> cells;
  const int n_reps[] = {10, 20, 50};
  switch (table) {
    case BenchmarkTable::t1: {
      const double reference[] = {0.319, 0.252, 0.128};
      for (int i = 0; i < 3; ++i)
        cells.push_back(make_cell(nrep_label(n_reps[i]), n_reps[i], 10, 3, 7, 1, reference[i]));
      break;
    }
    case BenchmarkTable::t2: {
      struct Row {
        int b, a;
        double ref[3];
      };
      const Row rows[] = {{7, 1, {0.324, 0.224, 0.123}}, {7, 2, {0.325, 0.221, 0.132}},
                          {8, 1, {0.314, 0.23, 0.13}},   {8, 2, {0.364, 0.292, 0.126}},
                          {9, 1, {0.326, 0.227, 0.119}}, {9, 2, {0.347, 0.214, 0.145}}};
      for (const auto& row : rows)
        for (int i = 0; i < 3; ++i)
          cells.push_back(make_cell("b=" + std::to_string(row.b) + ",a=" + std::to_string(row.a) + " " +
                                        nrep_label(n_reps[i]),
                                    n_reps[i], 10, 3, row.b, row.a, row.ref[i]));
      break;
    }
    case BenchmarkTable::t3: {
      const int windows[] = {6, 10, 15};
      const double ref3[3][3] = {{0.43, 0.397, 0.294}, {0.341, 0.237, 0.135}, {0.243, 0.17, 0.113}};
      const double ref10[3][3] = {{0.461, 0.403, 0.304}, {0.322, 0.248, 0.143}, {0.248, 0.165, 0.114}};
      for (int K : {3, 10})
        for (int w = 0; w < 3; ++w)
          for (int i = 0; i < 3; ++i) {
            const int d = windows[w];
            cells.push_back(make_cell(fraction_label(d) + " K=" + std::to_string(K) + " " + nrep_label(n_reps[i]),
                                      n_reps[i], d, K, default_band(d), default_increment(d),
                                      K == 3 ? ref3[w][i] : ref10[w][i]));
          }
      break;
    }
  }
  return cells;
}

BenchmarkReport run_benchmark(BenchmarkTable table, int reps, std::uint64_t seed, int jobs) {
  if (reps < 1) throw ConfigError("benchmark needs at least one repetition");
  BenchmarkReport report{table, reps, seed, {}};
  const auto cells = benchmark_cells(table);
  const std::size_t n_tasks = cells.size() * static_cast<std::size_t>(reps);
  std::vector<RepOutcome> outcomes(n_tasks);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t task = next++; task < n_tasks; task = next++) {
      const std::size_t c = task / static_cast<std::size_t>(reps);
      const int rep = static_cast<int>(task % static_cast<std::size_t>(reps));
      outcomes[task] = run_rep(cells[c], rep, seed);
    }
  };
  const int n_workers = std::max(1, jobs);
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }

  for (std::size_t c = 0; c < cells.size(); ++c) {
    CellSummary summary{cells[c], {}, {}, {}, 0, {}};
    for (int rep = 0; rep < reps; ++rep) {
      const auto& o = outcomes[c * static_cast<std::size_t>(reps) + static_cast<std::size_t>(rep)];
      if (o.ok) {
        summary.rmse.push_back(o.rmse);
        summary.ranks.push_back(o.rank);
        summary.seconds.push_back(o.seconds);
      } else {
        ++summary.failed;
        summary.failures.push_back(o.failure);
      }
    }
    report.cells.push_back(std::move(summary));
  }
  return report;
}

namespace {

std::string fmt(double v, int precision = 3) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(precision) << v;
  return out.str();
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return !v.empty();
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " > " : "") + fmt(v[i]);
  return out;
}

std::string reps_note(const BenchmarkReport& report, const BenchmarkThresholds& th) {
  return report.reps < th.full_reps ? " [reduced run: " + std::to_string(report.reps) + " reps]" : "";
}

}  // namespace

std::vector<CriterionCheck> check_report(const BenchmarkReport& report, const BenchmarkThresholds& th) {
  std::vector<CriterionCheck> checks;
  auto mean_for = [&](const std::string& label) {
    const CellSummary* c = report.find(label);
    return c && c->failed == 0 ? c->mean_rmse() : std::numeric_limits<double>::quiet_NaN();
  };
  const std::string note = reps_note(report, th);

  switch (report.table) {
    case BenchmarkTable::t1: {
      std::vector<double> means;
      for (int n : {10, 20, 50}) means.push_back(mean_for(nrep_label(n)));
      const bool decreasing = strictly_decreasing(means);
      const bool small = means.back() <= th.t1_max_rmse_at_50;
      checks.push_back({"table1_rmse_trend", decreasing && small,
                        "mean RMSE " + join(means) + "; at nrep=50 needs <= " + fmt(th.t1_max_rmse_at_50, 2) + note});

      const CellSummary* c50 = report.find(nrep_label(50));
      bool rank_ok = false;
      std::string detail = "nrep=50 cell missing";
      if (c50 && !c50->ranks.empty()) {
        const double mean_r = c50->mean_rank();
        const auto ge3 = std::count_if(c50->ranks.begin(), c50->ranks.end(), [](int r) { return r >= 3; });
        const double frac = static_cast<double>(ge3) / static_cast<double>(c50->ranks.size() + c50->failed);
        rank_ok = mean_r >= th.t1_rank_mean_min && mean_r <= th.t1_rank_mean_max &&
                  frac >= th.t1_min_fraction_rank_ge3;
        detail = "mean chosen r " + fmt(mean_r, 2) + " in [" + fmt(th.t1_rank_mean_min, 1) + ", " +
                 fmt(th.t1_rank_mean_max, 1) + "], fraction r>=3 " + fmt(frac, 2) + " >= " +
                 fmt(th.t1_min_fraction_rank_ge3, 2) + note;
      }
      checks.push_back({"table1_cv_rank", rank_ok, detail});
      break;
    }
    case BenchmarkTable::t2: {
      std::vector<double> means;
      for (const auto& c : report.cells)
        if (c.cell.n_rep == 50) means.push_back(c.failed == 0 ? c.mean_rmse() : std::numeric_limits<double>::quiet_NaN());
      const auto [lo, hi] = std::minmax_element(means.begin(), means.end());
      const double spread = means.empty() ? std::numeric_limits<double>::quiet_NaN() : *hi - *lo;
      checks.push_back({"table2_insensitivity", spread <= th.t2_max_spread_at_50,
                        "max - min mean RMSE over (b,a) at nrep=50 = " + fmt(spread) + " <= " +
                            fmt(th.t2_max_spread_at_50, 2) + note});
      break;
    }
    case BenchmarkTable::t3: {
      for (int K : {3, 10})
        for (int n : {20, 50}) {
          std::vector<double> means;
          for (int d : {6, 10, 15})
            means.push_back(mean_for(fraction_label(d) + " K=" + std::to_string(K) + " " + nrep_label(n)));
          checks.push_back({"table3_trend_K" + std::to_string(K) + "_nrep" + std::to_string(n),
                            strictly_decreasing(means),
                            "mean RMSE over d/p = 1/5, 1/3, 1/2: " + join(means) + note});
        }
      break;
    }
  }
  return checks;
}

std::string format_report_table(const BenchmarkReport& report) {
  std::size_t width = 5;
  for (const auto& c : report.cells) width = std::max(width, c.cell.label.size());
  std::ostringstream out;
  out << "Table " << static_cast<int>(report.table) << " (" << report.reps << " reps, seed " << report.seed
      << ")\n";
  out << std::left << std::setw(static_cast<int>(width)) << "cell" << std::right << std::setw(6) << "b"
      << std::setw(4) << "a" << std::setw(10) << "RMSE" << std::setw(9) << "(sd)" << std::setw(9) << "ref"
      << std::setw(9) << "r" << std::setw(9) << "(sd)" << std::setw(11) << "sec/fit" << std::setw(8)
      << "failed" << '\n';
  for (const auto& c : report.cells) {
    out << std::left << std::setw(static_cast<int>(width)) << c.cell.label << std::right << std::setw(6)
        << c.cell.band << std::setw(4) << c.cell.increment << std::setw(10) << fmt(c.mean_rmse())
        << std::setw(9) << "(" + fmt(c.sd_rmse(), 2) + ")" << std::setw(9)
        << (c.cell.reference_rmse ? fmt(*c.cell.reference_rmse) : std::string("-")) << std::setw(9)
        << fmt(c.mean_rank(), 2) << std::setw(9) << "(" + fmt(c.sd_rank(), 2) + ")" << std::setw(11)
        << fmt(c.mean_seconds(), 4) << std::setw(8) << c.failed << '\n';
  }
  for (const auto& check : check_report(report))
    out << (check.passed ? "PASS " : "FAIL ") << check.name << ": " << check.detail << '\n';
  return out.str();
}

std::string format_report_kv(const BenchmarkReport& report) {
  std::ostringstream out;
  out << "table = " << static_cast<int>(report.table) << '\n';
  out << "reps = " << report.reps << '\n';
  out << "seed = " << report.seed << '\n';
  out << "cells = " << report.cells.size() << '\n';
  for (std::size_t i = 0; i < report.cells.size(); ++i) {
    const auto& c = report.cells[i];
    const std::string key = "cell." + std::to_string(i) + ".";
    out << key << "label = " << c.cell.label << '\n';
    out << key << "n_rep = " << c.cell.n_rep << '\n';
    out << key << "d = " << c.cell.window << '\n';
    out << key << "K = " << c.cell.components << '\n';
    out << key << "b = " << c.cell.band << '\n';
    out << key << "a = " << c.cell.increment << '\n';
    out << key << "mean_rmse = " << format_double(c.mean_rmse()) << '\n';
    out << key << "sd_rmse = " << format_double(c.sd_rmse()) << '\n';
    out << key << "mean_rank = " << format_double(c.mean_rank()) << '\n';
    out << key << "sd_rank = " << format_double(c.sd_rank()) << '\n';
    out << key << "failed = " << c.failed << '\n';
    if (c.cell.reference_rmse) out << key << "reference_rmse = " << format_double(*c.cell.reference_rmse) << '\n';
  }
  for (const auto& check : check_report(report))
    out << "criterion." << check.name << " = " << (check.passed ? "pass" : "fail") << '\n';
  return out.str();
}

}  // namespace bandcov
