#include "bandcov/rankselect.hpp"

#include "bandcov/assemble.hpp"
#include "bandcov/errors.hpp"
#include "bandcov/patching.hpp"
#include "bandcov/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace bandcov {

SubjectSplit split_subjects(const ObservationSet& obs, int folds, std::uint64_t seed) {
  const std::size_t n = obs.n();
  if (folds < 2) throw ConfigError("cross-validation needs at least 2 folds");
  if (n < static_cast<std::size_t>(folds))
    throw ConfigError("cannot split " + std::to_string(n) + " subjects into " +
                      std::to_string(folds) + " folds");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  const std::size_t n_test = std::max<std::size_t>(1, n / static_cast<std::size_t>(folds));
  SubjectSplit split;
  split.test.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_test));
  split.train.assign(order.begin() + static_cast<std::ptrdiff_t>(n_test), order.end());
  std::sort(split.test.begin(), split.test.end());
  std::sort(split.train.begin(), split.train.end());
  return split;
}

MaskedCovariance test_covariance(const ObservationSet& test, int min_pairs) {
  const int p = test.grid.size();
  Vector sum = Vector::Zero(p);
  Vector count = Vector::Zero(p);
  for (const auto& s : test.samples)
    for (std::size_t j = 0; j < s.indices.size(); ++j) {
      sum(s.indices[j]) += s.values[j];
      count(s.indices[j]) += 1.0;
    }
  Vector mean = Vector::Zero(p);
  for (int i = 0; i < p; ++i)
    if (count(i) > 0) mean(i) = sum(i) / count(i);

  Matrix cross = Matrix::Zero(p, p);
  Eigen::MatrixXi pairs = Eigen::MatrixXi::Zero(p, p);
  for (const auto& s : test.samples) {
    const std::size_t m = s.indices.size();
    for (std::size_t u = 0; u < m; ++u) {
      const int i = s.indices[u];
      const double di = s.values[u] - mean(i);
      for (std::size_t v = u; v < m; ++v) {
        const int j = s.indices[v];
        cross(i, j) += di * (s.values[v] - mean(j));
        ++pairs(i, j);
      }
    }
  }

  MaskedCovariance out{Matrix::Constant(p, p, std::numeric_limits<double>::quiet_NaN()),
                       Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(p, p, false)};
  for (int i = 0; i < p; ++i)
    for (int j = i; j < p; ++j) {
      if (pairs(i, j) < min_pairs || pairs(i, j) == 0) continue;
      const double value = cross(i, j) / pairs(i, j);
      out.values(i, j) = out.values(j, i) = value;
      out.observed(i, j) = out.observed(j, i) = true;
    }
  return out;
}

double prediction_error(const Matrix& estimate, const MaskedCovariance& test) {
  if (estimate.rows() != test.values.rows() || estimate.cols() != test.values.cols())
    throw ConfigError("prediction error needs matching shapes");
  double total = 0.0;
  for (Eigen::Index j = 0; j < estimate.cols(); ++j)
    for (Eigen::Index i = 0; i < estimate.rows(); ++i)
      if (test.observed(i, j)) {
        const double diff = estimate(i, j) - test.values(i, j);
        total += diff * diff;
      }
  return total;
}

CvResult select_rank(const ObservationSet& obs, const EstimatorConfig& cfg) {
  const CvConfig& cv = cfg.cv;
  if (cv.splits < 1) throw ConfigError("cross-validation needs at least one split");
  if (cv.min_pairs < 1) throw ConfigError("n0 must be at least 1");
  const std::vector<int> candidates = cfg.candidate_ranks();
  if (candidates.empty()) throw ConfigError("no rank candidates (b - a < 1)");
  for (int r : candidates)
    if (r < 1 || r > cfg.band - cfg.increment)
      throw ConfigError("rank candidate " + std::to_string(r) + " outside 1..b-a");

  const PatchPlan plan = build_patch_plan(obs.grid.size(), cfg.band, cfg.increment);
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> totals(candidates.size(), 0.0);
  CvResult result;

  for (int t = 0; t < cv.splits; ++t) {
    const SubjectSplit split =
        split_subjects(obs, cv.folds, derive_seed(cv.seed, {static_cast<std::uint64_t>(t)}));
    const ObservationSet train = obs.subset(split.train);
    const ObservationSet test = obs.subset(split.test);

    std::vector<PatchCovariance> patches;
    try {
      patches = patch_covariances(train, plan, cfg.mode);
    } catch (const Error& e) {
      result.failures.push_back("split " + std::to_string(t + 1) + ": " + e.what());
      continue;
    }
    const MaskedCovariance held_out = test_covariance(test, cv.min_pairs);
    result.pairs_evaluated.push_back(held_out.observed_count());
    ++result.splits_used;

    for (std::size_t c = 0; c < candidates.size(); ++c) {
      double err = inf;
      try {
        const CovarianceEstimate fit = estimate_from_patches(train.grid, plan, patches, candidates[c]);
        err = prediction_error(fit.sigma0, held_out);
        if (!std::isfinite(err)) err = inf;
      } catch (const Error& e) {
        result.failures.push_back("split " + std::to_string(t + 1) + ", r=" +
                                  std::to_string(candidates[c]) + ": " + e.what());
      }
      totals[c] += err;
    }
  }

  if (result.splits_used == 0)
    throw InsufficientDataError("rank cross-validation: no split produced usable patch covariances",
                                0);
  double best = inf;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    if (!std::isfinite(totals[c])) {
      result.excluded.push_back(candidates[c]);
      continue;
    }
    result.errors[candidates[c]] = totals[c];
    if (totals[c] < best || (totals[c] == best && candidates[c] < result.chosen_r)) {
      best = totals[c];
      result.chosen_r = candidates[c];
    }
  }
  if (result.errors.empty())
    throw InsufficientDataError("rank cross-validation: every candidate rank failed", 0);
  return result;
}

}  // namespace bandcov
