#include "bandcov/assemble.hpp"

#include "bandcov/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bandcov {

Matrix aggregate_factors(std::span<const PatchFactor> factors, const RotationChain& chain,
                         const PatchPlan& plan) {
  if (factors.size() != plan.count() || chain.rotations.size() != plan.count())
    throw ConfigError("factors, rotations and patch plan disagree on the number of patches");
  if (factors.empty()) throw ConfigError("no patches to aggregate");
  const auto r = factors.front().factor.cols();
  Matrix sum = Matrix::Zero(plan.p, r);
  const auto weights = plan.multiplicity();
  for (std::size_t l = 0; l < plan.count(); ++l) {
    const IndexRange patch = plan.patches[l];
    sum.middleRows(patch.first, patch.size) += factors[l].factor * chain.rotations[l];
  }
  for (int i = 0; i < plan.p; ++i) {
    const int w = weights[static_cast<std::size_t>(i)];
    if (w == 0) throw ConfigError("grid index " + std::to_string(i + 1) + " is not covered");
    sum.row(i) /= static_cast<double>(w);
  }
  return sum;
}

Matrix covariance_from_factor(const Matrix& factor) {
  return factor * factor.transpose();
}

double interpolate_surface(const Grid& grid, const Matrix& surface, double s, double t) {
  const double lo = grid.t_min();
  const double hi = grid.t_max();
  if (!(s >= lo && s <= hi && t >= lo && t <= hi))
    throw DomainError("surface query (" + std::to_string(s) + ", " + std::to_string(t) +
                      ") outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]^2");
  const int p = grid.size();
  auto locate = [&](double x, int& cell, double& frac) {
    const double u = (x - lo) / grid.spacing();
    cell = std::clamp(static_cast<int>(std::floor(u)), 0, p - 2);
    frac = std::clamp(u - cell, 0.0, 1.0);
  };
  int i = 0, j = 0;
  double fs = 0.0, ft = 0.0;
  locate(s, i, fs);
  locate(t, j, ft);
  return (1 - fs) * (1 - ft) * surface(i, j) + fs * (1 - ft) * surface(i + 1, j) +
         (1 - fs) * ft * surface(i, j + 1) + fs * ft * surface(i + 1, j + 1);
}

double interpolate_surface(const CovarianceEstimate& est, double s, double t) {
  return interpolate_surface(est.grid, est.sigma0, s, t);
}

CovarianceEstimate estimate_from_factors(const Grid& grid, const PatchPlan& plan,
                                         std::vector<PatchFactor> factors) {
  if (plan.p != grid.size()) throw ConfigError("patch plan and grid sizes differ");
  CovarianceEstimate est{grid, {}, {}, 0, plan.multiplicity(), {}, {}, {}, std::nullopt, {}};
  est.chain = chain_rotations(factors, plan);
  est.factor = aggregate_factors(factors, est.chain, plan);
  est.sigma0 = covariance_from_factor(est.factor);
  est.rank = static_cast<int>(est.factor.cols());
  est.config_used.band = plan.b;
  est.config_used.increment = plan.a;
  est.config_used.rank = est.rank;
  for (std::size_t l = 0; l < factors.size(); ++l) {
    est.patches.push_back({plan.patches[l], 0, factors[l].sigma2, factors[l].near_degenerate});
    if (factors[l].near_degenerate)
      est.warnings.push_back("patch " + std::to_string(l + 1) +
                             ": eigen-gap at the truncation rank is below 1e-10 of the top eigenvalue");
  }
  for (std::size_t l = 0; l < est.chain.overlap_min_sv.size(); ++l)
    if (est.chain.overlap_min_sv[l] == 0.0)
      est.warnings.push_back("overlap between patches " + std::to_string(l + 1) + " and " +
                             std::to_string(l + 2) + " is rank deficient; alignment not unique");
  return est;
}

CovarianceEstimate estimate_from_patches(const Grid& grid, const PatchPlan& plan,
                                         std::span<const PatchCovariance> patches, int r) {
  if (patches.size() != plan.count())
    throw ConfigError("expected " + std::to_string(plan.count()) + " patch covariances, got " +
                      std::to_string(patches.size()));
  std::vector<PatchFactor> factors;
  factors.reserve(patches.size());
  for (const auto& pc : patches) factors.push_back(extract_factor(pc, r));
  CovarianceEstimate est = estimate_from_factors(grid, plan, std::move(factors));
  for (std::size_t l = 0; l < patches.size(); ++l) est.patches[l].n_effective = patches[l].n_effective;
  if (!patches.empty()) est.config_used.mode = patches.front().mode;
  return est;
}

CovarianceEstimate estimate_covariance(const ObservationSet& obs, const EstimatorConfig& cfg) {
  const ValidationReport report = validate(obs, cfg);
  if (!report.empty()) throw ConfigError(describe(report));

  std::optional<CvResult> cv;
  int r = 0;
  if (cfg.rank) {
    r = *cfg.rank;
  } else {
    cv = select_rank(obs, cfg);
    r = cv->chosen_r;
  }
  const PatchPlan plan = build_patch_plan(obs.grid.size(), cfg.band, cfg.increment);
  const auto patches = patch_covariances(obs, plan, cfg.mode);
  CovarianceEstimate est = estimate_from_patches(obs.grid, plan, patches, r);
  est.config_used = cfg;
  est.cv = std::move(cv);
  return est;
}

}  // namespace bandcov
