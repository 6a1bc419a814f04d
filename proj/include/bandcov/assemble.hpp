#pragma once

#include "bandcov/align.hpp"
#include "bandcov/domain.hpp"
#include "bandcov/factorize.hpp"
#include "bandcov/patching.hpp"
#include "bandcov/rankselect.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bandcov {

struct PatchSummary {
  IndexRange range;
  int n_effective = 0;
  double sigma2 = 0.0;
  bool near_degenerate = false;
};

struct CovarianceEstimate {
  Grid grid;
  Matrix factor;  // p x r
  Matrix sigma0;  // factor * factor^T
  int rank = 0;
  std::vector<int> weights;
  EstimatorConfig config_used;
  std::vector<PatchSummary> patches;
  RotationChain chain;
  std::optional<CvResult> cv;
  std::vector<std::string> warnings;
};

/// Averages the rotated patch factors row by row over the patches that contain each row.
Matrix aggregate_factors(std::span<const PatchFactor> factors, const RotationChain& chain,
                         const PatchPlan& plan);

Matrix covariance_from_factor(const Matrix& factor);

/// Bilinear interpolation of a grid matrix; exact at grid nodes.
double interpolate_surface(const Grid& grid, const Matrix& surface, double s, double t);
double interpolate_surface(const CovarianceEstimate& est, double s, double t);

/// Steps from already-factored patches onwards: alignment, aggregation, product.
CovarianceEstimate estimate_from_factors(const Grid& grid, const PatchPlan& plan,
                                         std::vector<PatchFactor> factors);

/// Pipeline from given patch covariances. Used by cross-validation and by
/// tests that inject exact population blocks.
CovarianceEstimate estimate_from_patches(const Grid& grid, const PatchPlan& plan,
                                         std::span<const PatchCovariance> patches, int r);

/// Full pipeline. Selects the rank by cross-validation when cfg.rank is empty.
CovarianceEstimate estimate_covariance(const ObservationSet& obs, const EstimatorConfig& cfg);

}  // namespace bandcov
