#pragma once

#include "bandcov/domain.hpp"

#include <cstdint>
#include <vector>

namespace bandcov {

enum class EigenBasis { bspline_mix, sine, custom };
enum class DesignKind { balanced, boundary_enriched, extended_domain };

struct DesignSpec {
  DesignKind kind = DesignKind::balanced;
  int window = 10;  // d
  int n_rep = 10;
  double boundary_fraction = 0.0;  // c, boundary_enriched only
};

struct SimSetting {
  int p = 30;
  std::vector<double> eigenvalues;
  EigenBasis basis = EigenBasis::bspline_mix;
  /// K x p raw eigenfunction values when basis == custom (orthonormalised on use).
  Matrix custom_functions;
  double noise_sd = 1.0;
  DesignSpec design;
  std::uint64_t seed = 0;

  int components() const { return static_cast<int>(eigenvalues.size()); }
};

/// Number of cubic B-spline coefficients used for the surrogate eigenfunctions.
inline constexpr int kSplineBasisSize = 10;

/// Cubic B-spline basis of size M on a clamped, equally spaced knot vector over [0, 1].
std::vector<double> bspline_basis(int M, double t);

/// Fixed coefficient vectors (length kSplineBasisSize) for the three
/// leading surrogate eigenfunctions: near-constant, single bump, sign change.
const std::vector<std::vector<double>>& surrogate_spline_coefficients();

/// K x p matrix of eigenfunction values, orthonormal under (1/p) sum_i f(t_i) g(t_i).
Matrix make_eigenfunctions(const SimSetting& setting, const Grid& grid);

/// Sigma_0[i, j] = sum_k lambda_k phi_k(t_i) phi_k(t_j).
Matrix population_covariance(const Matrix& eigenfunctions, const std::vector<double>& eigenvalues);
Matrix population_covariance(const SimSetting& setting, const Grid& grid);

/// One sorted 0-based index window per subject.
using Window = std::vector<int>;

std::vector<Window> make_design(const DesignSpec& spec, int p, std::uint64_t seed);

/// Subject k gets scores xi_k ~ N(0, diag(lambda)) and noise drawn from a
/// stream seeded by (setting.seed, k).
ObservationSet sample_trajectories(const SimSetting& setting, const Grid& grid,
                                   const std::vector<Window>& design);

/// ||est - truth||_F / ||truth||_F.
double rmse(const Matrix& est, const Matrix& truth);

/// Eigenvalues (16, 4, 1) or (16, 4, 1, 2^-1, ..., 2^-7) for K = 3 or 10.
std::vector<double> standard_eigenvalues(int K);

/// Simulation setting on p = 30 with window d, n_rep subjects per window and K components.
SimSetting standard_setting(int d, int n_rep, int K, std::uint64_t seed);

}  // namespace bandcov
