#include "bandcov/simgen.hpp"

#include "bandcov/errors.hpp"
#include "bandcov/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace bandcov {

namespace {

constexpr int kDegree = 3;

double clamped_knot(int M, int index) {
  const int intervals = M - kDegree;
  if (index <= kDegree) return 0.0;
  if (index >= M) return 1.0;
  return static_cast<double>(index - kDegree) / intervals;
}

void orthonormalize_rows(Matrix& f) {
  const double p = static_cast<double>(f.cols());
  // Two passes of modified Gram-Schmidt keep the rows orthonormal to rounding.
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index k = 0; k < f.rows(); ++k) {
      for (Eigen::Index j = 0; j < k; ++j) f.row(k) -= (f.row(k).dot(f.row(j)) / p) * f.row(j);
      const double norm = std::sqrt(f.row(k).squaredNorm() / p);
      if (!(norm > 1e-12))
        throw NumericError("eigenfunction " + std::to_string(k + 1) +
                           " is linearly dependent on the previous ones");
      f.row(k) /= norm;
    }
  }
}

double sine_mode(int k, double t) {
  return std::numbers::sqrt2 * std::sin(k * std::numbers::pi * t);
}

}  // namespace

std::vector<double> bspline_basis(int M, double t) {
  if (M < kDegree + 1) throw ConfigError("cubic B-spline basis needs M >= 4");
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("B-spline argument outside [0, 1]");
  // Knot span s with u_s <= t < u_{s+1}; the right endpoint belongs to the last span.
  int span = M - 1;
  for (int s = kDegree; s < M; ++s)
    if (t < clamped_knot(M, s + 1)) {
      span = s;
      break;
    }

  double local[kDegree + 1] = {1.0, 0.0, 0.0, 0.0};
  double left[kDegree + 1] = {};
  double right[kDegree + 1] = {};
  for (int j = 1; j <= kDegree; ++j) {
    left[j] = t - clamped_knot(M, span + 1 - j);
    right[j] = clamped_knot(M, span + j) - t;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double temp = local[r] / (right[r + 1] + left[j - r]);
      local[r] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    local[j] = saved;
  }

  std::vector<double> out(static_cast<std::size_t>(M), 0.0);
  for (int r = 0; r <= kDegree; ++r) out[static_cast<std::size_t>(span - kDegree + r)] = local[r];
  return out;
}

const std::vector<std::vector<double>>& surrogate_spline_coefficients() {
  static const std::vector<std::vector<double>> coefficients = {
      {1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0},
      {0.0, 0.0, 0.0, 0.5, 2.0, 2.0, 0.5, 0.0, 0.0, 0.0},
      {1.0, -1.0, 1.0, -1.0, 1.0, -1.0, 1.0, -1.0, 1.0, -1.0},
  };
  return coefficients;
}

Matrix make_eigenfunctions(const SimSetting& setting, const Grid& grid) {
  const int K = setting.components();
  const int p = grid.size();
  if (K < 1) throw ConfigError("simulation needs at least one component");
  Matrix f(K, p);
  if (setting.basis == EigenBasis::custom) {
    if (setting.custom_functions.rows() != K || setting.custom_functions.cols() != p)
      throw ConfigError("custom eigenfunctions must be K x p");
    f = setting.custom_functions;
  } else {
    const auto& coefficients = surrogate_spline_coefficients();
    const int n_spline =
        setting.basis == EigenBasis::bspline_mix ? std::min<int>(K, static_cast<int>(coefficients.size())) : 0;
    for (int i = 0; i < p; ++i) {
      const double t = (grid.point(i) - grid.t_min()) / (grid.t_max() - grid.t_min());
      const auto basis = bspline_basis(kSplineBasisSize, t);
      for (int k = 0; k < K; ++k) {
        if (k < n_spline) {
          double v = 0.0;
          for (int m = 0; m < kSplineBasisSize; ++m)
            v += coefficients[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)] *
                 basis[static_cast<std::size_t>(m)];
          f(k, i) = v;
        } else {
          f(k, i) = sine_mode(k + 1, t);
        }
      }
    }
  }
  orthonormalize_rows(f);
  return f;
}

Matrix population_covariance(const Matrix& eigenfunctions, const std::vector<double>& eigenvalues) {
  if (eigenfunctions.rows() != static_cast<Eigen::Index>(eigenvalues.size()))
    throw ConfigError("one eigenvalue per eigenfunction required");
  const Vector lambda = Eigen::Map<const Vector>(eigenvalues.data(), static_cast<Eigen::Index>(eigenvalues.size()));
  return eigenfunctions.transpose() * lambda.asDiagonal() * eigenfunctions;
}

Matrix population_covariance(const SimSetting& setting, const Grid& grid) {
  return population_covariance(make_eigenfunctions(setting, grid), setting.eigenvalues);
}

std::vector<Window> make_design(const DesignSpec& spec, int p, std::uint64_t seed) {
  const int d = spec.window;
  if (d < 1 || d > p)
    throw ConfigError("window length d=" + std::to_string(d) + " must lie in 1.." + std::to_string(p));
  if (spec.n_rep < 1) throw ConfigError("n_rep must be at least 1");
  if (!(spec.boundary_fraction >= 0.0 && spec.boundary_fraction <= 1.0))
    throw ConfigError("boundary fraction must lie in [0, 1]");

  auto window = [](int first, int last) {
    Window w;
    for (int i = first; i <= last; ++i) w.push_back(i);
    return w;
  };
  const int starts = p - d + 1;
  std::vector<Window> design;

  if (spec.kind == DesignKind::extended_domain) {
    Rng rng(seed);
    std::uniform_int_distribution<int> start(1 - d, p - 1);
    const int n = spec.n_rep * starts;
    for (int k = 0; k < n; ++k) {
      const int w = start(rng);
      design.push_back(window(std::max(w, 0), std::min(w + d - 1, p - 1)));
    }
    return design;
  }

  for (int w = 0; w < starts; ++w)
    for (int k = 0; k < spec.n_rep; ++k) design.push_back(window(w, w + d - 1));

  if (spec.kind == DesignKind::boundary_enriched) {
    const double n = static_cast<double>(design.size());
    const int extra = static_cast<int>(std::ceil(spec.boundary_fraction * n - 1e-9));
    const int n_left = (extra + 1) / 2;
    for (int k = 0; k < n_left; ++k) design.push_back(window(0, d - 1));
    for (int k = n_left; k < extra; ++k) design.push_back(window(p - d, p - 1));
  }
  return design;
}

ObservationSet sample_trajectories(const SimSetting& setting, const Grid& grid,
                                   const std::vector<Window>& design) {
  const Matrix phi = make_eigenfunctions(setting, grid);
  const int K = setting.components();
  const int width = static_cast<int>(std::to_string(design.size()).size());
  ObservationSet obs{grid, {}};
  obs.samples.reserve(design.size());
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector scores(K);
  for (std::size_t k = 0; k < design.size(); ++k) {
    Rng rng(derive_seed(setting.seed, {static_cast<std::uint64_t>(k)}));
    normal.reset();
    for (int c = 0; c < K; ++c)
      scores(c) = std::sqrt(setting.eigenvalues[static_cast<std::size_t>(c)]) * normal(rng);

    std::string id = std::to_string(k + 1);
    Sample s{"s" + std::string(static_cast<std::size_t>(width) - id.size(), '0') + id, {}, {}};
    for (int idx : design[k]) {
      if (idx < 0 || idx >= grid.size()) throw ConfigError("design window outside the grid");
      double value = phi.col(idx).dot(scores);
      if (setting.noise_sd > 0.0) value += setting.noise_sd * normal(rng);
      s.indices.push_back(idx);
      s.values.push_back(value);
    }
    obs.samples.push_back(std::move(s));
  }
  return obs;
}

double rmse(const Matrix& est, const Matrix& truth) {
  if (est.rows() != truth.rows() || est.cols() != truth.cols())
    throw ConfigError("rmse needs matrices of equal shape");
  const double denom = truth.norm();
  if (!(denom > 0.0)) throw DomainError("rmse undefined for a zero truth matrix");
  return (est - truth).norm() / denom;
}

std::vector<double> standard_eigenvalues(int K) {
  if (K == 3) return {16.0, 4.0, 1.0};
  if (K == 10) {
    std::vector<double> out = {16.0, 4.0, 1.0};
    for (int e = 1; e <= 7; ++e) out.push_back(std::ldexp(1.0, -e));
    return out;
  }
  throw ConfigError("standard eigenvalue sequences exist for K = 3 and K = 10 only");
}

SimSetting standard_setting(int d, int n_rep, int K, std::uint64_t seed) {
  SimSetting s;
  s.p = 30;
  s.eigenvalues = standard_eigenvalues(K);
  s.basis = EigenBasis::bspline_mix;
  s.noise_sd = 1.0;
  s.design = {DesignKind::balanced, d, n_rep, 0.0};
  s.seed = seed;
  return s;
}

}  // namespace bandcov
