#include "bandcov/assemble.hpp"
#include "bandcov/errors.hpp"
#include "bandcov/simgen.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace bandcov;

namespace {

std::vector<PatchCovariance> population_patches(const Matrix& sigma, const PatchPlan& plan) {
  std::vector<PatchCovariance> out;
  for (std::size_t l = 0; l < plan.count(); ++l) {
    const IndexRange I = plan.patches[l];
    out.push_back({static_cast<int>(l), sigma.block(I.first, I.first, I.size, I.size), 1000, PatchMode::complete});
  }
  return out;
}

double rel_error(const Matrix& est, const Matrix& truth) { return (est - truth).norm() / truth.norm(); }

}  // namespace

TEST_CASE("multiplicities for p=10, b=5, a=3") {
  const auto plan = build_patch_plan(10, 5, 3);
  CHECK(plan.multiplicity() == std::vector<int>{1, 1, 1, 2, 2, 1, 2, 2, 1, 1});
}

TEST_CASE("aggregation divides each row by its multiplicity") {
  const auto plan = build_patch_plan(10, 5, 3);
  std::vector<PatchFactor> factors;
  RotationChain chain;
  for (std::size_t l = 0; l < plan.count(); ++l) {
    factors.push_back({static_cast<int>(l), Matrix::Ones(plan.patches[l].size, 1) * double(l + 1), 0.0, Vector(), false});
    chain.rotations.push_back(Matrix::Identity(1, 1));
  }
  const Matrix agg = aggregate_factors(factors, chain, plan);
  const Eigen::VectorXd expected =
      (Eigen::VectorXd(10) << 1, 1, 1, 1.5, 1.5, 2, 2.5, 2.5, 3, 3).finished();
  CHECK((agg.col(0) - expected).norm() < 1e-15);
}

TEST_CASE("a single frame passes through unchanged") {
  std::mt19937_64 rng(1);
  const auto plan = build_patch_plan(6, 6, 1);
  const Matrix a = oracles::gaussian_matrix(6, 2, rng);
  const auto est = estimate_from_factors(Grid(6), plan, {PatchFactor{0, a, 0.0, Vector(), false}});
  CHECK(est.factor == a);
  CHECK(est.weights == std::vector<int>(6, 1));
}

TEST_CASE("consistently framed exact factors aggregate to the rotated truth") {
  std::mt19937_64 rng(2);
  const int p = 16, r = 2;
  const auto plan = build_patch_plan(p, 6, 2);
  const Matrix a = oracles::gaussian_matrix(p, r, rng);
  std::vector<PatchFactor> factors;
  std::vector<Matrix> q;
  for (std::size_t l = 0; l < plan.count(); ++l) {
    q.push_back(oracles::haar_orthogonal(r, rng));
    factors.push_back({static_cast<int>(l), a.middleRows(plan.patches[l].first, plan.patches[l].size) * q.back(),
                       0.0, Vector(), false});
  }
  const auto est = estimate_from_factors(Grid(p), plan, factors);
  CHECK((est.factor - a * q[0]).norm() < 1e-9);
  CHECK(rel_error(est.sigma0, a * a.transpose()) < 1e-10);
}

TEST_CASE("covariance from factor") {
  CHECK(covariance_from_factor(Matrix::Zero(5, 2)).isZero(0.0));
  std::mt19937_64 rng(3);
  const Matrix a = oracles::gaussian_matrix(9, 3, rng);
  const Matrix q = oracles::haar_orthogonal(3, rng);
  const Matrix s = covariance_from_factor(a);
  CHECK((covariance_from_factor(a * q) - s).norm() < 1e-12);
  CHECK((s - s.transpose()).norm() == 0.0);
  const auto eig = sym_eig_descending(s);
  for (int j = 3; j < 9; ++j) CHECK(std::abs(eig.values(j)) <= 1e-10 * eig.values(0));
}

TEST_CASE("bilinear surface interpolation") {
  const Grid grid(5, 0.0, 2.0);
  Matrix m(5, 5);
  std::mt19937_64 rng(4);
  m = oracles::gaussian_matrix(5, 5, rng);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) CHECK(interpolate_surface(grid, m, grid.point(i), grid.point(j)) == doctest::Approx(m(i, j)).epsilon(1e-14));

  const double mid = interpolate_surface(grid, m, 0.25, 1.25);
  CHECK(mid == doctest::Approx((m(0, 2) + m(1, 2) + m(0, 3) + m(1, 3)) / 4));

  Matrix lin(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) lin(i, j) = 3.0 + 0.5 * (i + j);
  std::uniform_real_distribution<double> unit(0.0, 2.0);
  for (int k = 0; k < 100; ++k) {
    const double s = unit(rng), t = unit(rng);
    // Index coordinate is x / h with h = 0.5.
    CHECK(interpolate_surface(grid, lin, s, t) == doctest::Approx(3.0 + 0.5 * (2 * s + 2 * t)).epsilon(1e-12));
  }

  CHECK_THROWS_AS(interpolate_surface(grid, m, -0.1, 1.0), DomainError);
  CHECK_THROWS_AS(interpolate_surface(grid, m, 1.0, 2.5), DomainError);
}

TEST_CASE("exact recovery from injected population patches") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int p = 12, r = 2;
    const Matrix a = oracles::gaussian_matrix(p, r, rng);
    const Matrix sigma = a * a.transpose();
    const auto plan = build_patch_plan(p, 6, 2);
    const auto patches = population_patches(sigma, plan);
    const auto est = estimate_from_patches(Grid(p), plan, patches, r);
    CHECK(rel_error(est.sigma0, sigma) < 1e-8);
    CHECK(est.rank == r);
    CHECK(est.patches.size() == plan.count());
  }
}

TEST_CASE("exact recovery with a noise floor on the diagonal") {
  // Population patch blocks of A A^T + s^2 I: the noise level is recovered exactly.
  std::mt19937_64 rng(6);
  const int p = 20, r = 3;
  const Matrix a = oracles::gaussian_matrix(p, r, rng);
  const Matrix sigma = a * a.transpose();
  const auto plan = build_patch_plan(p, 9, 2);
  auto patches = population_patches(sigma, plan);
  for (auto& pc : patches) pc.matrix.diagonal().array() += 0.7;
  const auto est = estimate_from_patches(Grid(p), plan, patches, r);
  CHECK(rel_error(est.sigma0, sigma) < 1e-8);
  for (const auto& ps : est.patches) CHECK(ps.sigma2 == doctest::Approx(0.7).epsilon(1e-10));
}

TEST_CASE("estimate depends on patch covariances only") {
  std::mt19937_64 rng(7);
  const int p = 15, r = 2;
  const auto plan = build_patch_plan(p, 7, 2);
  const Matrix a = oracles::gaussian_matrix(p, r, rng);
  std::vector<PatchFactor> plain, rotated;
  for (std::size_t l = 0; l < plan.count(); ++l) {
    const Matrix block = a.middleRows(plan.patches[l].first, plan.patches[l].size) +
                         0.1 * oracles::gaussian_matrix(plan.patches[l].size, r, rng);
    plain.push_back({static_cast<int>(l), block, 0.0, Vector(), false});
    rotated.push_back({static_cast<int>(l), block * oracles::haar_orthogonal(r, rng), 0.0, Vector(), false});
  }
  const auto e1 = estimate_from_factors(Grid(p), plan, plain);
  const auto e2 = estimate_from_factors(Grid(p), plan, rotated);
  CHECK((e1.sigma0 - e2.sigma0).norm() < 1e-10);
}

TEST_CASE("single fully observed cohort is a truncated sample covariance") {
  const int p = 8, r = 2;
  auto setting = standard_setting(p, 30, 3, 11);
  setting.p = p;
  const Grid grid(p);
  std::vector<Window> design(60);
  for (auto& w : design)
    for (int i = 0; i < p; ++i) w.push_back(i);
  const auto obs = sample_trajectories(setting, grid, design);
  EstimatorConfig cfg;
  cfg.band = p;
  cfg.increment = 1;
  cfg.rank = r;
  const auto est = estimate_covariance(obs, cfg);

  const Matrix s = oracles::complete_patch_covariance(obs, {0, p});
  const auto eig = sym_eig_descending(s);
  const double sigma2 = std::max(0.0, eig.values.tail(p - r).mean());
  Matrix expected = Matrix::Zero(p, p);
  for (int j = 0; j < r; ++j)
    expected += std::max(eig.values(j) - sigma2, 0.0) * eig.vectors.col(j) * eig.vectors.col(j).transpose();
  CHECK((est.sigma0 - expected).norm() < 1e-10 * expected.norm());
}

TEST_CASE("pipeline error propagates insufficient data with the patch number") {
  const Grid grid(6);
  ObservationSet obs{grid, {}};
  for (int k = 0; k < 4; ++k) obs.samples.push_back({"s" + std::to_string(k), {0, 1, 2}, {0.3 * k, -0.1 * k, 1.0 + k}});
  for (int k = 0; k < 4; ++k) obs.samples.push_back({"t" + std::to_string(k), {3, 4, 5}, {0.2 * k, 1.0, -0.5 * k}});
  EstimatorConfig cfg;
  cfg.band = 4;
  cfg.increment = 2;
  cfg.rank = 1;
  try {
    (void)estimate_covariance(obs, cfg);
    FAIL("expected an error");
  } catch (const InsufficientDataError& e) {
    CHECK(e.patch() == 1);
  }
}

TEST_CASE("estimate is deterministic and matches the simulation truth at moderate size") {
  const auto setting = standard_setting(10, 50, 3, 21);
  const Grid grid(setting.p);
  const auto design = make_design(setting.design, setting.p, 21);
  const auto obs = sample_trajectories(setting, grid, design);
  EstimatorConfig cfg;
  cfg.band = 7;
  cfg.increment = 1;
  cfg.rank = 3;
  const auto e1 = estimate_covariance(obs, cfg);
  const auto e2 = estimate_covariance(obs, cfg);
  CHECK(e1.sigma0 == e2.sigma0);
  CHECK(rmse(e1.sigma0, population_covariance(setting, grid)) < 0.5);
}
