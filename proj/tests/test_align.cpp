#include "bandcov/align.hpp"
#include "bandcov/errors.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace bandcov;

namespace {

bool orthogonal(const Matrix& o, double tol = 1e-10) {
  return (o.transpose() * o - Matrix::Identity(o.cols(), o.cols())).norm() < tol;
}

PatchFactor factor_of(const Matrix& f, int l) { return {l, f, 0.0, Vector(), false}; }

}  // namespace

TEST_CASE("self alignment is the identity") {
  std::mt19937_64 rng(1);
  const Matrix a = oracles::gaussian_matrix(6, 3, rng);
  CHECK((solve_wahba(a, a) - Matrix::Identity(3, 3)).norm() < 1e-12);
}

TEST_CASE("one-dimensional sign alignment") {
  Matrix target(1, 1), source(1, 1);
  target << -3.0;
  source << 1.0;
  const Matrix o = solve_wahba(target, source);
  CHECK(o(0, 0) == doctest::Approx(-1.0));
  const auto grid = oracles::make_rotation_grid(1);
  CHECK(oracles::brute_force_procrustes(target, source, grid).rotation(0, 0) == -1.0);
}

TEST_CASE("exact rotation recovery") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix a = oracles::gaussian_matrix(6, 2, rng);
    const Matrix q = oracles::haar_orthogonal(2, rng);
    CHECK((solve_wahba(a * q, a) - q).norm() < 1e-10);
  }
}

TEST_CASE("solver output is orthogonal and beats random orthogonal matrices") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const int r = 1 + trial % 3;
    const int m = 3 + trial % 8;
    const Matrix target = oracles::gaussian_matrix(m, r, rng);
    const Matrix source = oracles::gaussian_matrix(m, r, rng);
    const Matrix o = solve_wahba(target, source);
    CHECK(orthogonal(o));
    const double best = (source * o - target).norm();
    for (int k = 0; k < 100; ++k) {
      const Matrix other = oracles::haar_orthogonal(r, rng);
      CHECK(best <= (source * other - target).norm() + 1e-10);
    }
  }
}

TEST_CASE("solver matches the rotation-grid oracle for r = 2") {
  std::mt19937_64 rng(4);
  const auto grid = oracles::make_rotation_grid(2, 3600);
  CHECK(grid.elements.size() == 7200);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix target = oracles::gaussian_matrix(5, 2, rng);
    const Matrix source = oracles::gaussian_matrix(5, 2, rng);
    const double solver = (source * solve_wahba(target, source) - target).norm();
    const auto brute = oracles::brute_force_procrustes(target, source, grid);
    CHECK(solver <= brute.objective + 1e-12);
    CHECK(brute.objective - solver <= source.norm() * std::numbers::pi / 3600);
  }
}

TEST_CASE("equivariance under a common right rotation") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int r = 1 + trial % 3;
    const Matrix target = oracles::gaussian_matrix(7, r, rng);
    const Matrix source = oracles::gaussian_matrix(7, r, rng);
    const Matrix rot = oracles::haar_orthogonal(r, rng);
    const Matrix lhs = solve_wahba(target * rot, source * rot);
    const Matrix rhs = rot.transpose() * solve_wahba(target, source) * rot;
    CHECK((lhs - rhs).norm() < 1e-10);
  }
}

TEST_CASE("perturbation bound for the alignment") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const int r = 1 + trial % 3;
    const int m = r + 2 + trial % 6;
    Eigen::JacobiSVD<Matrix> svd(oracles::gaussian_matrix(m, r, rng), Eigen::ComputeThinU | Eigen::ComputeThinV);
    Vector sv = svd.singularValues();
    const double lambda = 0.5 + unit(rng);
    sv = sv.cwiseMax(lambda);
    const Matrix a = svd.matrixU() * sv.asDiagonal() * svd.matrixV().transpose();
    const Matrix o1 = oracles::haar_orthogonal(r, rng), o2 = oracles::haar_orthogonal(r, rng);
    const double a1 = 0.2 * unit(rng), a2 = 0.2 * unit(rng);
    Matrix e1 = oracles::gaussian_matrix(m, r, rng), e2 = oracles::gaussian_matrix(m, r, rng);
    e1 *= a1 / e1.norm();
    e2 *= a2 / e2.norm();
    const Matrix o = solve_wahba(a * o1 + e1, a * o2 + e2);
    CHECK((o - o2.transpose() * o1).norm() <= 2 * (a1 + a2) / lambda);
  }
}

TEST_CASE("chain of a single patch is the identity") {
  const auto plan = build_patch_plan(5, 5, 1);
  std::vector<PatchFactor> factors{factor_of(Matrix::Ones(5, 2), 0)};
  const auto chain = chain_rotations(factors, plan);
  REQUIRE(chain.rotations.size() == 1);
  CHECK(chain.rotations[0] == Matrix::Identity(2, 2));
  CHECK(chain.overlap_min_sv.empty());
}

TEST_CASE("chain undoes patchwise rotations of an exact factor") {
  std::mt19937_64 rng(7);
  const int p = 20, r = 3;
  const auto plan = build_patch_plan(p, 8, 3);
  const Matrix a = oracles::gaussian_matrix(p, r, rng);
  std::vector<Matrix> q;
  std::vector<PatchFactor> factors;
  for (std::size_t l = 0; l < plan.count(); ++l) {
    q.push_back(oracles::haar_orthogonal(r, rng));
    factors.push_back(factor_of(a.middleRows(plan.patches[l].first, plan.patches[l].size) * q.back(), static_cast<int>(l)));
  }
  const auto chain = chain_rotations(factors, plan);
  REQUIRE(chain.rotations.size() == plan.count());
  CHECK(chain.rotations[0] == Matrix::Identity(r, r));
  for (std::size_t l = 0; l < plan.count(); ++l) {
    CHECK(orthogonal(chain.rotations[l]));
    CHECK((q[l] * chain.rotations[l] - q[0]).norm() < 1e-9);
  }
  for (double sv : chain.overlap_min_sv) CHECK(sv > 0.0);
}

TEST_CASE("rank-deficient overlap still completes and reports zero") {
  // Overlap rows {2, 3} carry only the first column; the second column of the
  // next patch's overlap is zero, so the alignment of that column is free.
  const auto plan = build_patch_plan(6, 4, 2);
  Matrix f1(4, 2), f2(4, 2);
  f1 << 1, 0, 0, 1, 1, 0, 2, 0;
  f2 << 1, 0, 2, 0, 0, 1, 1, 1;
  std::vector<PatchFactor> factors{factor_of(f1, 0), factor_of(f2, 1)};
  const auto chain = chain_rotations(factors, plan);
  REQUIRE(chain.rotations.size() == 2);
  CHECK(orthogonal(chain.rotations[1]));
  CHECK(chain.overlap_min_sv[0] == doctest::Approx(0.0));
}

TEST_CASE("chain is bit-reproducible") {
  std::mt19937_64 rng(8);
  const auto plan = build_patch_plan(15, 6, 2);
  std::vector<PatchFactor> factors;
  for (std::size_t l = 0; l < plan.count(); ++l)
    factors.push_back(factor_of(oracles::gaussian_matrix(plan.patches[l].size, 2, rng), static_cast<int>(l)));
  const auto first = chain_rotations(factors, plan);
  const auto second = chain_rotations(factors, plan);
  for (std::size_t l = 0; l < plan.count(); ++l) CHECK(first.rotations[l] == second.rotations[l]);
}

TEST_CASE("chain rejects mismatched inputs") {
  const auto plan = build_patch_plan(10, 5, 3);
  std::vector<PatchFactor> factors{factor_of(Matrix::Ones(5, 1), 0)};
  CHECK_THROWS_AS(chain_rotations(factors, plan), ConfigError);
}
