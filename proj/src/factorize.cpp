#include "bandcov/factorize.hpp"

#include "bandcov/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bandcov {

SymEig sym_eig_descending(const Matrix& s) {
  if (s.rows() != s.cols()) throw NumericError("eigendecomposition needs a square matrix");
  if (!s.allFinite()) throw NumericError("eigendecomposition input has non-finite entries");
  const Matrix sym = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) throw NumericError("symmetric eigensolver did not converge");

  const Eigen::Index n = s.rows();
  SymEig out{Matrix(n, n), Vector(n)};
  for (Eigen::Index j = 0; j < n; ++j) {
    // Eigen returns ascending order.
    out.values(j) = solver.eigenvalues()(n - 1 - j);
    Vector v = solver.eigenvectors().col(n - 1 - j);
    Eigen::Index pivot = 0;
    for (Eigen::Index i = 1; i < n; ++i)
      if (std::abs(v(i)) > std::abs(v(pivot))) pivot = i;
    if (v(pivot) < 0) v = -v;
    out.vectors.col(j) = v;
  }
  return out;
}

PatchFactor extract_factor(const PatchCovariance& pc, int r) {
  const auto m = pc.matrix.rows();
  if (r < 1 || r >= m)
    throw ConfigError("rank " + std::to_string(r) + " must satisfy 1 <= r < |I_l| = " +
                      std::to_string(m) + " (patch " + std::to_string(pc.patch + 1) + ")");
  SymEig eig = sym_eig_descending(pc.matrix);

  double trailing = 0.0;
  for (Eigen::Index i = r; i < m; ++i) trailing += eig.values(i);
  const double sigma2 = std::max(trailing / static_cast<double>(m - r), 0.0);

  Matrix factor(m, r);
  for (int j = 0; j < r; ++j) {
    const double excess = eig.values(j) - sigma2;
    if (excess > 0.0)
      factor.col(j) = eig.vectors.col(j) * std::sqrt(excess);
    else
      factor.col(j).setZero();
  }

  const double top = std::abs(eig.values(0));
  const bool degenerate = eig.values(r - 1) - eig.values(r) < 1e-10 * top;
  return {pc.patch, std::move(factor), sigma2, std::move(eig.values), degenerate};
}

}  // namespace bandcov
