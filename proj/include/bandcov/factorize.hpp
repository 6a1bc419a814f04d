#pragma once

#include "bandcov/domain.hpp"
#include "bandcov/patching.hpp"

namespace bandcov {

/// Eigendecomposition with eigenvalues in non-increasing order. Each
/// eigenvector is signed so its largest-magnitude entry (lowest index on
/// ties) is positive.
struct SymEig {
  Matrix vectors;
  Vector values;
};

SymEig sym_eig_descending(const Matrix& s);

struct PatchFactor {
  int patch = 0;
  Matrix factor;  // |I_l| x r
  double sigma2 = 0.0;
  Vector eigvals;
  /// d_r - d_{r+1} < 1e-10 d_1: the leading subspace is poorly determined.
  bool near_degenerate = false;
};

/// Rank-r truncation of a patch covariance after removing the noise level
/// estimated from the trailing eigenvalues.
PatchFactor extract_factor(const PatchCovariance& pc, int r);

}  // namespace bandcov
