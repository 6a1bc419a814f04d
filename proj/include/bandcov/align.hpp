#pragma once

#include "bandcov/domain.hpp"
#include "bandcov/factorize.hpp"
#include "bandcov/patching.hpp"

#include <span>
#include <vector>

namespace bandcov {

/// Orthogonal O minimising ||source * O - target||_F (Wahba / orthogonal
/// Procrustes). Reflections are allowed. Both inputs are m x r.
Matrix solve_wahba(const Matrix& target, const Matrix& source);

struct RotationChain {
  /// O_1 = I, then one rotation per subsequent patch.
  std::vector<Matrix> rotations;
  /// For each consecutive pair, the smaller sigma_r of the two overlap
  /// blocks. Zero means the alignment was not identifiable.
  std::vector<double> overlap_min_sv;
};

RotationChain chain_rotations(std::span<const PatchFactor> factors, const PatchPlan& plan);

/// r-th singular value of an m x r block (0 when m < r).
double smallest_singular_value(const Matrix& block);

}  // namespace bandcov
