#include "bandcov/align.hpp"

#include "bandcov/errors.hpp"

#include <algorithm>
#include <string>

namespace bandcov {

Matrix solve_wahba(const Matrix& target, const Matrix& source) {
  if (target.rows() != source.rows() || target.cols() != source.cols())
    throw ConfigError("Wahba inputs must have matching shapes");
  if (!target.allFinite() || !source.allFinite())
    throw NumericError("Wahba inputs have non-finite entries");
  const Matrix cross = source.transpose() * target;
  Eigen::JacobiSVD<Matrix> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

double smallest_singular_value(const Matrix& block) {
  const auto r = block.cols();
  if (r == 0) return 0.0;
  if (block.rows() < r) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(block);
  return svd.singularValues()(r - 1);
}

RotationChain chain_rotations(std::span<const PatchFactor> factors, const PatchPlan& plan) {
  if (factors.size() != plan.count())
    throw ConfigError("expected " + std::to_string(plan.count()) + " patch factors, got " +
                      std::to_string(factors.size()));
  RotationChain chain;
  if (factors.empty()) return chain;
  const auto r = factors.front().factor.cols();
  chain.rotations.push_back(Matrix::Identity(r, r));

  for (std::size_t l = 0; l + 1 < factors.size(); ++l) {
    const IndexRange prev = plan.patches[l];
    const IndexRange next = plan.patches[l + 1];
    const IndexRange overlap = intersect(prev, next);
    if (overlap.size < 1)
      throw ConfigError("patches " + std::to_string(l + 1) + " and " + std::to_string(l + 2) +
                        " do not overlap");
    const Matrix target =
        factors[l].factor.middleRows(overlap.first - prev.first, overlap.size) * chain.rotations[l];
    const Matrix source = factors[l + 1].factor.middleRows(overlap.first - next.first, overlap.size);
    chain.rotations.push_back(solve_wahba(target, source));
    chain.overlap_min_sv.push_back(
        std::min(smallest_singular_value(target), smallest_singular_value(source)));
  }
  return chain;
}

}  // namespace bandcov
