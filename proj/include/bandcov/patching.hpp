#pragma once

#include "bandcov/domain.hpp"

#include <cstddef>
#include <vector>

namespace bandcov {

/// Contiguous run of 0-based grid indices [first, first + size).
struct IndexRange {
  int first = 0;
  int size = 0;

  int last() const noexcept { return first + size - 1; }
  bool contains(int i) const noexcept { return i >= first && i <= last(); }
  bool operator==(const IndexRange&) const = default;
};

/// Intersection of two ranges; size 0 when disjoint.
IndexRange intersect(IndexRange x, IndexRange y);

/// Overlapping sub-index sets I_1..I_lmax of width b advancing by a.
struct PatchPlan {
  int p = 0;
  int b = 0;
  int a = 0;
  std::vector<IndexRange> patches;

  std::size_t count() const noexcept { return patches.size(); }
  /// w_i = number of patches containing grid index i.
  std::vector<int> multiplicity() const;
};

PatchPlan build_patch_plan(int p, int b, int a);

/// Positions (into obs.samples) of subjects observing every index of `patch`.
std::vector<std::size_t> complete_cohort(const ObservationSet& obs, IndexRange patch);

struct PatchCovariance {
  int patch = 0;  // 0-based patch number
  Matrix matrix;
  /// n*_l in complete mode; the smallest pair count in pairwise mode.
  int n_effective = 0;
  PatchMode mode = PatchMode::complete;
};

/// Sample covariance (divisor n*_l) over the complete cohort of `patch`.
PatchCovariance patch_cov_complete(const ObservationSet& obs, IndexRange patch, int patch_number = 0);

/// Entrywise covariance using every subject that observes both indices of a
/// cell, centred by per-index means over all observers of that index.
PatchCovariance patch_cov_pairwise(const ObservationSet& obs, IndexRange patch, int patch_number = 0);

std::vector<PatchCovariance> patch_covariances(const ObservationSet& obs, const PatchPlan& plan,
                                               PatchMode mode);

}  // namespace bandcov
