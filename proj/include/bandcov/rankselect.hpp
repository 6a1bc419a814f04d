#pragma once

#include "bandcov/domain.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace bandcov {

struct SubjectSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Random train/test partition with |test| = max(1, floor(n / folds)).
/// Both position lists are sorted.
SubjectSplit split_subjects(const ObservationSet& obs, int folds, std::uint64_t seed);

/// Pairwise covariance with cells supported by fewer than `min_pairs`
/// subjects masked out (NaN in `values`, false in `observed`).
struct MaskedCovariance {
  Matrix values;
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> observed;

  std::size_t observed_count() const { return static_cast<std::size_t>(observed.count()); }
};

MaskedCovariance test_covariance(const ObservationSet& test, int min_pairs);

/// Sum of squared differences over the observed cells of `test`.
double prediction_error(const Matrix& estimate, const MaskedCovariance& test);

struct CvResult {
  /// E(r) for every rank whose fits succeeded on all used splits.
  std::map<int, double> errors;
  /// Candidates dropped because some fit failed.
  std::vector<int> excluded;
  int chosen_r = 0;
  int splits_used = 0;
  std::vector<std::size_t> pairs_evaluated;
  std::vector<std::string> failures;
};

/// Random sub-sampling cross-validation over cfg.candidate_ranks().
CvResult select_rank(const ObservationSet& obs, const EstimatorConfig& cfg);

}  // namespace bandcov
