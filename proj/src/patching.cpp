#include "bandcov/patching.hpp"

#include "bandcov/errors.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace bandcov {

IndexRange intersect(IndexRange x, IndexRange y) {
  const int first = std::max(x.first, y.first);
  const int last = std::min(x.last(), y.last());
  if (last < first) return {first, 0};
  return {first, last - first + 1};
}

std::vector<int> PatchPlan::multiplicity() const {
  std::vector<int> w(static_cast<std::size_t>(p), 0);
  for (const auto& patch : patches)
    for (int i = patch.first; i <= patch.last(); ++i) ++w[static_cast<std::size_t>(i)];
  return w;
}

PatchPlan build_patch_plan(int p, int b, int a) {
  if (a < 1 || a > b || b > p)
    throw ConfigError("patch plan needs 1 <= a <= b <= p (p=" + std::to_string(p) +
                      ", b=" + std::to_string(b) + ", a=" + std::to_string(a) + ")");
  PatchPlan plan{p, b, a, {}};
  const int l_max = 1 + (p - b + a - 1) / a;
  plan.patches.reserve(static_cast<std::size_t>(l_max));
  for (int l = 0; l < l_max; ++l) {
    const int first = l * a;
    const int last = std::min(first + b, p) - 1;
    plan.patches.push_back({first, last - first + 1});
  }
  return plan;
}

std::vector<std::size_t> complete_cohort(const ObservationSet& obs, IndexRange patch) {
  std::vector<std::size_t> cohort;
  for (std::size_t k = 0; k < obs.n(); ++k) {
    const auto& s = obs.samples[k];
    auto pos = s.find(patch.first);
    if (!pos) continue;
    const std::size_t end = *pos + static_cast<std::size_t>(patch.size) - 1;
    // Strictly increasing indices: the run is complete iff the value
    // (size - 1) slots later is the patch's last index.
    if (end < s.indices.size() && s.indices[end] == patch.last()) cohort.push_back(k);
  }
  return cohort;
}

PatchCovariance patch_cov_complete(const ObservationSet& obs, IndexRange patch, int patch_number) {
  const auto cohort = complete_cohort(obs, patch);
  const int n = static_cast<int>(cohort.size());
  if (n < 2)
    throw InsufficientDataError("patch " + std::to_string(patch_number + 1) + " (indices " +
                                    std::to_string(patch.first + 1) + ".." +
                                    std::to_string(patch.last() + 1) + ") has complete cohort of " +
                                    std::to_string(n) + " subject(s); need at least 2",
                                patch_number + 1);
  const int m = patch.size;
  Matrix data(n, m);
  for (int row = 0; row < n; ++row) {
    const auto& s = obs.samples[cohort[static_cast<std::size_t>(row)]];
    const std::size_t start = *s.find(patch.first);
    for (int j = 0; j < m; ++j) data(row, j) = s.values[start + static_cast<std::size_t>(j)];
  }
  const Eigen::RowVectorXd mean = data.colwise().mean();
  data.rowwise() -= mean;
  Matrix cov = (data.transpose() * data) / static_cast<double>(n);
  cov = 0.5 * (cov + cov.transpose()).eval();
  return {patch_number, std::move(cov), n, PatchMode::complete};
}

PatchCovariance patch_cov_pairwise(const ObservationSet& obs, IndexRange patch, int patch_number) {
  const int m = patch.size;
  const auto n = static_cast<Eigen::Index>(obs.n());
  Matrix values = Matrix::Zero(n, m);
  Matrix seen = Matrix::Zero(n, m);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto& s = obs.samples[static_cast<std::size_t>(k)];
    auto it = std::lower_bound(s.indices.begin(), s.indices.end(), patch.first);
    for (; it != s.indices.end() && *it <= patch.last(); ++it) {
      const auto j = *it - patch.first;
      values(k, j) = s.values[static_cast<std::size_t>(it - s.indices.begin())];
      seen(k, j) = 1.0;
    }
  }

  Vector mean(m);
  for (int i = 0; i < m; ++i) {
    double sum = 0.0, count = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      sum += seen(k, i) * values(k, i);
      count += seen(k, i);
    }
    mean(i) = count > 0 ? sum / count : 0.0;
  }

  Matrix cov(m, m);
  int n_min = std::numeric_limits<int>::max();
  for (int j = 0; j < m; ++j) {
    for (int i = j; i < m; ++i) {
      double sum = 0.0;
      int count = 0;
      for (Eigen::Index k = 0; k < n; ++k) {
        if (seen(k, i) == 0.0 || seen(k, j) == 0.0) continue;
        sum += (values(k, i) - mean(i)) * (values(k, j) - mean(j));
        ++count;
      }
      if (count < 2)
        throw InsufficientDataError(
            "patch " + std::to_string(patch_number + 1) + ": grid pair (" +
                std::to_string(patch.first + i + 1) + ", " + std::to_string(patch.first + j + 1) +
                ") observed jointly by " + std::to_string(count) + " subject(s); need at least 2",
            patch_number + 1, std::pair{patch.first + i + 1, patch.first + j + 1});
      cov(i, j) = cov(j, i) = sum / count;
      n_min = std::min(n_min, count);
    }
  }
  return {patch_number, std::move(cov), n_min, PatchMode::pairwise};
}

std::vector<PatchCovariance> patch_covariances(const ObservationSet& obs, const PatchPlan& plan,
                                               PatchMode mode) {
  std::vector<PatchCovariance> out;
  out.reserve(plan.count());
  for (std::size_t l = 0; l < plan.count(); ++l) {
    const int number = static_cast<int>(l);
    out.push_back(mode == PatchMode::complete ? patch_cov_complete(obs, plan.patches[l], number)
                                              : patch_cov_pairwise(obs, plan.patches[l], number));
  }
  return out;
}

}  // namespace bandcov
