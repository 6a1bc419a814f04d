#pragma once

#include "bandcov/assemble.hpp"
#include "bandcov/domain.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace bandcov {

struct ParsedObservations {
  ObservationSet obs;
  std::vector<std::string> warnings;
};

/// Long-format CSV with header `subject,index,value` and 1-based grid
/// indices. Subjects keep their order of first appearance; each subject's
/// measurements are sorted by index. Without `p` the grid size is the
/// largest index seen (a warning is recorded).
ParsedObservations parse_long_csv(std::istream& in, std::optional<int> p = std::nullopt,
                                  double t_min = 0.0, double t_max = 1.0);
ParsedObservations read_long_csv(const std::filesystem::path& path, std::optional<int> p = std::nullopt,
                                 double t_min = 0.0, double t_max = 1.0);

void write_long_csv(std::ostream& out, const ObservationSet& obs);

/// 17 significant digits, so values parse back exactly.
std::string format_double(double value);

/// One row per line, comma separated.
void write_matrix(std::ostream& out, const Matrix& m);
Matrix read_matrix(std::istream& in);
Matrix read_matrix(const std::filesystem::path& path);

/// JSON sidecar describing an estimate: plan, rank, per-patch noise and cohort sizes, CV table.
std::string metadata_json(const CovarianceEstimate& est);

}  // namespace bandcov
