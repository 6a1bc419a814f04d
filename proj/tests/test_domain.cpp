#include "bandcov/domain.hpp"
#include "bandcov/errors.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace bandcov;

namespace {

ObservationSet window_set(int p, int d) {
  ObservationSet obs{Grid(p), {}};
  for (int w = 0; w + d <= p; ++w) {
    Sample s{"s" + std::to_string(w), {}, {}};
    for (int i = w; i < w + d; ++i) {
      s.indices.push_back(i);
      s.values.push_back(0.1 * i);
    }
    obs.samples.push_back(s);
  }
  return obs;
}

bool has_rule(const ValidationReport& report, const std::string& rule) {
  return std::any_of(report.begin(), report.end(), [&](const Violation& v) { return v.rule == rule; });
}

}  // namespace

TEST_CASE("grid is equally spaced with exact endpoints") {
  Grid g(30, 48.0, 62.0);
  CHECK(g.size() == 30);
  CHECK(g.t_min() == 48.0);
  CHECK(g.t_max() == 62.0);
  for (int i = 1; i < g.size(); ++i)
    CHECK(g.point(i) - g.point(i - 1) == doctest::Approx(g.spacing()).epsilon(1e-12));
  CHECK_THROWS_AS(Grid(1), ConfigError);
  CHECK_THROWS_AS(Grid(5, 1.0, 1.0), ConfigError);
}

TEST_CASE("validate accepts a well-formed configuration") {
  const auto obs = window_set(30, 10);
  EstimatorConfig cfg;
  cfg.band = 7;
  cfg.increment = 1;
  cfg.rank = 3;
  CHECK(validate(obs, cfg).empty());
}

TEST_CASE("validate flags a > b - r") {
  const auto obs = window_set(30, 10);
  EstimatorConfig cfg;
  cfg.band = 7;
  cfg.rank = 3;
  cfg.increment = 7 - 3 + 1;
  const auto report = validate(obs, cfg);
  CHECK(has_rule(report, "a <= b - r"));
}

TEST_CASE("validate flags an index past the grid") {
  auto obs = window_set(30, 10);
  obs.samples[0].indices.push_back(30);  // external index 31
  obs.samples[0].values.push_back(1.0);
  EstimatorConfig cfg;
  cfg.band = 7;
  cfg.rank = 3;
  const auto report = validate(obs, cfg);
  REQUIRE(has_rule(report, "index out of range"));
  const auto it = std::find_if(report.begin(), report.end(),
                               [](const Violation& v) { return v.rule == "index out of range"; });
  CHECK(it->detail.find("31") != std::string::npos);
}

TEST_CASE("validate flags empty samples, disorder and non-finite values") {
  auto obs = window_set(30, 10);
  obs.samples.push_back({"empty", {}, {}});
  obs.samples.push_back({"backwards", {4, 3}, {1.0, 2.0}});
  obs.samples.push_back({"nan", {2}, {std::nan("")}});
  EstimatorConfig cfg;
  cfg.band = 7;
  cfg.rank = 3;
  const auto report = validate(obs, cfg);
  CHECK(has_rule(report, "non-empty sample"));
  CHECK(has_rule(report, "indices strictly increasing"));
  CHECK(has_rule(report, "finite values"));
}

TEST_CASE("validate checks cross-validation settings when the rank is automatic") {
  const auto obs = window_set(30, 10);
  EstimatorConfig cfg;
  cfg.band = 7;
  cfg.increment = 1;
  CHECK(validate(obs, cfg).empty());
  CHECK(cfg.candidate_ranks() == std::vector<int>{1, 2, 3, 4, 5, 6});
  cfg.cv.folds = 1;
  cfg.cv.rank_candidates = {7};
  const auto report = validate(obs, cfg);
  CHECK(has_rule(report, "K >= 2"));
  CHECK(has_rule(report, "rank candidate <= b - a"));
}

TEST_CASE("validation is pure") {
  auto obs = window_set(20, 8);
  obs.samples[1].indices.push_back(25);
  obs.samples[1].values.push_back(0.0);
  EstimatorConfig cfg;
  cfg.band = 30;
  cfg.rank = 2;
  const auto first = validate(obs, cfg);
  const auto second = validate(obs, cfg);
  REQUIRE(first.size() == second.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i].rule == second[i].rule);
    CHECK(first[i].detail == second[i].detail);
  }
}

TEST_CASE("window metadata") {
  const auto obs = window_set(30, 10);
  CHECK(obs.max_window_length() == 10);
  CHECK(obs.window_fraction() == doctest::Approx(1.0 / 3.0));
  Sample gappy{"g", {2, 5, 9}, {0, 0, 0}};
  CHECK(gappy.window_length() == 8);
  CHECK(gappy.observes(5));
  CHECK_FALSE(gappy.observes(4));
}
