#include <catch2/catch_amalgamated.hpp>

#include <span>
#include <vector>

#include "fogplace/algorithms.hpp"
#include "fogplace/analysis.hpp"
#include "support/builders.hpp"

using namespace fogplace;

TEST_CASE("select_best returns the singleton and honors ties by order") {
  const WeightConfig w = WeightConfig::uniform(100.0);
  const std::vector<ObjectiveVector> one = {{0.4, 0.2, 10.0}};
  CHECK(select_best(one, w) == 0);

  const std::vector<ObjectiveVector> two = {{0.2, 0.2, 20.0}, {0.3, 0.3, 30.0}};
  CHECK(select_best(two, w) == 0);

  const std::vector<ObjectiveVector> tie = {{0.2, 0.2, 20.0}, {0.2, 0.2, 20.0}};
  CHECK(select_best(tie, w) == 0);

  const std::vector<ObjectiveVector> empty;
  CHECK_THROWS(select_best(empty, w));
}

TEST_CASE("select_best is invariant under scaling all omega*theta by 5") {
  WeightConfig w = WeightConfig::uniform(250.0);
  std::vector<ObjectiveVector> set;
  RngStream rng(61);
  for (int i = 0; i < 30; ++i)
    set.push_back({rng.uniform01(), rng.uniform01(), rng.uniform01() * 250.0});
  WeightConfig scaled = w;
  for (int i = 0; i < 3; ++i) scaled.omega[i] *= 5.0;
  CHECK(select_best(set, w) == select_best(set, scaled));
}

TEST_CASE("solution spread volume of degenerate sets is zero") {
  const std::vector<ObjectiveVector> single = {{0.1, 0.5, 30.0}};
  CHECK(solution_spread_volume(single) == 0.0);
  const std::vector<ObjectiveVector> identical = {{0.1, 0.5, 30.0}, {0.1, 0.5, 30.0}};
  CHECK(solution_spread_volume(identical) == 0.0);
}

TEST_CASE("solution spread volume multiplies latency and spread extents") {
  const std::vector<ObjectiveVector> set = {{0.0, 0.55, 30.0}, {0.0, 0.60, 35.0}};
  CHECK_THAT(solution_spread_volume(set), Catch::Matchers::WithinRel(5.0 * 0.05, 1e-12));
  // The free-resources axis only participates behind the flag.
  const std::vector<ObjectiveVector> spread3 = {{0.1, 0.55, 30.0}, {0.3, 0.60, 35.0}};
  CHECK_THAT(solution_spread_volume(spread3, true),
             Catch::Matchers::WithinRel(5.0 * 0.05 * 0.2, 1e-12));
}

TEST_CASE("volume is invariant under duplicating set members") {
  std::vector<ObjectiveVector> set = {{0.0, 0.5, 20.0}, {0.1, 0.7, 45.0}, {0.2, 0.6, 30.0}};
  const double base = solution_spread_volume(set);
  set.push_back(set[1]);
  set.push_back(set[0]);
  CHECK(solution_spread_volume(set) == base);
}

TEST_CASE("pareto_filter examples") {
  const std::vector<ObjectiveVector> one = {{1, 1, 1}};
  CHECK(pareto_filter(std::span<const ObjectiveVector>(one)).size() == 1);
  const std::vector<ObjectiveVector> two = {{1, 1, 1}, {2, 2, 2}};
  const auto front = pareto_filter(std::span<const ObjectiveVector>(two));
  REQUIRE(front.size() == 1);
  CHECK(front[0] == 0);
}

TEST_CASE("build_report summarizes runs and is reproducible") {
  const auto inst = testing::micro_instance();
  AlgorithmConfig config;
  config.population_size = 8;
  config.generations = 10;
  config.neighborhood_size = 3;

  std::vector<RunResult> runs;
  for (const auto& name : algorithm_names()) {
    RngStream rng(3);
    runs.push_back(run_algorithm(name, inst, config, rng));
  }
  const auto report = build_report(runs, inst.weights, inst.name);
  REQUIRE(report.rows.size() == 3);
  for (const auto& row : report.rows) {
    CHECK(row.volume >= 0.0);
    CHECK(row.total_ms > 0.0);
    CHECK(row.mean_gen_ms > 0.0);
    CHECK(row.best_weighted_sum > 0.0);
  }
  // Rows are sorted by algorithm name.
  CHECK(report.rows[0].algorithm == "moead");
  CHECK(report.rows[1].algorithm == "nsga2");
  CHECK(report.rows[2].algorithm == "wsga");

  // Regeneration from the same runs gives identical metric values.
  const auto again = build_report(runs, inst.weights, inst.name);
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    CHECK(report.rows[i].best_weighted_sum == again.rows[i].best_weighted_sum);
    CHECK(report.rows[i].volume == again.rows[i].volume);
  }

  const auto aggregates = aggregate_by_algorithm(report);
  REQUIRE(aggregates.size() == 3);
  for (const auto& a : aggregates) CHECK(a.runs == 1);

  const std::vector<RunResult> none;
  CHECK_THROWS(build_report(none, inst.weights, inst.name));
}
