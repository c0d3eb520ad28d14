#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <span>
#include <vector>

#include "fogplace/algorithms.hpp"
#include "fogplace/analysis.hpp"
#include "support/builders.hpp"
#include "support/oracles.hpp"

using namespace fogplace;

namespace {

AlgorithmConfig quick_config(int pop, int gens) {
  AlgorithmConfig c;
  c.population_size = pop;
  c.generations = gens;
  c.neighborhood_size = 5;
  return c;
}

std::vector<ObjectiveVector> oracle_front_vectors(const ProblemInstance& inst) {
  const auto placements = oracle::enumerate_feasible(inst);
  std::vector<ObjectiveVector> all;
  all.reserve(placements.size());
  for (const auto& p : placements) all.push_back(oracle::evaluate(p, inst));
  std::vector<ObjectiveVector> front;
  for (std::size_t i : oracle::pareto_front(all)) front.push_back(all[i]);
  return front;
}

bool near_member(const std::vector<ObjectiveVector>& set, const ObjectiveVector& v,
                 double tol = 1e-9) {
  for (const auto& m : set) {
    const bool close = std::abs(m.free_resources - v.free_resources) <= tol &&
                       std::abs(m.service_spread - v.service_spread) <=
                           tol * std::max(1.0, std::abs(m.service_spread)) &&
                       std::abs(m.network_latency - v.network_latency) <=
                           tol * std::max(1.0, std::abs(m.network_latency));
    if (close) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("zero generations returns the mended random initial population") {
  const auto inst = testing::micro_instance();
  RngStream rng(1);
  const auto result = run_wsga(inst, quick_config(8, 0), rng);
  CHECK(result.traces.empty());
  CHECK(result.final_set.size() == 8);
  for (const auto& s : result.final_set) {
    CHECK(is_feasible(s.placement, inst.infra, inst.apps.services));
    CHECK(every_service_placed(s.placement));
  }
}

TEST_CASE("identical initial population with no mutation stays fixed") {
  auto inst = testing::micro_instance();
  inst.operators.p_init = 0.0;  // init collapses to the cloud-only placement
  AlgorithmConfig config = quick_config(6, 10);
  config.mutation_prob = 0.0;
  RngStream rng(2);
  const auto result = run_wsga(inst, config, rng);

  Placement cloud_only(inst.apps.service_count(), inst.infra.device_count());
  for (int x = 0; x < inst.apps.service_count(); ++x)
    cloud_only.alloc(x, inst.infra.cloud_id()) = 1;
  for (const auto& s : result.final_set) CHECK(s.placement == cloud_only);
  for (std::size_t g = 1; g < result.traces.size(); ++g)
    CHECK(result.traces[g].best_weighted_sum == result.traces[0].best_weighted_sum);
}

TEST_CASE("WSGA best weighted sum never regresses") {
  const auto inst = testing::micro_instance();
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    RngStream rng(seed);
    const auto result = run_wsga(inst, quick_config(12, 40), rng);
    for (std::size_t g = 1; g < result.traces.size(); ++g)
      CHECK(result.traces[g].best_weighted_sum <= result.traces[g - 1].best_weighted_sum);
  }
}

TEST_CASE("WSGA lands within 5% of the exhaustive optimum") {
  const auto inst = testing::micro_instance();
  const auto placements = oracle::enumerate_feasible(inst);
  REQUIRE(!placements.empty());
  double optimum = std::numeric_limits<double>::infinity();
  for (const auto& p : placements)
    optimum = std::min(optimum, weighted_sum(oracle::evaluate(p, inst), inst.weights));

  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    RngStream rng(seed);
    const auto result = run_wsga(inst, quick_config(20, 100), rng);
    const double best = result.traces.back().best_weighted_sum;
    CHECK(best <= optimum * 1.05 + 1e-12);
    CHECK(best >= optimum - 1e-9);  // cannot beat the true optimum
  }
}

TEST_CASE("traces carry one entry per generation with positive wall time") {
  const auto inst = testing::micro_instance();
  RngStream rng(3);
  const auto result = run_nsga2(inst, quick_config(8, 17), rng);
  REQUIRE(result.traces.size() == 17);
  for (std::size_t g = 0; g < result.traces.size(); ++g) {
    CHECK(result.traces[g].generation == static_cast<int>(g) + 1);
    CHECK(result.traces[g].wall_ms > 0.0);
  }
  CHECK(result.total_ms > 0.0);
}

TEST_CASE("NSGA-II final front is mutually non-dominated and inside the true front") {
  const auto inst = testing::micro_instance();
  const auto true_front = oracle_front_vectors(inst);
  REQUIRE(!true_front.empty());

  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    RngStream rng(seed);
    const auto result = run_nsga2(inst, quick_config(40, 200), rng);
    REQUIRE(!result.final_set.empty());
    for (std::size_t i = 0; i < result.final_set.size(); ++i)
      for (std::size_t j = 0; j < result.final_set.size(); ++j)
        if (i != j)
          CHECK_FALSE(
              dominates(result.final_set[i].objectives, result.final_set[j].objectives));
    for (const auto& s : result.final_set) {
      CHECK(near_member(true_front, oracle::evaluate(s.placement, inst)));
      CHECK(is_feasible(s.placement, inst.infra, inst.apps.services));
    }
  }
}

TEST_CASE("NSGA-II is deterministic for a fixed seed") {
  const auto inst = testing::micro_instance();
  RngStream a(9), b(9);
  const auto r1 = run_nsga2(inst, quick_config(10, 25), a);
  const auto r2 = run_nsga2(inst, quick_config(10, 25), b);
  REQUIRE(r1.traces.size() == r2.traces.size());
  for (std::size_t g = 0; g < r1.traces.size(); ++g) {
    CHECK(r1.traces[g].best_weighted_sum == r2.traces[g].best_weighted_sum);
    CHECK(r1.traces[g].best_objectives == r2.traces[g].best_objectives);
  }
  REQUIRE(r1.final_set.size() == r2.final_set.size());
  for (std::size_t i = 0; i < r1.final_set.size(); ++i)
    CHECK(r1.final_set[i].placement == r2.final_set[i].placement);
}

TEST_CASE("front-1 hypervolume never regresses while the front fits") {
  // Elitism guarantees a non-decreasing first-front hypervolume whenever the
  // union's first front fits into the next population. When it overflows,
  // crowding truncation may drop interior contributors, so those generations
  // are excluded (detectable as front size == population size).
  const auto inst = testing::micro_instance();
  std::vector<double> hv;
  std::vector<std::size_t> front_size;
  const GenerationCallback observer = [&](const GenerationSnapshot& snap) {
    hv.push_back(oracle::hypervolume_3d(snap.solution_set, 1.1, 5.0, 2000.0));
    front_size.push_back(snap.solution_set.size());
  };
  RngStream rng(10);
  const int pop = 60;
  run_nsga2(inst, quick_config(pop, 60), rng, observer);
  REQUIRE(hv.size() == 60);
  int checked = 0;
  for (std::size_t g = 1; g < hv.size(); ++g) {
    if (front_size[g] == static_cast<std::size_t>(pop)) continue;
    CHECK(hv[g] >= hv[g - 1] - 1e-9);
    ++checked;
  }
  CHECK(checked > 0);
  // Net progress over the whole run for this fixed seed.
  CHECK(hv.back() >= hv.front() - 1e-9);
}

TEST_CASE("weight vectors: three corners for a request of three") {
  const auto w = generate_weight_vectors(3);
  REQUIRE(w.size() == 3);
  std::set<std::array<double, 3>> set(w.begin(), w.end());
  CHECK(set.count({1.0, 0.0, 0.0}) == 1);
  CHECK(set.count({0.0, 1.0, 0.0}) == 1);
  CHECK(set.count({0.0, 0.0, 1.0}) == 1);
}

TEST_CASE("weight vectors: request of 100 snaps to the 105-point lattice") {
  const auto w = generate_weight_vectors(100);
  CHECK(w.size() == 105);  // H = 13
  for (const auto& v : w) {
    CHECK(v[0] >= 0.0);
    CHECK(v[1] >= 0.0);
    CHECK(v[2] >= 0.0);
    CHECK_THAT(v[0] + v[1] + v[2], Catch::Matchers::WithinAbs(1.0, 1e-12));
  }
  CHECK_THROWS(generate_weight_vectors(2));
}

TEST_CASE("weight lattice size is minimal for the request") {
  for (int n : {3, 4, 6, 7, 10, 45, 100, 105, 106}) {
    const auto w = generate_weight_vectors(n);
    const auto count = static_cast<int>(w.size());
    CHECK(count >= n);
    // One step smaller lattice must not suffice.
    int h = 1;
    while ((h + 1) * (h + 2) / 2 < count) ++h;
    CHECK((h) * (h + 1) / 2 < n);
  }
}

TEST_CASE("MOEA/D external population stays mutually non-dominated") {
  const auto inst = testing::micro_instance();
  std::vector<std::vector<ObjectiveVector>> snapshots;
  const GenerationCallback observer = [&](const GenerationSnapshot& snap) {
    snapshots.push_back(snap.solution_set);
  };
  AlgorithmConfig config = quick_config(10, 40);
  RngStream rng(11);
  const auto result = run_moead(inst, config, rng, observer);

  for (const auto& ep : snapshots)
    for (std::size_t i = 0; i < ep.size(); ++i)
      for (std::size_t j = 0; j < ep.size(); ++j)
        if (i != j) CHECK_FALSE(dominates(ep[i], ep[j]));

  // No member may be dominated by a previously discarded member.
  std::vector<ObjectiveVector> discarded;
  for (std::size_t g = 1; g < snapshots.size(); ++g) {
    for (const auto& old : snapshots[g - 1]) {
      const bool still_present =
          std::any_of(snapshots[g].begin(), snapshots[g].end(),
                      [&](const ObjectiveVector& v) { return v == old; });
      if (!still_present) discarded.push_back(old);
    }
  }
  for (const auto& member : snapshots.back())
    for (const auto& old : discarded) CHECK_FALSE(dominates(old, member));

  CHECK(!result.final_set.empty());
}

TEST_CASE("MOEA/D final set lies inside the exhaustive Pareto front") {
  const auto inst = testing::micro_instance();
  const auto true_front = oracle_front_vectors(inst);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    AlgorithmConfig config;  // stock lattice, T = 20
    config.generations = 200;
    RngStream rng(seed);
    const auto result = run_moead(inst, config, rng);
    for (const auto& s : result.final_set)
      CHECK(near_member(true_front, oracle::evaluate(s.placement, inst)));
  }
}

TEST_CASE("MOEA/D accepts the fully shared neighborhood T = N") {
  const auto inst = testing::micro_instance();
  AlgorithmConfig config = quick_config(10, 5);
  const int lattice_size = static_cast<int>(generate_weight_vectors(10).size());
  config.neighborhood_size = lattice_size;
  RngStream rng(13);
  const auto result = run_moead(inst, config, rng);
  CHECK(result.traces.size() == 5);

  config.neighborhood_size = lattice_size + 1;
  RngStream rng2(13);
  CHECK_THROWS(run_moead(inst, config, rng2));
}

TEST_CASE("MOEA/D honors the weighted_sum replacement switch") {
  const auto inst = testing::micro_instance();
  AlgorithmConfig config = quick_config(10, 30);
  config.moead_replacement = MoeadReplacement::weighted_sum;
  RngStream rng(14);
  const auto result = run_moead(inst, config, rng);
  CHECK(!result.final_set.empty());
  for (std::size_t i = 0; i < result.final_set.size(); ++i)
    for (std::size_t j = 0; j < result.final_set.size(); ++j)
      if (i != j)
        CHECK_FALSE(dominates(result.final_set[i].objectives, result.final_set[j].objectives));
}

TEST_CASE("config validation rejects out-of-range parameters") {
  const auto inst = testing::micro_instance();
  RngStream rng(15);
  AlgorithmConfig config = quick_config(1, 5);
  CHECK_THROWS(run_wsga(inst, config, rng));
  config = quick_config(8, 5);
  config.mutation_prob = 1.5;
  CHECK_THROWS(run_nsga2(inst, config, rng));
  config = quick_config(8, -1);
  CHECK_THROWS(run_wsga(inst, config, rng));
}

TEST_CASE("all three optimizers emit feasible, fully placed solutions") {
  RngStream seed_rng(16);
  const auto inst = testing::micro_instance();
  for (const auto& name : algorithm_names()) {
    RngStream rng(seed_rng.next_u64());
    const auto result = run_algorithm(name, inst, quick_config(10, 20), rng);
    for (const auto& s : result.final_set) {
      CHECK(is_feasible(s.placement, inst.infra, inst.apps.services));
      CHECK(every_service_placed(s.placement));
    }
  }
  RngStream rng(1);
  CHECK_THROWS_WITH(run_algorithm("annealing", inst, quick_config(8, 1), rng),
                    Catch::Matchers::ContainsSubstring("wsga, nsga2, moead"));
}
