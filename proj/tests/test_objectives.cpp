#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <vector>

#include "fogplace/objectives.hpp"
#include "fogplace/rng.hpp"
#include "support/builders.hpp"
#include "support/oracles.hpp"

using namespace fogplace;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Cloud at device 0 plus two fog devices with capacities 4 and 6.
ProblemInstance caps46_instance() {
  testing::InstanceSpec spec;
  spec.capacities = {-1, 4, 6};
  spec.links = {{0, 1, 100.0}, {1, 2, 50.0}};
  spec.gateways = {2};
  spec.consumptions = {2, 3};
  spec.requests = {{2, 0}};
  return testing::build_instance(spec);
}

Placement cloud_only(const ProblemInstance& inst) {
  Placement p(inst.apps.service_count(), inst.infra.device_count());
  const int cloud = inst.infra.cloud_id();
  for (int x = 0; x < inst.apps.service_count(); ++x) p.alloc(x, cloud) = 1;
  return p;
}

}  // namespace

TEST_CASE("free_resources: cloud-only placement leaves everything free") {
  const auto inst = caps46_instance();
  CHECK(free_resources(cloud_only(inst), inst.infra, inst.apps.services) == 1.0);
}

TEST_CASE("free_resources: filling every device to capacity gives zero") {
  testing::InstanceSpec spec;
  spec.capacities = {-1, 2, 3};
  spec.links = {{0, 1, 100.0}, {1, 2, 50.0}};
  spec.gateways = {2};
  spec.consumptions = {2, 3};
  spec.requests = {{2, 0}};
  const auto inst = testing::build_instance(spec);
  Placement p = cloud_only(inst);
  p.alloc(0, 1) = 1;  // load 2 of 2
  p.alloc(1, 2) = 1;  // load 3 of 3
  CHECK(free_resources(p, inst.infra, inst.apps.services) == 0.0);
}

TEST_CASE("free_resources: caps {4,6} hosting consumptions {2,3} leaves half") {
  const auto inst = caps46_instance();
  Placement p = cloud_only(inst);
  p.alloc(0, 1) = 1;  // consumption 2 on capacity-4 device
  p.alloc(1, 2) = 1;  // consumption 3 on capacity-6 device
  CHECK(free_resources(p, inst.infra, inst.apps.services) == 0.5);
}

TEST_CASE("free_resources rejects a degenerate zero-capacity instance") {
  auto inst = caps46_instance();
  for (auto& d : inst.infra.devices)
    if (!d.is_cloud()) d.capacity = 0;
  CHECK_THROWS(free_resources(cloud_only(inst), inst.infra, inst.apps.services));
}

TEST_CASE("service_spread: two instances per service has zero deviation") {
  const auto inst = caps46_instance();
  Placement p(2, 3);
  p.alloc(0, 0) = p.alloc(0, 1) = 1;
  p.alloc(1, 1) = p.alloc(1, 2) = 1;
  CHECK(service_spread(p, inst.infra.distances) == 0.0);
}

TEST_CASE("service_spread: pairwise distances {1,2,3} give CV sqrt(2/3)/2") {
  // Single service on three devices with the distance triangle {1,2,3}.
  testing::InstanceSpec spec;
  spec.capacities = {-1, 4, 4};
  spec.links = {{0, 1, 1.0}, {1, 2, 2.0}, {0, 2, 3.0}};
  spec.gateways = {2};
  spec.consumptions = {1};
  spec.requests = {{2, 0}};
  const auto inst = testing::build_instance(spec);
  REQUIRE(inst.infra.distances(0, 1) == 1.0);
  REQUIRE(inst.infra.distances(1, 2) == 2.0);
  REQUIRE(inst.infra.distances(0, 2) == 3.0);
  Placement p(1, 3);
  p.alloc(0, 0) = p.alloc(0, 1) = p.alloc(0, 2) = 1;
  const double expected = std::sqrt(2.0 / 3.0) / 2.0;  // sigma/mean with mean 2
  CHECK_THAT(service_spread(p, inst.infra.distances), WithinRel(expected, 1e-12));
  CHECK_THAT(expected, WithinAbs(0.40825, 1e-5));
  CHECK_THAT(oracle::service_spread(p, inst), WithinRel(expected, 1e-12));
}

TEST_CASE("service_spread: a single-instance service contributes zero") {
  const auto inst = caps46_instance();
  Placement p(2, 3);
  p.alloc(0, 0) = 1;                  // one instance -> no pairs
  p.alloc(1, 0) = p.alloc(1, 2) = 1;  // the other service has a real pair
  const double d02 = inst.infra.distances(0, 2);
  REQUIRE(d02 > 0.0);
  // Only service 1 contributes; one pair has sigma 0, so CV 0. Average 0.
  CHECK(service_spread(p, inst.infra.distances) == 0.0);
}

TEST_CASE("network_latency: hand-evaluated two-device chain") {
  // d(0,1) = 100; s0 on f0 consumes s1 hosted on f1; the gateway at f0
  // requests the service hosted only on f1.
  testing::InstanceSpec spec;
  spec.capacities = {4, 4, -1};
  spec.links = {{0, 1, 100.0}, {1, 2, 400.0}};
  spec.gateways = {0};
  spec.consumptions = {1, 1};
  spec.consumption_edges = {{0, 1}};
  spec.requests = {{0, 1}};
  auto inst = testing::build_instance(spec);
  Placement p(2, 3);
  p.alloc(0, 0) = 1;
  p.alloc(1, 1) = 1;
  // d_cons(s0) = 100, s1 consumes nothing, d_req(gw0) = 100, |S|+|GW| = 3.
  const double expected = (100.0 + 100.0) / 3.0;
  const double got = network_latency(p, inst.infra.distances, inst.apps.consumption,
                                     inst.apps.requests, inst.infra.gateway_ids());
  CHECK_THAT(got, WithinRel(expected, 1e-12));
  CHECK_THAT(oracle::network_latency(p, inst), WithinRel(expected, 1e-12));
}

TEST_CASE("network_latency: gateway self-exclusion versus the relaxed switch") {
  testing::InstanceSpec spec;
  spec.capacities = {4, 4, -1};
  spec.links = {{0, 1, 100.0}, {1, 2, 400.0}};
  spec.gateways = {0};
  spec.consumptions = {1};
  spec.requests = {{0, 0}};
  auto inst = testing::build_instance(spec);
  Placement p(1, 3);
  p.alloc(0, 0) = 1;  // hosted on the requesting gateway itself
  p.alloc(0, 1) = 1;  // and on the neighbor

  const double strict = network_latency(p, inst.infra.distances, inst.apps.consumption,
                                        inst.apps.requests, inst.infra.gateway_ids(), false);
  CHECK_THAT(strict, WithinRel(100.0 / 2.0, 1e-12));  // nearest *other* host

  const double relaxed = network_latency(p, inst.infra.distances, inst.apps.consumption,
                                         inst.apps.requests, inst.infra.gateway_ids(), true);
  CHECK(relaxed == 0.0);  // self-host counts as distance zero

  inst.gateway_self_host_zero = false;
  CHECK_THAT(oracle::network_latency(p, inst), WithinRel(strict, 1e-12));
  inst.gateway_self_host_zero = true;
  CHECK(oracle::network_latency(p, inst) == relaxed);
}

TEST_CASE("network_latency: co-located consumers contribute zero") {
  RngStream rng(17);
  const auto inst = testing::random_small_instance(rng);
  const int S = inst.apps.service_count();
  const int F = inst.infra.device_count();
  // Everything replicated everywhere: every min distance is 0 except the
  // gateway self-exclusion terms, which reach the nearest other device.
  Placement p(S, F);
  for (int x = 0; x < S; ++x)
    for (int i = 0; i < F; ++i) p.alloc(x, i) = 1;
  const auto gateways = inst.infra.gateway_ids();
  double expected = 0.0;
  for (std::size_t g = 0; g < gateways.size(); ++g) {
    int requested = 0;
    for (int x = 0; x < S; ++x) requested += inst.apps.requests(g, x);
    if (requested == 0) continue;
    double nearest = std::numeric_limits<double>::infinity();
    for (int i = 0; i < F; ++i)
      if (i != gateways[g]) nearest = std::min(nearest, inst.infra.distances(gateways[g], i));
    expected += nearest;  // same for every requested service
  }
  expected /= static_cast<double>(S + static_cast<int>(gateways.size()));
  const double got = network_latency(p, inst.infra.distances, inst.apps.consumption,
                                     inst.apps.requests, gateways);
  CHECK_THAT(got, WithinAbs(expected, 1e-12));
}

TEST_CASE("weighted_sum examples") {
  WeightConfig w = WeightConfig::uniform(200.0);
  CHECK(weighted_sum({0.0, 0.0, 0.0}, w) == 0.0);
  CHECK_THAT(weighted_sum({0.0, 0.3, 60.0}, w), WithinRel(0.2, 1e-12));
  CHECK_THAT(weighted_sum({1.0, 1.0, 200.0}, w), WithinRel(1.0, 1e-12));

  WeightConfig bad = w;
  bad.latency_max = 0.0;
  CHECK_THROWS(weighted_sum({0.1, 0.1, 10.0}, bad));
}

TEST_CASE("weighted_sum is not clamped above one") {
  WeightConfig w = WeightConfig::uniform(100.0);
  CHECK(weighted_sum({1.0, 1.0, 300.0}, w) > 1.0);
}

TEST_CASE("free_resources strictly decreases when adding a fog instance") {
  RngStream rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const auto inst = testing::random_small_instance(rng);
    Placement p = testing::random_feasible_placement(inst, rng);
    const double before = free_resources(p, inst.infra, inst.apps.services);
    const int cloud = inst.infra.cloud_id();
    for (std::size_t x = 0; x < p.alloc.rows(); ++x)
      for (std::size_t i = 0; i < p.alloc.cols(); ++i) {
        if (p.alloc(x, i) || static_cast<int>(i) == cloud) continue;
        Placement q = p;
        q.alloc(x, i) = 1;
        CHECK(free_resources(q, inst.infra, inst.apps.services) < before);
      }
  }
}

TEST_CASE("service_spread is invariant under distance-preserving relabeling") {
  RngStream rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    const auto inst = testing::random_small_instance(rng);
    const int F = inst.infra.device_count();
    const int S = inst.apps.service_count();
    const Placement p = testing::random_feasible_placement(inst, rng);

    std::vector<int> perm(F);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = F; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);

    Matrix<double> permuted(F, F, 0.0);
    for (int i = 0; i < F; ++i)
      for (int j = 0; j < F; ++j) permuted(perm[i], perm[j]) = inst.infra.distances(i, j);
    Placement q(S, F);
    for (int x = 0; x < S; ++x)
      for (int i = 0; i < F; ++i) q.alloc(x, perm[i]) = p.alloc(x, i);

    CHECK_THAT(service_spread(q, permuted),
               WithinAbs(service_spread(p, inst.infra.distances), 1e-12));
  }
}

TEST_CASE("adding a far replica of a sink service keeps latency unchanged") {
  // Line 0-1-2-3 with the sink service replicated near its consumer; a new
  // replica farther from every consumer and gateway must not change minima.
  testing::InstanceSpec spec;
  spec.capacities = {4, 4, 4, -1};
  spec.links = {{0, 1, 10.0}, {1, 2, 10.0}, {2, 3, 10.0}};
  spec.gateways = {0};
  spec.consumptions = {1, 1};
  spec.consumption_edges = {{0, 1}};  // s0 consumes s1; s1 is a sink
  spec.requests = {{0, 1}};
  const auto inst = testing::build_instance(spec);
  Placement p(2, 4);
  p.alloc(0, 0) = 1;
  p.alloc(1, 0) = 1;  // co-located with its consumer; self-excluded for the gateway
  p.alloc(1, 1) = 1;  // nearest other host for the gateway term
  const auto gateways = inst.infra.gateway_ids();
  const double before = network_latency(p, inst.infra.distances, inst.apps.consumption,
                                        inst.apps.requests, gateways);
  Placement q = p;
  q.alloc(1, 2) = 1;  // farther than every existing replica from f0
  const double after = network_latency(q, inst.infra.distances, inst.apps.consumption,
                                       inst.apps.requests, gateways);
  CHECK_THAT(after, WithinAbs(before, 1e-12));
}

TEST_CASE("evaluate matches the literal-formula oracle on random placements") {
  RngStream rng(31);
  int checked = 0;
  while (checked < 1000) {
    const auto inst = testing::random_small_instance(rng);
    const Evaluator eval(inst);
    for (int k = 0; k < 10; ++k, ++checked) {
      const Placement p = testing::random_feasible_placement(inst, rng);
      const ObjectiveVector got = eval.evaluate(p);
      const ObjectiveVector want = oracle::evaluate(p, inst);
      CHECK_THAT(got.free_resources, WithinRel(want.free_resources, 1e-9));
      CHECK_THAT(got.service_spread,
                 WithinRel(want.service_spread, 1e-9) || WithinAbs(0.0, 1e-15));
      CHECK_THAT(got.network_latency,
                 WithinRel(want.network_latency, 1e-9) || WithinAbs(0.0, 1e-15));
      // The composed entry point agrees with the free functions.
      const ObjectiveVector composed = evaluate(p, inst);
      CHECK(composed == got);
    }
  }
}

TEST_CASE("weighted argmin is invariant under common scaling of omega*theta") {
  RngStream rng(37);
  const auto inst = testing::random_small_instance(rng);
  const Evaluator eval(inst);
  std::vector<ObjectiveVector> set;
  for (int k = 0; k < 20; ++k)
    set.push_back(eval.evaluate(testing::random_feasible_placement(inst, rng)));

  WeightConfig scaled = inst.weights;
  for (int i = 0; i < 3; ++i) scaled.omega[i] *= 5.0;

  std::size_t best = 0, best_scaled = 0;
  for (std::size_t i = 1; i < set.size(); ++i) {
    if (weighted_sum(set[i], inst.weights) < weighted_sum(set[best], inst.weights)) best = i;
    if (weighted_sum(set[i], scaled) < weighted_sum(set[best_scaled], scaled)) best_scaled = i;
  }
  CHECK(best == best_scaled);
}
