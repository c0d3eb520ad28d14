#ifndef FOGPLACE_OPERATORS_HPP
#define FOGPLACE_OPERATORS_HPP

#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fogplace/model.hpp"
#include "fogplace/rng.hpp"

namespace fogplace {

/// Repair operator. For each overloaded non-cloud device, removes uniformly
/// random hosted instances until the capacity constraint holds; afterwards
/// any service left with no instance at all gets its cloud cell set. Never
/// adds fog instances.
inline void mend(Placement& p, const ProblemInstance& inst, RngStream& rng) {
  const std::size_t S = p.alloc.rows();
  const std::size_t F = p.alloc.cols();
  const int cloud = inst.infra.cloud_id();

  static thread_local std::vector<long long> load;
  load.assign(F, 0);
  for (std::size_t x = 0; x < S; ++x) {
    const auto* row = p.alloc.row(x);
    const int consumption = inst.apps.services[x].consumption;
    for (std::size_t i = 0; i < F; ++i)
      if (row[i]) load[i] += consumption;
  }

  static thread_local std::vector<int> hosted;
  for (std::size_t i = 0; i < F; ++i) {
    const Device& dev = inst.infra.devices[i];
    if (dev.is_cloud() || load[i] <= dev.capacity) continue;
    hosted.clear();
    for (std::size_t x = 0; x < S; ++x)
      if (p.alloc(x, i)) hosted.push_back(static_cast<int>(x));
    long long remaining = load[i];
    while (remaining > dev.capacity) {
      const std::size_t k = rng.below(hosted.size());
      const int x = hosted[k];
      p.alloc(x, i) = 0;
      remaining -= inst.apps.services[x].consumption;
      hosted[k] = hosted.back();
      hosted.pop_back();
    }
  }
  for (std::size_t x = 0; x < S; ++x) {
    const auto* row = p.alloc.row(x);
    bool any = false;
    for (std::size_t i = 0; i < F; ++i) any |= (row[i] != 0);
    if (!any) p.alloc(x, cloud) = 1;  // cloud is the fallback host
  }
}

/// Random solution: the cloud hosts everything, each (service, fog device)
/// cell is set with probability p_init, and the result is mended.
inline Placement random_placement(const ProblemInstance& inst, RngStream& rng) {
  const std::size_t S = inst.apps.services.size();
  const std::size_t F = inst.infra.devices.size();
  const int cloud = inst.infra.cloud_id();
  Placement p(S, F);
  for (std::size_t x = 0; x < S; ++x) {
    for (std::size_t i = 0; i < F; ++i) {
      if (static_cast<int>(i) == cloud)
        p.alloc(x, i) = 1;
      else
        p.alloc(x, i) = rng.bernoulli(inst.operators.p_init) ? 1 : 0;
    }
  }
  mend(p, inst, rng);
  return p;
}

/// Raw single-point row crossover, before repair. For each row a split point
/// r in [1, |F|] is drawn; child1 takes columns [0, r) from father1 and
/// [r, |F|) from father2, child2 the opposite. Split points are returned so
/// the gene partition can be checked.
struct CrossoverResult {
  Placement child1;
  Placement child2;
  std::vector<int> split;  // one r per row
};

namespace detail {

template <typename OnSplit>
inline std::pair<Placement, Placement> crossover_rows(const Placement& father1,
                                                      const Placement& father2, RngStream& rng,
                                                      OnSplit&& on_split) {
  const std::size_t S = father1.alloc.rows();
  const std::size_t F = father1.alloc.cols();
  if (father2.alloc.rows() != S || father2.alloc.cols() != F)
    throw std::invalid_argument("crossover: parents have different dimensions");
  std::pair<Placement, Placement> children{Placement(S, F), Placement(S, F)};
  for (std::size_t x = 0; x < S; ++x) {
    const int cut = rng.uniform_int(1, static_cast<int>(F));
    on_split(x, cut);
    const auto* f1 = father1.alloc.row(x);
    const auto* f2 = father2.alloc.row(x);
    auto* c1 = children.first.alloc.row(x);
    auto* c2 = children.second.alloc.row(x);
    for (std::size_t i = 0; i < F; ++i) {
      const bool first_piece = static_cast<int>(i) < cut;
      c1[i] = first_piece ? f1[i] : f2[i];
      c2[i] = first_piece ? f2[i] : f1[i];
    }
  }
  return children;
}

}  // namespace detail

inline CrossoverResult crossover_raw(const Placement& father1, const Placement& father2,
                                     RngStream& rng) {
  CrossoverResult r;
  r.split.resize(father1.alloc.rows());
  auto children = detail::crossover_rows(father1, father2, rng,
                                         [&](std::size_t x, int cut) { r.split[x] = cut; });
  r.child1 = std::move(children.first);
  r.child2 = std::move(children.second);
  return r;
}

/// Single-point row crossover followed by repair of both children.
inline std::pair<Placement, Placement> crossover(const Placement& father1,
                                                 const Placement& father2,
                                                 const ProblemInstance& inst, RngStream& rng) {
  auto children = detail::crossover_rows(father1, father2, rng, [](std::size_t, int) {});
  mend(children.first, inst, rng);
  mend(children.second, inst, rng);
  return children;
}

/// Mutation: each service gains, with probability p_grow, one instance at a
/// uniformly random device that does not host it yet. Pre-repair.
inline void replica_growth(Placement& p, const ProblemInstance& inst, RngStream& rng) {
  const std::size_t S = p.alloc.rows();
  const std::size_t F = p.alloc.cols();
  static thread_local std::vector<int> absent;
  for (std::size_t x = 0; x < S; ++x) {
    if (!rng.bernoulli(inst.operators.p_grow)) continue;
    absent.clear();
    for (std::size_t i = 0; i < F; ++i)
      if (!p.alloc(x, i)) absent.push_back(static_cast<int>(i));
    if (absent.empty()) continue;  // already everywhere
    p.alloc(x, absent[rng.below(absent.size())]) = 1;
  }
}

/// Reorders the rows of the allocation matrix by the given permutation:
/// row x of the result is row perm[x] of the input.
inline void shuffle_rows(Placement& p, const std::vector<std::size_t>& perm) {
  const std::size_t S = p.alloc.rows();
  if (perm.size() != S) throw std::invalid_argument("shuffle_rows: permutation size mismatch");
  BoolMatrix out(S, p.alloc.cols());
  for (std::size_t x = 0; x < S; ++x) {
    const auto* src = p.alloc.row(perm[x]);
    auto* dst = out.row(x);
    for (std::size_t i = 0; i < p.alloc.cols(); ++i) dst[i] = src[i];
  }
  p.alloc = std::move(out);
}

/// Mutation: applies a uniformly random permutation to the rows, swapping
/// the allocation plans of the services. Pre-repair.
inline void service_shuffle(Placement& p, RngStream& rng) {
  const std::size_t S = p.alloc.rows();
  std::vector<std::size_t> perm(S);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = S; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
  shuffle_rows(p, perm);
}

/// Mutation: each service is selected with probability p_spread and placed
/// on every device. Pre-repair; heavily disruptive by design of the model.
inline void spread_to_fog(Placement& p, const ProblemInstance& inst, RngStream& rng) {
  const std::size_t S = p.alloc.rows();
  const std::size_t F = p.alloc.cols();
  for (std::size_t x = 0; x < S; ++x) {
    if (!rng.bernoulli(inst.operators.p_spread)) continue;
    auto* row = p.alloc.row(x);
    for (std::size_t i = 0; i < F; ++i) row[i] = 1;
  }
}

/// Applies one of the three mutations, chosen uniformly, then repairs.
inline void mutate(Placement& p, const ProblemInstance& inst, RngStream& rng) {
  switch (rng.below(3)) {
    case 0: replica_growth(p, inst, rng); break;
    case 1: service_shuffle(p, rng); break;
    default: spread_to_fog(p, inst, rng); break;
  }
  mend(p, inst, rng);
}

/// Deterministic binary tournament: samples two members uniformly with
/// replacement and returns the index of the better one; on a tie the first
/// sample wins. better_than must be a strict comparison of member indices.
template <typename BetterThan>
std::size_t binary_tournament(std::size_t population_size, BetterThan&& better_than,
                              RngStream& rng) {
  if (population_size == 0) throw std::invalid_argument("binary_tournament: empty population");
  const std::size_t first = rng.below(population_size);
  const std::size_t second = rng.below(population_size);
  return better_than(second, first) ? second : first;
}

/// Tournament over concrete members with a strict better-than on values.
template <typename T, typename BetterThan>
const T& binary_tournament(std::span<const T> population, BetterThan&& better_than,
                           RngStream& rng) {
  const std::size_t idx = binary_tournament(
      population.size(),
      [&](std::size_t a, std::size_t b) { return better_than(population[a], population[b]); },
      rng);
  return population[idx];
}

}  // namespace fogplace

#endif  // FOGPLACE_OPERATORS_HPP
