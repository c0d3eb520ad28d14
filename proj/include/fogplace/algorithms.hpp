#ifndef FOGPLACE_ALGORITHMS_HPP
#define FOGPLACE_ALGORITHMS_HPP

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fogplace/model.hpp"
#include "fogplace/objectives.hpp"
#include "fogplace/operators.hpp"
#include "fogplace/pareto.hpp"
#include "fogplace/rng.hpp"

namespace fogplace {

enum class MoeadReplacement { dominance, weighted_sum };

inline const char* to_string(MoeadReplacement r) {
  return r == MoeadReplacement::dominance ? "dominance" : "weighted_sum";
}

struct AlgorithmConfig {
  int population_size = 100;  // N (number of weight vectors) for MOEA/D
  int generations = 400;
  double mutation_prob = 0.25;
  int neighborhood_size = 20;  // MOEA/D only
  MoeadReplacement moead_replacement = MoeadReplacement::dominance;
  // Scalarization used for the WSGA fitness and for per-generation best
  // selection in every algorithm; instance weights apply when unset.
  std::optional<WeightConfig> weight_config;
};

inline void validate_config(const AlgorithmConfig& config) {
  if (config.population_size < 2)
    throw std::invalid_argument("population_size must be >= 2");
  if (config.generations < 0) throw std::invalid_argument("generations must be >= 0");
  if (config.mutation_prob < 0.0 || config.mutation_prob > 1.0)
    throw std::invalid_argument("mutation_prob must be in [0,1]");
  if (config.neighborhood_size < 1)
    throw std::invalid_argument("neighborhood_size must be >= 1");
}

struct GenerationTrace {
  int generation = 0;
  double best_weighted_sum = 0.0;
  ObjectiveVector best_objectives;
  double wall_ms = 0.0;
};

struct FinalSolution {
  Placement placement;
  ObjectiveVector objectives;
};

struct RunResult {
  std::string algorithm;
  std::uint64_t seed = 0;
  std::vector<FinalSolution> final_set;
  std::vector<GenerationTrace> traces;
  double total_ms = 0.0;
};

/// Per-generation view handed to an optional observer; used by tests to
/// check archive/front invariants without touching the run loop.
struct GenerationSnapshot {
  int generation = 0;
  std::vector<ObjectiveVector> population;
  std::vector<ObjectiveVector> solution_set;  // population / first front / EP
};
using GenerationCallback = std::function<void(const GenerationSnapshot&)>;

namespace detail {

struct Individual {
  Placement placement;
  ObjectiveVector objectives;
  double weighted = 0.0;
};
using IndividualPtr = std::shared_ptr<const Individual>;

class Clock {
 public:
  Clock() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline IndividualPtr make_individual(Placement&& p, const Evaluator& eval,
                                     const WeightConfig& weights) {
  auto ind = std::make_shared<Individual>();
  ind->placement = std::move(p);
  ind->objectives = eval.evaluate(ind->placement);
  ind->weighted = weighted_sum(ind->objectives, weights);
  return ind;
}

inline std::vector<IndividualPtr> random_population(const ProblemInstance& inst, int n,
                                                    const Evaluator& eval,
                                                    const WeightConfig& weights,
                                                    RngStream& rng) {
  std::vector<IndividualPtr> pop;
  pop.reserve(n);
  for (int i = 0; i < n; ++i)
    pop.push_back(make_individual(random_placement(inst, rng), eval, weights));
  return pop;
}

inline GenerationTrace trace_of(int generation, std::span<const IndividualPtr> set,
                                double wall_ms) {
  const Individual* best = nullptr;
  for (const auto& ind : set)
    if (!best || ind->weighted < best->weighted) best = ind.get();
  GenerationTrace t;
  t.generation = generation;
  t.best_weighted_sum = best->weighted;
  t.best_objectives = best->objectives;
  t.wall_ms = wall_ms;
  return t;
}

inline std::vector<ObjectiveVector> objectives_of(std::span<const IndividualPtr> set) {
  std::vector<ObjectiveVector> out;
  out.reserve(set.size());
  for (const auto& ind : set) out.push_back(ind->objectives);
  return out;
}

inline std::vector<FinalSolution> final_set_of(std::span<const IndividualPtr> set) {
  std::vector<FinalSolution> out;
  out.reserve(set.size());
  for (const auto& ind : set) out.push_back({ind->placement, ind->objectives});
  return out;
}

/// Evaluation is pure, so a child that came out identical to an already
/// evaluated solution can share it outright. Converged populations produce
/// such clones constantly.
inline IndividualPtr adopt_or_evaluate(Placement&& p, std::initializer_list<IndividualPtr> known,
                                       const Evaluator& eval, const WeightConfig& weights) {
  for (const IndividualPtr& k : known)
    if (k && p == k->placement) return k;
  return make_individual(std::move(p), eval, weights);
}

/// Produces exactly n offspring: parents via the supplied tournament
/// comparator, single-point crossover, then mutation of both children with
/// one probability draw per pair.
template <typename BetterThan>
std::vector<IndividualPtr> make_offspring(const std::vector<IndividualPtr>& pop, int n,
                                          const ProblemInstance& inst, const Evaluator& eval,
                                          const WeightConfig& weights, double mutation_prob,
                                          BetterThan&& better, RngStream& rng) {
  std::vector<IndividualPtr> offspring;
  offspring.reserve(n);
  while (static_cast<int>(offspring.size()) < n) {
    const std::size_t f1 = binary_tournament(pop.size(), better, rng);
    const std::size_t f2 = binary_tournament(pop.size(), better, rng);
    auto [c1, c2] = crossover(pop[f1]->placement, pop[f2]->placement, inst, rng);
    if (rng.uniform01() < mutation_prob) {
      mutate(c1, inst, rng);
      mutate(c2, inst, rng);
    }
    auto i1 = adopt_or_evaluate(std::move(c1), {pop[f1], pop[f2]}, eval, weights);
    offspring.push_back(i1);
    if (static_cast<int>(offspring.size()) < n)
      offspring.push_back(adopt_or_evaluate(std::move(c2), {pop[f1], pop[f2], i1}, eval, weights));
  }
  return offspring;
}

}  // namespace detail

/// Weighted-sum genetic algorithm: scalar fitness, binary tournament,
/// elitist truncation of the parent+offspring union.
inline RunResult run_wsga(const ProblemInstance& inst, const AlgorithmConfig& config,
                          RngStream& rng, const GenerationCallback& observer = {}) {
  validate_config(config);
  const WeightConfig weights = config.weight_config.value_or(inst.weights);
  const Evaluator eval(inst);
  const int n = config.population_size;
  const detail::Clock run_clock;

  auto pop = detail::random_population(inst, n, eval, weights, rng);
  const auto by_weight = [&pop](std::size_t a, std::size_t b) {
    return pop[a]->weighted < pop[b]->weighted;
  };

  RunResult result;
  result.algorithm = "wsga";
  result.seed = rng.seed();
  result.traces.reserve(config.generations);

  for (int gen = 1; gen <= config.generations; ++gen) {
    const detail::Clock gen_clock;
    auto offspring = detail::make_offspring(pop, n, inst, eval, weights, config.mutation_prob,
                                            by_weight, rng);
    // Union keeps the parents, so the best fitness never regresses.
    offspring.insert(offspring.end(), pop.begin(), pop.end());
    std::stable_sort(offspring.begin(), offspring.end(),
                     [](const auto& a, const auto& b) { return a->weighted < b->weighted; });
    offspring.resize(n);
    pop = std::move(offspring);

    result.traces.push_back(detail::trace_of(gen, pop, gen_clock.ms()));
    if (observer)
      observer({gen, detail::objectives_of(pop), detail::objectives_of(pop)});
  }

  result.final_set = detail::final_set_of(pop);
  result.total_ms = run_clock.ms();
  return result;
}

namespace detail {

struct RankedPopulation {
  std::vector<int> rank;
  std::vector<double> crowding;
};

/// Ranks a population by non-dominated front and crowding distance.
inline RankedPopulation rank_population(const std::vector<ObjectiveVector>& objectives,
                                        const std::vector<std::vector<std::size_t>>& fronts) {
  RankedPopulation ranked;
  ranked.rank.assign(objectives.size(), 0);
  ranked.crowding.assign(objectives.size(), 0.0);
  for (std::size_t f = 0; f < fronts.size(); ++f) {
    std::vector<ObjectiveVector> front_objs;
    front_objs.reserve(fronts[f].size());
    for (std::size_t idx : fronts[f]) front_objs.push_back(objectives[idx]);
    const auto dist = crowding_distance(std::span<const ObjectiveVector>(front_objs));
    for (std::size_t k = 0; k < fronts[f].size(); ++k) {
      ranked.rank[fronts[f][k]] = static_cast<int>(f);
      ranked.crowding[fronts[f][k]] = dist[k];
    }
  }
  return ranked;
}

}  // namespace detail

/// NSGA-II: non-dominated sorting with crowding-distance ordering; the
/// returned final set is the first front of the last population.
inline RunResult run_nsga2(const ProblemInstance& inst, const AlgorithmConfig& config,
                           RngStream& rng, const GenerationCallback& observer = {}) {
  validate_config(config);
  const WeightConfig weights = config.weight_config.value_or(inst.weights);
  const Evaluator eval(inst);
  const int n = config.population_size;
  const detail::Clock run_clock;

  auto pop = detail::random_population(inst, n, eval, weights, rng);
  auto objs = detail::objectives_of(pop);
  auto ranked = detail::rank_population(
      objs, fast_nondominated_sort(std::span<const ObjectiveVector>(objs)));

  RunResult result;
  result.algorithm = "nsga2";
  result.seed = rng.seed();
  result.traces.reserve(config.generations);

  for (int gen = 1; gen <= config.generations; ++gen) {
    const detail::Clock gen_clock;
    const auto by_rank_then_crowding = [&ranked](std::size_t a, std::size_t b) {
      if (ranked.rank[a] != ranked.rank[b]) return ranked.rank[a] < ranked.rank[b];
      return ranked.crowding[a] > ranked.crowding[b];
    };
    auto united = detail::make_offspring(pop, n, inst, eval, weights, config.mutation_prob,
                                         by_rank_then_crowding, rng);
    united.insert(united.end(), pop.begin(), pop.end());

    const auto united_objs = detail::objectives_of(united);
    const auto fronts =
        fast_nondominated_sort(std::span<const ObjectiveVector>(united_objs));
    const auto united_ranked = detail::rank_population(united_objs, fronts);

    std::vector<detail::IndividualPtr> next;
    detail::RankedPopulation next_ranked;
    next.reserve(n);
    for (const auto& front : fronts) {
      if (static_cast<int>(next.size()) >= n) break;
      std::vector<std::size_t> members = front;
      if (static_cast<int>(next.size() + members.size()) > n) {
        std::stable_sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
          return united_ranked.crowding[a] > united_ranked.crowding[b];
        });
        members.resize(n - next.size());
      }
      for (std::size_t idx : members) {
        next.push_back(united[idx]);
        next_ranked.rank.push_back(united_ranked.rank[idx]);
        next_ranked.crowding.push_back(united_ranked.crowding[idx]);
      }
    }
    pop = std::move(next);
    ranked = std::move(next_ranked);

    result.traces.push_back(detail::trace_of(gen, pop, gen_clock.ms()));
    if (observer) {
      std::vector<ObjectiveVector> front1;
      for (std::size_t i = 0; i < pop.size(); ++i)
        if (ranked.rank[i] == 0) front1.push_back(pop[i]->objectives);
      observer({gen, detail::objectives_of(pop), std::move(front1)});
    }
  }

  // First front of the final population.
  const auto final_objs = detail::objectives_of(pop);
  const auto final_front =
      pareto_filter(std::span<const ObjectiveVector>(final_objs));
  std::vector<detail::IndividualPtr> front_members;
  front_members.reserve(final_front.size());
  for (std::size_t idx : final_front) front_members.push_back(pop[idx]);
  result.final_set = detail::final_set_of(front_members);
  result.total_ms = run_clock.ms();
  return result;
}

/// Simplex-lattice weight vectors for three objectives: all (i/H, j/H, k/H)
/// with i+j+k = H, where H is the smallest integer whose lattice holds at
/// least n_requested vectors. The actual count C(H+2, 2) supersedes the
/// request.
inline std::vector<std::array<double, 3>> generate_weight_vectors(int n_requested) {
  if (n_requested < 3) throw std::invalid_argument("generate_weight_vectors: need >= 3");
  int h = 1;
  while ((h + 1) * (h + 2) / 2 < n_requested) ++h;
  std::vector<std::array<double, 3>> vectors;
  vectors.reserve((h + 1) * (h + 2) / 2);
  for (int i = 0; i <= h; ++i)
    for (int j = 0; j + i <= h; ++j) {
      const int k = h - i - j;
      vectors.push_back({static_cast<double>(i) / h, static_cast<double>(j) / h,
                         static_cast<double>(k) / h});
    }
  return vectors;
}

namespace detail {

/// Inserts into the external population: rejected when dominated by (or
/// identical to) a member; otherwise evicts every member it dominates.
inline void archive_insert(std::vector<IndividualPtr>& archive, const IndividualPtr& cand) {
  for (const auto& member : archive) {
    if (dominates(member->objectives, cand->objectives)) return;
    if (member->objectives == cand->objectives && member->placement == cand->placement)
      return;  // the same solution is already archived
  }
  std::erase_if(archive, [&](const IndividualPtr& member) {
    return dominates(cand->objectives, member->objectives);
  });
  archive.push_back(cand);
}

}  // namespace detail

/// MOEA/D with neighborhoods over evenly spread weight vectors. Child
/// solutions replace dominated neighbors (or, behind the weighted_sum
/// switch, neighbors with a worse subproblem scalarization); the external
/// population collects every non-dominated offspring and is the final set.
inline RunResult run_moead(const ProblemInstance& inst, const AlgorithmConfig& config,
                           RngStream& rng, const GenerationCallback& observer = {}) {
  validate_config(config);
  const WeightConfig weights = config.weight_config.value_or(inst.weights);
  const Evaluator eval(inst);
  const detail::Clock run_clock;

  const auto lattice = generate_weight_vectors(config.population_size);
  const int n = static_cast<int>(lattice.size());
  const int t = config.neighborhood_size;
  if (t > n)
    throw std::invalid_argument("neighborhood_size " + std::to_string(t) +
                                " exceeds lattice size " + std::to_string(n));

  // B[j]: indices of the T weight vectors nearest to lattice[j], self first.
  std::vector<std::vector<int>> neighborhoods(n);
  {
    std::vector<std::pair<double, int>> by_distance(n);
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        double sq = 0.0;
        for (int c = 0; c < 3; ++c) {
          const double diff = lattice[j][c] - lattice[k][c];
          sq += diff * diff;
        }
        by_distance[k] = {sq, k};
      }
      std::sort(by_distance.begin(), by_distance.end());
      neighborhoods[j].reserve(t);
      for (int k = 0; k < t; ++k) neighborhoods[j].push_back(by_distance[k].second);
    }
  }

  // Subproblem scalarization for the weighted_sum replacement mode.
  const auto scalarized = [&](const ObjectiveVector& v, int subproblem) {
    return weights.omega[0] * lattice[subproblem][0] * v.free_resources +
           weights.omega[1] * lattice[subproblem][1] * v.service_spread +
           weights.omega[2] * lattice[subproblem][2] * v.network_latency;
  };

  auto pop = detail::random_population(inst, n, eval, weights, rng);
  std::vector<detail::IndividualPtr> archive;

  RunResult result;
  result.algorithm = "moead";
  result.seed = rng.seed();
  result.traces.reserve(config.generations);

  for (int gen = 1; gen <= config.generations; ++gen) {
    const detail::Clock gen_clock;
    std::vector<detail::IndividualPtr> offspring;
    offspring.reserve(n);
    for (int j = 0; j < n; ++j) {
      const auto& b = neighborhoods[j];
      const int k1 = b[rng.below(b.size())];
      const int k2 = b[rng.below(b.size())];
      auto [c1, c2] = crossover(pop[k1]->placement, pop[k2]->placement, inst, rng);
      if (rng.uniform01() < config.mutation_prob) {
        mutate(c1, inst, rng);
        mutate(c2, inst, rng);
      }
      auto i1 = detail::adopt_or_evaluate(std::move(c1), {pop[k1], pop[k2]}, eval, weights);
      auto i2 =
          detail::adopt_or_evaluate(std::move(c2), {pop[k1], pop[k2], i1}, eval, weights);
      // The dominant child survives; mutually non-dominated -> the first.
      auto child = dominates(i2->objectives, i1->objectives) ? std::move(i2) : std::move(i1);

      for (int k : b) {
        const bool replace =
            config.moead_replacement == MoeadReplacement::dominance
                ? dominates(child->objectives, pop[k]->objectives)
                : scalarized(child->objectives, k) < scalarized(pop[k]->objectives, k);
        if (replace) pop[k] = child;
      }
      offspring.push_back(std::move(child));
    }
    for (const auto& child : offspring) detail::archive_insert(archive, child);

    result.traces.push_back(detail::trace_of(gen, archive, gen_clock.ms()));
    if (observer)
      observer({gen, detail::objectives_of(pop), detail::objectives_of(archive)});
  }

  result.final_set = detail::final_set_of(archive);
  result.total_ms = run_clock.ms();
  return result;
}

/// Dispatch by algorithm name: one of "wsga", "nsga2", "moead".
inline RunResult run_algorithm(const std::string& name, const ProblemInstance& inst,
                               const AlgorithmConfig& config, RngStream& rng,
                               const GenerationCallback& observer = {}) {
  if (name == "wsga") return run_wsga(inst, config, rng, observer);
  if (name == "nsga2") return run_nsga2(inst, config, rng, observer);
  if (name == "moead") return run_moead(inst, config, rng, observer);
  throw std::invalid_argument("unknown algorithm '" + name +
                              "' (expected one of: wsga, nsga2, moead)");
}

inline const std::vector<std::string>& algorithm_names() {
  static const std::vector<std::string> names = {"wsga", "nsga2", "moead"};
  return names;
}

}  // namespace fogplace

#endif  // FOGPLACE_ALGORITHMS_HPP
