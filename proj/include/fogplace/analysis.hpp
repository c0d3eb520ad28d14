#ifndef FOGPLACE_ANALYSIS_HPP
#define FOGPLACE_ANALYSIS_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fogplace/algorithms.hpp"
#include "fogplace/format.hpp"
#include "fogplace/objectives.hpp"
#include "fogplace/pareto.hpp"

namespace fogplace {

/// Index of the solution with the smallest weighted sum; ties go to the
/// first in iteration order.
inline std::size_t select_best(std::span<const ObjectiveVector> set, const WeightConfig& w) {
  if (set.empty()) throw std::invalid_argument("select_best: empty solution set");
  std::size_t best = 0;
  double best_value = weighted_sum(set[0], w);
  for (std::size_t i = 1; i < set.size(); ++i) {
    const double v = weighted_sum(set[i], w);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  return best;
}

/// Rectangle spanned by a solution set over the network-latency and
/// service-spread axes. The free-resources axis collapses to zero extent on
/// converged sets, so it only participates when include_free_axis is set.
inline double solution_spread_volume(std::span<const ObjectiveVector> set,
                                     bool include_free_axis = false) {
  if (set.empty()) throw std::invalid_argument("solution_spread_volume: empty solution set");
  double lat_lo = set[0].network_latency, lat_hi = lat_lo;
  double spr_lo = set[0].service_spread, spr_hi = spr_lo;
  double free_lo = set[0].free_resources, free_hi = free_lo;
  for (const ObjectiveVector& v : set) {
    lat_lo = std::min(lat_lo, v.network_latency);
    lat_hi = std::max(lat_hi, v.network_latency);
    spr_lo = std::min(spr_lo, v.service_spread);
    spr_hi = std::max(spr_hi, v.service_spread);
    free_lo = std::min(free_lo, v.free_resources);
    free_hi = std::max(free_hi, v.free_resources);
  }
  double volume = (lat_hi - lat_lo) * (spr_hi - spr_lo);
  if (include_free_axis) volume *= (free_hi - free_lo);
  return volume;
}

/// One row of the comparison report: per-run metrics.
struct RunSummary {
  std::string instance;
  std::string algorithm;
  std::uint64_t seed = 0;
  double best_weighted_sum = 0.0;
  ObjectiveVector best;
  double volume = 0.0;
  double total_ms = 0.0;
  double mean_gen_ms = 0.0;
};

struct ComparisonReport {
  std::vector<RunSummary> rows;
};

inline RunSummary summarize_run(const RunResult& r, const WeightConfig& weights,
                                const std::string& instance_name = "") {
  RunSummary s;
  s.instance = instance_name;
  s.algorithm = r.algorithm;
  s.seed = r.seed;
  if (r.final_set.empty()) throw std::invalid_argument("summarize_run: empty final set");
  std::vector<ObjectiveVector> objectives;
  objectives.reserve(r.final_set.size());
  for (const FinalSolution& f : r.final_set) objectives.push_back(f.objectives);
  const std::size_t best = select_best(objectives, weights);
  s.best = objectives[best];
  s.best_weighted_sum = weighted_sum(objectives[best], weights);
  s.volume = solution_spread_volume(objectives);
  s.total_ms = r.total_ms;
  if (!r.traces.empty()) {
    double sum = 0.0;
    for (const GenerationTrace& t : r.traces) sum += t.wall_ms;
    s.mean_gen_ms = sum / static_cast<double>(r.traces.size());
  }
  return s;
}

inline ComparisonReport build_report(std::span<const RunResult> runs,
                                     const WeightConfig& weights,
                                     const std::string& instance_name = "") {
  if (runs.empty()) throw std::invalid_argument("build_report: no runs");
  ComparisonReport report;
  report.rows.reserve(runs.size());
  for (const RunResult& r : runs) report.rows.push_back(summarize_run(r, weights, instance_name));
  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const RunSummary& a, const RunSummary& b) {
                     if (a.instance != b.instance) return a.instance < b.instance;
                     if (a.algorithm != b.algorithm) return a.algorithm < b.algorithm;
                     return a.seed < b.seed;
                   });
  return report;
}

/// report.csv body: one row per run.
inline std::string report_csv(const ComparisonReport& report) {
  std::ostringstream os;
  os << "algorithm,seed,best_ws,free_res,spread,latency_ms,volume,total_ms,mean_gen_ms\n";
  for (const RunSummary& s : report.rows)
    os << s.algorithm << ',' << s.seed << ',' << format_double(s.best_weighted_sum) << ','
       << format_double(s.best.free_resources) << ',' << format_double(s.best.service_spread)
       << ',' << format_double(s.best.network_latency) << ',' << format_double(s.volume) << ','
       << format_double(s.total_ms) << ',' << format_double(s.mean_gen_ms) << '\n';
  return os.str();
}

/// Per-algorithm aggregates over seeds (means).
struct AlgorithmAggregate {
  std::string algorithm;
  int runs = 0;
  double mean_best_ws = 0.0;
  double mean_volume = 0.0;
  double mean_total_ms = 0.0;
  double mean_gen_ms = 0.0;
};

inline std::vector<AlgorithmAggregate> aggregate_by_algorithm(const ComparisonReport& report) {
  std::map<std::string, AlgorithmAggregate> by_name;
  for (const RunSummary& s : report.rows) {
    AlgorithmAggregate& a = by_name[s.algorithm];
    a.algorithm = s.algorithm;
    ++a.runs;
    a.mean_best_ws += s.best_weighted_sum;
    a.mean_volume += s.volume;
    a.mean_total_ms += s.total_ms;
    a.mean_gen_ms += s.mean_gen_ms;
  }
  std::vector<AlgorithmAggregate> out;
  for (auto& [name, a] : by_name) {
    a.mean_best_ws /= a.runs;
    a.mean_volume /= a.runs;
    a.mean_total_ms /= a.runs;
    a.mean_gen_ms /= a.runs;
    out.push_back(a);
  }
  return out;
}

}  // namespace fogplace

#endif  // FOGPLACE_ANALYSIS_HPP
