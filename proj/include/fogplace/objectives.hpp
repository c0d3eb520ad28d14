#ifndef FOGPLACE_OBJECTIVES_HPP
#define FOGPLACE_OBJECTIVES_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fogplace/model.hpp"

namespace fogplace {

/// The three minimization targets of a placement.
struct ObjectiveVector {
  double free_resources = 0.0;   // fraction in [0,1]
  double service_spread = 0.0;   // mean per-service CV, dimensionless
  double network_latency = 0.0;  // milliseconds

  static constexpr std::size_t size() { return 3; }
  double operator[](std::size_t i) const {
    return i == 0 ? free_resources : (i == 1 ? service_spread : network_latency);
  }
  friend bool operator==(const ObjectiveVector& a, const ObjectiveVector& b) {
    return a.free_resources == b.free_resources && a.service_spread == b.service_spread &&
           a.network_latency == b.network_latency;
  }
};

namespace detail {

/// Device indices hosting each service, flattened: hosts of service x are
/// hosts[offset[x] .. offset[x+1]).
struct HostIndex {
  std::vector<int> hosts;
  std::vector<int> offset;

  void build(const Placement& p) {
    const std::size_t S = p.alloc.rows(), F = p.alloc.cols();
    offset.assign(S + 1, 0);
    hosts.clear();
    hosts.reserve(S * F);
    for (std::size_t x = 0; x < S; ++x) {
      const auto* row = p.alloc.row(x);
      for (std::size_t i = 0; i < F; ++i)
        if (row[i]) hosts.push_back(static_cast<int>(i));
      offset[x + 1] = static_cast<int>(hosts.size());
    }
  }
  int count(std::size_t x) const { return offset[x + 1] - offset[x]; }
  const int* begin_of(std::size_t x) const { return hosts.data() + offset[x]; }
  const int* end_of(std::size_t x) const { return hosts.data() + offset[x + 1]; }
};

/// Reusable per-evaluation buffers.
struct EvalScratch {
  HostIndex index;
  std::vector<int> non_hosts;
};

inline double min_distance_to_host(const Matrix<double>& d, int from, const HostIndex& idx,
                                   std::size_t service, int excluded_device) {
  double best = std::numeric_limits<double>::infinity();
  const double* drow = d.row(from);
  for (const int* it = idx.begin_of(service); it != idx.end_of(service); ++it) {
    if (*it == excluded_device) continue;
    const double v = drow[*it];
    if (v < best) {
      if (v == 0.0) return 0.0;  // co-located; link latencies are positive
      best = v;
    }
  }
  return best;
}

/// Whole-matrix pair totals; let the dense-host case run over the small
/// complement set instead of the quadratic host-pair loop.
struct DistanceTotals {
  double pair_sum = 0.0;             // sum of d over unordered pairs
  double pair_sq = 0.0;              // sum of d^2 over unordered pairs
  std::vector<double> row_sum;       // per device, sum of d over all others
  std::vector<double> row_sq;

  static DistanceTotals build(const Matrix<double>& d) {
    DistanceTotals t;
    const std::size_t n = d.rows();
    t.row_sum.assign(n, 0.0);
    t.row_sq.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const double v = d(i, j);
        t.row_sum[i] += v;
        t.row_sq[i] += v * v;
        if (i < j) {
          t.pair_sum += v;
          t.pair_sq += v * v;
        }
      }
    return t;
  }
};

inline double spread_from_hosts(const Matrix<double>& distances, const HostIndex& idx,
                                std::size_t service_count,
                                const DistanceTotals* totals = nullptr,
                                std::vector<int>* non_host_buffer = nullptr) {
  const int device_count = static_cast<int>(distances.rows());
  std::vector<int> local_buffer;
  std::vector<int>& non_hosts = non_host_buffer ? *non_host_buffer : local_buffer;
  double cv_sum = 0.0;
  for (std::size_t x = 0; x < service_count; ++x) {
    const int n = idx.count(x);
    if (n < 2) continue;  // no pairs: contributes CV = 0
    const int* h = idx.begin_of(x);
    const double pairs = static_cast<double>(n) * (n - 1) / 2.0;
    double sum = 0.0, sq = 0.0;
    if (totals && 2 * n > device_count) {
      // Dense host set: pairs(H) = all_pairs − rows(C) + pairs(C) over the
      // small complement C. Hosts arrive sorted, so C falls out by merging.
      non_hosts.clear();
      int cursor = 0;
      for (int i = 0; i < device_count; ++i) {
        if (cursor < n && h[cursor] == i)
          ++cursor;
        else
          non_hosts.push_back(i);
      }
      sum = totals->pair_sum;
      sq = totals->pair_sq;
      for (std::size_t a = 0; a < non_hosts.size(); ++a) {
        sum -= totals->row_sum[non_hosts[a]];
        sq -= totals->row_sq[non_hosts[a]];
        const double* drow = distances.row(non_hosts[a]);
        for (std::size_t b = a + 1; b < non_hosts.size(); ++b) {
          const double v = drow[non_hosts[b]];
          sum += v;
          sq += v * v;
        }
      }
    } else {
      for (int a = 0; a < n; ++a) {
        const double* drow = distances.row(h[a]);
        for (int b = a + 1; b < n; ++b) {
          const double v = drow[h[b]];
          sum += v;
          sq += v * v;
        }
      }
    }
    const double mean = sum / pairs;
    if (mean <= 0.0) continue;  // all replicas co-located in distance terms
    const double variance = std::max(0.0, sq / pairs - mean * mean);
    cv_sum += std::sqrt(variance) / mean;
  }
  return cv_sum / static_cast<double>(service_count);
}

/// Consumption-side and request-side latency terms. consumed_of[x] lists the
/// services x consumes; requested_of[g] lists the services requested at
/// gateway row g.
inline double latency_from_lists(const Matrix<double>& distances, const HostIndex& idx,
                                 const std::vector<std::vector<int>>& consumed_of,
                                 const std::vector<std::vector<int>>& requested_of,
                                 const std::vector<int>& gateway_ids,
                                 bool gateway_self_host_zero) {
  const std::size_t S = consumed_of.size();
  const std::size_t G = gateway_ids.size();
  double total = 0.0;

  for (std::size_t x = 0; x < S; ++x) {
    const auto& consumed = consumed_of[x];
    const int n_hosts = idx.count(x);
    if (consumed.empty() || n_hosts == 0) continue;  // no consumption term
    double sum = 0.0;
    for (const int* it = idx.begin_of(x); it != idx.end_of(x); ++it)
      for (int xc : consumed) sum += min_distance_to_host(distances, *it, idx, xc, -1);
    total += sum / static_cast<double>(n_hosts * consumed.size());
  }

  for (std::size_t g = 0; g < G; ++g) {
    const auto& requested = requested_of[g];
    if (requested.empty()) continue;
    const int gw = gateway_ids[g];
    const int excluded = gateway_self_host_zero ? -1 : gw;
    double sum = 0.0;
    for (int x : requested) {
      const double v = min_distance_to_host(distances, gw, idx, x, excluded);
      if (std::isinf(v))
        throw std::runtime_error("network_latency: service " + std::to_string(x) +
                                 " has no host other than its requesting gateway");
      sum += v;
    }
    total += sum / static_cast<double>(requested.size());
  }

  return total / static_cast<double>(S + G);
}

inline std::vector<std::vector<int>> consumed_lists(const BoolMatrix& consumption) {
  std::vector<std::vector<int>> lists(consumption.rows());
  for (std::size_t x = 0; x < consumption.rows(); ++x)
    for (std::size_t xc = 0; xc < consumption.cols(); ++xc)
      if (consumption(x, xc)) lists[x].push_back(static_cast<int>(xc));
  return lists;
}

inline std::vector<std::vector<int>> requested_lists(const BoolMatrix& requests) {
  std::vector<std::vector<int>> lists(requests.rows());
  for (std::size_t g = 0; g < requests.rows(); ++g)
    for (std::size_t x = 0; x < requests.cols(); ++x)
      if (requests(g, x)) lists[g].push_back(static_cast<int>(x));
  return lists;
}

}  // namespace detail

/// Fraction of unused capacity across non-cloud devices: 1 - used/total.
/// The cloud is excluded from both sums; its capacity is unbounded.
inline double free_resources(const Placement& placement, const Infrastructure& infra,
                             const std::vector<Service>& services) {
  const long long total = infra.total_fog_capacity();
  if (total <= 0) throw std::invalid_argument("free_resources: no fog capacity in instance");
  long long used = 0;
  for (std::size_t x = 0; x < placement.alloc.rows(); ++x) {
    const auto* row = placement.alloc.row(x);
    for (std::size_t i = 0; i < placement.alloc.cols(); ++i)
      if (row[i] && !infra.devices[i].is_cloud()) used += services[x].consumption;
  }
  return 1.0 - static_cast<double>(used) / static_cast<double>(total);
}

/// Mean over services of the coefficient of variation of pairwise
/// inter-replica distances. Services with fewer than two instances
/// contribute 0.
inline double service_spread(const Placement& placement, const Matrix<double>& distances) {
  detail::HostIndex idx;
  idx.build(placement);
  return detail::spread_from_hosts(distances, idx, placement.alloc.rows());
}

/// Average of per-service consumption distances and per-gateway request
/// distances, divided by |S| + |GW|. Consumption distance averages, over
/// each hosted instance and each consumed service, the distance to the
/// nearest host of the consumed service. Request distance is the same from
/// the gateway, excluding the gateway itself unless gateway_self_host_zero.
inline double network_latency(const Placement& placement, const Matrix<double>& distances,
                              const BoolMatrix& consumption, const BoolMatrix& requests,
                              const std::vector<int>& gateway_ids,
                              bool gateway_self_host_zero = false) {
  detail::HostIndex idx;
  idx.build(placement);
  return detail::latency_from_lists(distances, idx, detail::consumed_lists(consumption),
                                    detail::requested_lists(requests), gateway_ids,
                                    gateway_self_host_zero);
}

/// Weighted sum of the three objectives: sum_i omega_i * theta_i * x_i.
/// Not clamped; values above 1 only occur when latency exceeds latency_max.
inline double weighted_sum(const ObjectiveVector& v, const WeightConfig& w) {
  if (w.latency_max <= 0.0)
    throw std::invalid_argument("weighted_sum: latency_max must be positive");
  return w.omega[0] * w.theta[0] * v.free_resources +
         w.omega[1] * w.theta[1] * v.service_spread +
         w.omega[2] * w.theta[2] * v.network_latency;
}

/// Evaluates placements against one instance. Builds the instance-level
/// lookup tables once; evaluate() is pure and safe to call concurrently.
class Evaluator {
 public:
  explicit Evaluator(const ProblemInstance& inst)
      : inst_(&inst),
        gateway_ids_(inst.infra.gateway_ids()),
        consumed_of_(detail::consumed_lists(inst.apps.consumption)),
        requested_of_(detail::requested_lists(inst.apps.requests)),
        totals_(detail::DistanceTotals::build(inst.infra.distances)),
        total_fog_capacity_(inst.infra.total_fog_capacity()) {
    if (total_fog_capacity_ <= 0)
      throw std::invalid_argument("Evaluator: instance has no fog capacity");
    cloud_ = inst.infra.cloud_id();
    consumption_of_.reserve(inst.apps.services.size());
    for (const Service& s : inst.apps.services) consumption_of_.push_back(s.consumption);
  }

  ObjectiveVector evaluate(const Placement& p) const {
    static thread_local detail::EvalScratch scratch;
    const std::size_t S = p.alloc.rows();
    detail::HostIndex& idx = scratch.index;
    idx.build(p);

    long long used = 0;
    for (std::size_t x = 0; x < S; ++x) {
      int fog_hosts = idx.count(x);
      for (const int* it = idx.begin_of(x); it != idx.end_of(x); ++it)
        if (*it == cloud_) --fog_hosts;
      used += static_cast<long long>(fog_hosts) * consumption_of_[x];
    }

    ObjectiveVector v;
    v.free_resources = 1.0 - static_cast<double>(used) / static_cast<double>(total_fog_capacity_);
    v.service_spread =
        detail::spread_from_hosts(inst_->infra.distances, idx, S, &totals_, &scratch.non_hosts);
    v.network_latency =
        detail::latency_from_lists(inst_->infra.distances, idx, consumed_of_, requested_of_,
                                   gateway_ids_, inst_->gateway_self_host_zero);
    return v;
  }

  double weighted(const ObjectiveVector& v) const { return weighted_sum(v, inst_->weights); }

  const ProblemInstance& instance() const { return *inst_; }

 private:
  const ProblemInstance* inst_;
  std::vector<int> gateway_ids_;
  std::vector<std::vector<int>> consumed_of_;
  std::vector<std::vector<int>> requested_of_;
  detail::DistanceTotals totals_;
  std::vector<int> consumption_of_;
  long long total_fog_capacity_;
  int cloud_ = 0;
};

/// Evaluates all three objectives for one placement.
inline ObjectiveVector evaluate(const Placement& placement, const ProblemInstance& inst) {
  return Evaluator(inst).evaluate(placement);
}

}  // namespace fogplace

#endif  // FOGPLACE_OBJECTIVES_HPP
