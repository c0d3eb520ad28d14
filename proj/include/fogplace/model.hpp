#ifndef FOGPLACE_MODEL_HPP
#define FOGPLACE_MODEL_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "fogplace/graph.hpp"
#include "fogplace/matrix.hpp"

namespace fogplace {

enum class DeviceRole { cloud, gateway, ordinary };

inline const char* to_string(DeviceRole r) {
  switch (r) {
    case DeviceRole::cloud: return "cloud";
    case DeviceRole::gateway: return "gateway";
    default: return "ordinary";
  }
}

inline DeviceRole device_role_from_string(const std::string& s) {
  if (s == "cloud") return DeviceRole::cloud;
  if (s == "gateway") return DeviceRole::gateway;
  if (s == "ordinary") return DeviceRole::ordinary;
  throw std::invalid_argument("unknown device role: " + s);
}

/// A fog device. The cloud device's capacity is a sentinel: it never takes
/// part in capacity arithmetic (its resources are treated as unbounded).
struct Device {
  int id = 0;
  int capacity = 0;
  DeviceRole role = DeviceRole::ordinary;

  bool is_cloud() const { return role == DeviceRole::cloud; }
};

/// Device network: node list, weighted links, and the derived all-pairs
/// shortest-path latency matrix.
struct Infrastructure {
  std::vector<Device> devices;
  std::vector<Link> links;
  Matrix<double> distances;  // |F| x |F|, milliseconds

  int device_count() const { return static_cast<int>(devices.size()); }

  int cloud_id() const {
    for (const Device& d : devices)
      if (d.is_cloud()) return d.id;
    throw std::runtime_error("infrastructure has no cloud device");
  }

  std::vector<int> gateway_ids() const {
    std::vector<int> ids;
    for (const Device& d : devices)
      if (d.role == DeviceRole::gateway) ids.push_back(d.id);
    return ids;
  }

  /// Sum of non-cloud capacities.
  long long total_fog_capacity() const {
    long long total = 0;
    for (const Device& d : devices)
      if (!d.is_cloud()) total += d.capacity;
    return total;
  }
};

struct Service {
  int id = 0;
  int consumption = 1;
  int app_id = 0;
};

/// Application-side model: services, the service-consumes-service matrix I
/// (iota[x][x'] = 1 iff x consumes x'), and the gateway request matrix R
/// (rho[g][x] = 1 iff gateway row g requests service x). Request rows follow
/// Infrastructure::gateway_ids() order.
struct ApplicationModel {
  std::vector<Service> services;
  BoolMatrix consumption;  // |S| x |S|
  BoolMatrix requests;     // |GW| x |S|

  int service_count() const { return static_cast<int>(services.size()); }
};

/// Binary allocation matrix: alloc(x, i) = 1 iff device i hosts an instance
/// of service x. This is the solution representation evolved by all three
/// optimizers.
struct Placement {
  BoolMatrix alloc;  // |S| x |F|

  Placement() = default;
  Placement(std::size_t services, std::size_t devices) : alloc(services, devices, 0) {}

  std::size_t service_count() const { return alloc.rows(); }
  std::size_t device_count() const { return alloc.cols(); }

  friend bool operator==(const Placement& a, const Placement& b) { return a.alloc == b.alloc; }
};

/// Weighted-sum scalarization parameters. theta are the objective weights,
/// omega the scale factors; latency is brought to [0,1] by 1/latency_max.
struct WeightConfig {
  double theta[3] = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};  // free_resources, spread, latency
  double omega[3] = {1.0, 1.0, 0.0};                    // omega[2] defaults to 1/latency_max
  double latency_max = 0.0;                             // milliseconds

  static WeightConfig uniform(double latency_max) {
    WeightConfig w;
    w.latency_max = latency_max;
    w.omega[2] = latency_max > 0.0 ? 1.0 / latency_max : 0.0;
    return w;
  }
};

/// Probabilities of the random-generation and mutation operators.
struct OperatorParams {
  double p_init = 0.3;
  double p_grow = 0.5;
  double p_spread = 0.25;
};

/// A complete problem instance: the infrastructure, the applications and
/// request workload, scalarization weights, and operator parameters.
struct ProblemInstance {
  std::string name = "instance";
  Infrastructure infra;
  ApplicationModel apps;
  WeightConfig weights;
  OperatorParams operators;
  // Eq-level switch: when true, a gateway hosting a requested service counts
  // distance 0 instead of looking at the nearest *other* host.
  bool gateway_self_host_zero = false;
};

/// Result of the capacity-constraint check: per-device load and the devices
/// whose load exceeds capacity (cloud excluded, its capacity is unbounded).
struct FeasibilityReport {
  bool feasible = true;
  std::vector<long long> load;          // per device, resource units
  std::vector<int> overloaded_devices;  // ids, ascending
};

inline FeasibilityReport check_feasibility(const Placement& placement,
                                           const Infrastructure& infra,
                                           const std::vector<Service>& services) {
  const std::size_t S = services.size();
  const std::size_t F = infra.devices.size();
  if (placement.alloc.rows() != S || placement.alloc.cols() != F)
    throw std::invalid_argument("check_feasibility: placement is " +
                                std::to_string(placement.alloc.rows()) + "x" +
                                std::to_string(placement.alloc.cols()) + ", expected " +
                                std::to_string(S) + "x" + std::to_string(F));
  FeasibilityReport report;
  report.load.assign(F, 0);
  for (std::size_t x = 0; x < S; ++x) {
    const auto* row = placement.alloc.row(x);
    for (std::size_t i = 0; i < F; ++i)
      if (row[i]) report.load[i] += services[x].consumption;
  }
  for (std::size_t i = 0; i < F; ++i) {
    if (infra.devices[i].is_cloud()) continue;
    if (report.load[i] > infra.devices[i].capacity) {
      report.feasible = false;
      report.overloaded_devices.push_back(static_cast<int>(i));
    }
  }
  return report;
}

inline bool is_feasible(const Placement& placement, const Infrastructure& infra,
                        const std::vector<Service>& services) {
  return check_feasibility(placement, infra, services).feasible;
}

/// True iff every service has at least one instance somewhere.
inline bool every_service_placed(const Placement& placement) {
  for (std::size_t x = 0; x < placement.alloc.rows(); ++x) {
    const auto* row = placement.alloc.row(x);
    bool any = false;
    for (std::size_t i = 0; i < placement.alloc.cols(); ++i) any |= (row[i] != 0);
    if (!any) return false;
  }
  return true;
}

/// Structural invariants every instance must satisfy. Throws on violation.
inline void validate_instance(const ProblemInstance& inst) {
  const auto& devices = inst.infra.devices;
  if (devices.empty()) throw std::invalid_argument("instance has no devices");
  int clouds = 0;
  for (std::size_t i = 0; i < devices.size(); ++i) {
    if (devices[i].id != static_cast<int>(i))
      throw std::invalid_argument("device ids must be 0..|F|-1 in order");
    if (devices[i].is_cloud())
      ++clouds;
    else if (devices[i].capacity <= 0)
      throw std::invalid_argument("non-cloud device " + std::to_string(i) +
                                  " must have positive capacity");
  }
  if (clouds != 1) throw std::invalid_argument("instance must have exactly one cloud device");

  const std::size_t S = inst.apps.services.size();
  if (inst.apps.consumption.rows() != S || inst.apps.consumption.cols() != S)
    throw std::invalid_argument("consumption matrix must be |S| x |S|");
  int max_fog_capacity = 0;
  for (const Device& d : devices)
    if (!d.is_cloud()) max_fog_capacity = std::max(max_fog_capacity, d.capacity);
  for (std::size_t x = 0; x < S; ++x) {
    if (inst.apps.services[x].id != static_cast<int>(x))
      throw std::invalid_argument("service ids must be 0..|S|-1 in order");
    if (inst.apps.services[x].consumption < 1)
      throw std::invalid_argument("service consumption must be >= 1");
    if (inst.apps.services[x].consumption > max_fog_capacity)
      throw std::invalid_argument("service " + std::to_string(x) +
                                  " cannot fit on any fog device");
    if (inst.apps.consumption(x, x))
      throw std::invalid_argument("consumption matrix diagonal must be zero");
  }
  const std::size_t G = inst.infra.gateway_ids().size();
  if (inst.apps.requests.rows() != G || inst.apps.requests.cols() != S)
    throw std::invalid_argument("request matrix must be |GW| x |S|");
  if (inst.infra.distances.rows() != devices.size() ||
      inst.infra.distances.cols() != devices.size())
    throw std::invalid_argument("distance matrix must be |F| x |F|");
}

}  // namespace fogplace

#endif  // FOGPLACE_MODEL_HPP
