#ifndef FOGPLACE_EXPERIMENT_HPP
#define FOGPLACE_EXPERIMENT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fogplace/graph.hpp"
#include "fogplace/model.hpp"
#include "fogplace/rng.hpp"

namespace fogplace {

/// A reusable application blueprint: a DAG of service-consumes-service
/// edges over service_count template-local services. Entry services (those
/// nothing consumes) are what gateways request.
struct AppTemplate {
  std::string name;
  int service_count = 0;
  std::vector<std::pair<int, int>> edges;  // consumer -> consumed
  std::vector<int> entry_services;

  static AppTemplate make(std::string name, int service_count,
                          std::vector<std::pair<int, int>> edges) {
    AppTemplate t;
    t.name = std::move(name);
    t.service_count = service_count;
    t.edges = std::move(edges);
    t.validate();
    return t;
  }

  void validate() {
    if (service_count < 1) throw std::invalid_argument("template needs >= 1 service");
    std::vector<int> indegree(service_count, 0), outdegree(service_count, 0);
    for (auto [consumer, consumed] : edges) {
      if (consumer < 0 || consumer >= service_count || consumed < 0 ||
          consumed >= service_count || consumer == consumed)
        throw std::invalid_argument("template '" + name + "' has an invalid edge");
      ++indegree[consumed];
      ++outdegree[consumer];
    }
    // DAG check: repeatedly peel zero-outdegree nodes.
    {
      std::vector<int> out = outdegree;
      std::vector<std::vector<int>> consumers_of(service_count);
      for (auto [consumer, consumed] : edges) consumers_of[consumed].push_back(consumer);
      std::vector<int> stack;
      for (int v = 0; v < service_count; ++v)
        if (out[v] == 0) stack.push_back(v);
      int peeled = 0;
      while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        ++peeled;
        for (int c : consumers_of[v])
          if (--out[c] == 0) stack.push_back(c);
      }
      if (peeled != service_count)
        throw std::invalid_argument("template '" + name + "' has a consumption cycle");
    }
    // Weak connectivity over the undirected edge set.
    if (service_count > 1) {
      std::vector<std::vector<int>> adj(service_count);
      for (auto [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
      }
      std::vector<char> seen(service_count, 0);
      std::vector<int> stack = {0};
      seen[0] = 1;
      int reached = 1;
      while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w : adj[v])
          if (!seen[w]) {
            seen[w] = 1;
            ++reached;
            stack.push_back(w);
          }
      }
      if (reached != service_count)
        throw std::invalid_argument("template '" + name + "' is not weakly connected");
    }
    entry_services.clear();
    for (int v = 0; v < service_count; ++v)
      if (indegree[v] == 0) entry_services.push_back(v);
    if (entry_services.empty())
      throw std::invalid_argument("template '" + name + "' has no entry service");
  }
};

/// The three stock application shapes: a sensing chain with one fan-out, a
/// two-branch pipeline that joins, and a storefront fanning out to backed
/// mid services. Sizes 5 + 6 + 9 make 15 cycled applications total exactly
/// 100 services.
inline std::vector<AppTemplate> default_templates() {
  return {
      AppTemplate::make("eeg_game", 5, {{0, 1}, {1, 2}, {2, 3}, {2, 4}}),
      AppTemplate::make("surveillance", 6, {{0, 1}, {0, 2}, {1, 3}, {2, 4}, {3, 5}, {4, 5}}),
      AppTemplate::make("ecommerce", 9,
                        {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 5}, {2, 6}, {3, 7}, {4, 8}}),
  };
}

/// Smaller shapes for quick runs: sizes 4 + 5 + 6 give 30 services over six
/// applications.
inline std::vector<AppTemplate> desk_templates() {
  return {
      AppTemplate::make("sensor_chain", 4, {{0, 1}, {1, 2}, {2, 3}}),
      AppTemplate::make("tracker", 5, {{0, 1}, {0, 2}, {1, 3}, {2, 4}}),
      AppTemplate::make("shop_lite", 6, {{0, 1}, {0, 2}, {0, 3}, {1, 4}, {2, 5}}),
  };
}

struct ExperimentConfig {
  int device_count = 100;
  int ba_attachment = 2;  // edges added per new node
  double gateway_fraction = 0.20;
  int users_per_gateway = 8;
  int app_count = 15;  // 30 for the 200-service variant
  int capacity_range[2] = {4, 10};
  int consumption_range[2] = {1, 4};
  double latency_range[2] = {75.0, 125.0};
  double cloud_link_latency = 100.0;
  std::vector<AppTemplate> templates = default_templates();
  std::uint64_t master_seed = 0;
  std::string name = "instance";
};

inline ExperimentConfig paper_config(int services) {
  ExperimentConfig c;
  if (services == 100) {
    c.app_count = 15;
    c.name = "fsp100";
  } else if (services == 200) {
    c.app_count = 30;
    c.name = "fsp200";
  } else {
    throw std::invalid_argument("paper_config: expected 100 or 200 services");
  }
  return c;
}

/// Reduced instance for quick checks: 25 devices, 30 services, 5 gateways,
/// with finer-grained services relative to device capacity.
inline ExperimentConfig desk_config() {
  ExperimentConfig c;
  c.device_count = 25;
  c.app_count = 6;
  c.users_per_gateway = 2;
  c.capacity_range[0] = 8;
  c.capacity_range[1] = 16;
  c.consumption_range[0] = 1;
  c.consumption_range[1] = 3;
  c.templates = desk_templates();
  c.name = "desk";
  return c;
}

inline void validate_experiment_config(const ExperimentConfig& c) {
  if (c.device_count <= c.ba_attachment || c.ba_attachment < 1)
    throw std::invalid_argument("need device_count > ba_attachment >= 1");
  if (c.gateway_fraction * c.device_count < 1.0)
    throw std::invalid_argument("gateway_fraction * device_count must be >= 1");
  if (c.users_per_gateway < 1) throw std::invalid_argument("users_per_gateway must be >= 1");
  if (c.capacity_range[0] < 1 || c.capacity_range[1] < c.capacity_range[0])
    throw std::invalid_argument("invalid capacity_range");
  if (c.consumption_range[0] < 1 || c.consumption_range[1] < c.consumption_range[0])
    throw std::invalid_argument("invalid consumption_range");
  if (c.latency_range[0] <= 0.0 || c.latency_range[1] < c.latency_range[0])
    throw std::invalid_argument("invalid latency_range");
  if (c.cloud_link_latency <= 0.0)
    throw std::invalid_argument("cloud_link_latency must be positive");
  if (c.templates.empty()) throw std::invalid_argument("templates must be non-empty");
  if (c.app_count < 1 || c.app_count % static_cast<int>(c.templates.size()) != 0)
    throw std::invalid_argument("app_count must be a positive multiple of the template count");
}

/// Barabási–Albert topology with uniform link latencies. The device with
/// the highest betweenness centrality becomes the cloud (its links re-set to
/// cloud_link_latency); the lowest-centrality devices become gateways.
inline Infrastructure generate_topology(const ExperimentConfig& config, RngStream& rng) {
  validate_experiment_config(config);
  const int n = config.device_count;
  const int m = config.ba_attachment;

  // Preferential attachment: node ids repeated by degree form the urn.
  // Each new node links to m distinct existing nodes, so the graph is
  // connected and free of duplicate edges by construction.
  std::vector<Link> links;
  std::vector<int> urn;
  urn.reserve(2 * m * n);
  for (int v = m; v < n; ++v) {
    std::vector<int> targets;
    if (v == m) {
      for (int i = 0; i < m; ++i) targets.push_back(i);
    } else {
      std::set<int> chosen;
      while (static_cast<int>(chosen.size()) < m)
        chosen.insert(urn[rng.below(urn.size())]);
      targets.assign(chosen.begin(), chosen.end());
    }
    for (int tgt : targets) {
      links.push_back({v, tgt, 0.0});
      urn.push_back(v);
      urn.push_back(tgt);
    }
  }
  for (Link& l : links)
    l.latency_ms = rng.uniform_real(config.latency_range[0], config.latency_range[1]);

  const auto centrality = betweenness_centrality(links, n);
  int cloud = 0;
  for (int i = 1; i < n; ++i)
    if (centrality[i] > centrality[cloud]) cloud = i;
  for (Link& l : links)
    if (l.a == cloud || l.b == cloud) l.latency_ms = config.cloud_link_latency;

  const int gateway_count = static_cast<int>(std::ceil(config.gateway_fraction * n));
  std::vector<int> by_centrality;
  for (int i = 0; i < n; ++i)
    if (i != cloud) by_centrality.push_back(i);
  std::stable_sort(by_centrality.begin(), by_centrality.end(), [&](int a, int b) {
    if (centrality[a] != centrality[b]) return centrality[a] < centrality[b];
    return a < b;
  });
  std::set<int> gateways(by_centrality.begin(), by_centrality.begin() + gateway_count);

  Infrastructure infra;
  infra.devices.reserve(n);
  for (int i = 0; i < n; ++i) {
    Device d;
    d.id = i;
    if (i == cloud) {
      d.role = DeviceRole::cloud;
      d.capacity = 0;  // sentinel, unbounded
    } else {
      d.role = gateways.count(i) ? DeviceRole::gateway : DeviceRole::ordinary;
      d.capacity = rng.uniform_int(config.capacity_range[0], config.capacity_range[1]);
    }
    infra.devices.push_back(d);
  }
  infra.links = std::move(links);
  infra.distances = compute_distances(infra.links, n);
  return infra;
}

/// Builds app_count applications by cycling through the templates, with
/// uniform per-service consumptions and a block-diagonal consumption matrix.
/// The request matrix is left empty; place_requests fills it.
inline ApplicationModel generate_applications(const ExperimentConfig& config, RngStream& rng) {
  validate_experiment_config(config);
  ApplicationModel apps;
  int total_services = 0;
  for (int a = 0; a < config.app_count; ++a)
    total_services += config.templates[a % config.templates.size()].service_count;

  apps.consumption = BoolMatrix(total_services, total_services, 0);
  apps.services.reserve(total_services);
  int base = 0;
  for (int a = 0; a < config.app_count; ++a) {
    const AppTemplate& tpl = config.templates[a % config.templates.size()];
    for (int s = 0; s < tpl.service_count; ++s) {
      Service svc;
      svc.id = base + s;
      svc.app_id = a;
      svc.consumption = rng.uniform_int(config.consumption_range[0], config.consumption_range[1]);
      apps.services.push_back(svc);
    }
    for (auto [consumer, consumed] : tpl.edges)
      apps.consumption(base + consumer, base + consumed) = 1;
    base += tpl.service_count;
  }
  return apps;
}

/// Assigns each application's entry services to a uniformly chosen seed
/// gateway and its nearest neighbor gateways by shortest-path latency, one
/// gateway per user. Leftover users go one each to the lowest-index apps.
inline BoolMatrix place_requests(const ExperimentConfig& config, const Infrastructure& infra,
                                 const ApplicationModel& apps, RngStream& rng) {
  const std::vector<int> gateway_ids = infra.gateway_ids();
  const int g = static_cast<int>(gateway_ids.size());
  if (g == 0) throw std::invalid_argument("place_requests: no gateways");
  const int total_users = config.users_per_gateway * g;
  const int base_users = total_users / config.app_count;
  const int remainder = total_users % config.app_count;
  if (base_users + (remainder > 0 ? 1 : 0) > g)
    throw std::invalid_argument("place_requests: more users per app than gateways");

  BoolMatrix requests(g, apps.services.size(), 0);

  // Entry services per app, in global service ids.
  std::vector<std::vector<int>> entries_of_app(config.app_count);
  {
    int base = 0;
    for (int a = 0; a < config.app_count; ++a) {
      const AppTemplate& tpl = config.templates[a % config.templates.size()];
      for (int e : tpl.entry_services) entries_of_app[a].push_back(base + e);
      base += tpl.service_count;
    }
  }

  for (int a = 0; a < config.app_count; ++a) {
    const int users = base_users + (a < remainder ? 1 : 0);
    const int seed_row = static_cast<int>(rng.below(g));
    const int seed_gw = gateway_ids[seed_row];

    std::vector<int> rows(g);
    for (int r = 0; r < g; ++r) rows[r] = r;
    std::stable_sort(rows.begin(), rows.end(), [&](int ra, int rb) {
      const double da = infra.distances(seed_gw, gateway_ids[ra]);
      const double db = infra.distances(seed_gw, gateway_ids[rb]);
      if (da != db) return da < db;
      return gateway_ids[ra] < gateway_ids[rb];  // ties by lower device id
    });
    for (int k = 0; k < users; ++k)
      for (int svc : entries_of_app[a]) requests(rows[k], svc) = 1;
  }
  return requests;
}

/// Full instance generation: topology, applications, requests, and the
/// scalarization config with latency_max set to the distance between the
/// cloud and its farthest device.
inline ProblemInstance generate_instance(const ExperimentConfig& config) {
  RngStream rng(config.master_seed);
  ProblemInstance inst;
  inst.name = config.name;
  inst.infra = generate_topology(config, rng);
  inst.apps = generate_applications(config, rng);
  inst.apps.requests = place_requests(config, inst.infra, inst.apps, rng);

  const int cloud = inst.infra.cloud_id();
  double latency_max = 0.0;
  for (int i = 0; i < inst.infra.device_count(); ++i)
    latency_max = std::max(latency_max, inst.infra.distances(cloud, i));
  inst.weights = WeightConfig::uniform(latency_max);
  validate_instance(inst);
  return inst;
}

}  // namespace fogplace

#endif  // FOGPLACE_EXPERIMENT_HPP
