#ifndef FOGPLACE_IO_HPP
#define FOGPLACE_IO_HPP

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fogplace/algorithms.hpp"
#include "fogplace/experiment.hpp"
#include "fogplace/format.hpp"
#include "fogplace/model.hpp"

namespace fogplace {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Instance document
// ---------------------------------------------------------------------------

inline json instance_to_json(const ProblemInstance& inst) {
  json doc;
  doc["name"] = inst.name;

  json devices = json::array();
  for (const Device& d : inst.infra.devices) {
    json dev;
    dev["id"] = d.id;
    dev["role"] = to_string(d.role);
    if (d.is_cloud())
      dev["capacity"] = nullptr;  // unbounded
    else
      dev["capacity"] = d.capacity;
    devices.push_back(std::move(dev));
  }
  doc["devices"] = std::move(devices);

  json links = json::array();
  for (const Link& l : inst.infra.links)
    links.push_back({{"a", l.a}, {"b", l.b}, {"latency_ms", l.latency_ms}});
  doc["links"] = std::move(links);

  json services = json::array();
  for (const Service& s : inst.apps.services)
    services.push_back({{"id", s.id}, {"consumption", s.consumption}, {"app", s.app_id}});
  doc["services"] = std::move(services);

  json edges = json::array();
  for (std::size_t x = 0; x < inst.apps.consumption.rows(); ++x)
    for (std::size_t xc = 0; xc < inst.apps.consumption.cols(); ++xc)
      if (inst.apps.consumption(x, xc))
        edges.push_back({{"consumer", static_cast<int>(x)}, {"consumed", static_cast<int>(xc)}});
  doc["consumption_edges"] = std::move(edges);

  const auto gateway_ids = inst.infra.gateway_ids();
  json requests = json::array();
  for (std::size_t g = 0; g < inst.apps.requests.rows(); ++g)
    for (std::size_t x = 0; x < inst.apps.requests.cols(); ++x)
      if (inst.apps.requests(g, x))
        requests.push_back({{"gateway", gateway_ids[g]}, {"service", static_cast<int>(x)}});
  doc["requests"] = std::move(requests);

  doc["weights"] = {{"theta", {inst.weights.theta[0], inst.weights.theta[1],
                               inst.weights.theta[2]}},
                    {"omega", {inst.weights.omega[0], inst.weights.omega[1],
                               inst.weights.omega[2]}},
                    {"latency_max", inst.weights.latency_max}};
  doc["operators"] = {{"p_init", inst.operators.p_init},
                      {"p_grow", inst.operators.p_grow},
                      {"p_spread", inst.operators.p_spread}};
  doc["gateway_self_host_zero"] = inst.gateway_self_host_zero;
  return doc;
}

inline ProblemInstance instance_from_json(const json& doc) {
  ProblemInstance inst;
  inst.name = doc.value("name", std::string("instance"));

  for (const auto& dev : doc.at("devices")) {
    Device d;
    d.id = dev.at("id").get<int>();
    d.role = device_role_from_string(dev.at("role").get<std::string>());
    if (!d.is_cloud()) d.capacity = dev.at("capacity").get<int>();
    inst.infra.devices.push_back(d);
  }
  for (const auto& l : doc.at("links"))
    inst.infra.links.push_back(
        {l.at("a").get<int>(), l.at("b").get<int>(), l.at("latency_ms").get<double>()});
  inst.infra.distances =
      compute_distances(inst.infra.links, static_cast<int>(inst.infra.devices.size()));

  for (const auto& s : doc.at("services"))
    inst.apps.services.push_back(
        {s.at("id").get<int>(), s.at("consumption").get<int>(), s.at("app").get<int>()});
  const std::size_t S = inst.apps.services.size();
  inst.apps.consumption = BoolMatrix(S, S, 0);
  for (const auto& e : doc.at("consumption_edges"))
    inst.apps.consumption(e.at("consumer").get<std::size_t>(),
                          e.at("consumed").get<std::size_t>()) = 1;

  const auto gateway_ids = inst.infra.gateway_ids();
  inst.apps.requests = BoolMatrix(gateway_ids.size(), S, 0);
  for (const auto& r : doc.at("requests")) {
    const int gw = r.at("gateway").get<int>();
    const auto it = std::find(gateway_ids.begin(), gateway_ids.end(), gw);
    if (it == gateway_ids.end())
      throw std::invalid_argument("request references non-gateway device " + std::to_string(gw));
    inst.apps.requests(it - gateway_ids.begin(), r.at("service").get<std::size_t>()) = 1;
  }

  if (doc.contains("weights")) {
    const auto& w = doc.at("weights");
    for (int i = 0; i < 3; ++i) {
      inst.weights.theta[i] = w.at("theta").at(i).get<double>();
      inst.weights.omega[i] = w.at("omega").at(i).get<double>();
    }
    inst.weights.latency_max = w.at("latency_max").get<double>();
  }
  if (doc.contains("operators")) {
    const auto& o = doc.at("operators");
    inst.operators.p_init = o.value("p_init", inst.operators.p_init);
    inst.operators.p_grow = o.value("p_grow", inst.operators.p_grow);
    inst.operators.p_spread = o.value("p_spread", inst.operators.p_spread);
  }
  inst.gateway_self_host_zero = doc.value("gateway_self_host_zero", false);
  validate_instance(inst);
  return inst;
}

// ---------------------------------------------------------------------------
// Experiment config document (all keys optional, defaults apply)
// ---------------------------------------------------------------------------

inline json experiment_config_to_json(const ExperimentConfig& c) {
  json doc;
  doc["device_count"] = c.device_count;
  doc["ba_attachment"] = c.ba_attachment;
  doc["gateway_fraction"] = c.gateway_fraction;
  doc["users_per_gateway"] = c.users_per_gateway;
  doc["app_count"] = c.app_count;
  doc["capacity_range"] = {c.capacity_range[0], c.capacity_range[1]};
  doc["consumption_range"] = {c.consumption_range[0], c.consumption_range[1]};
  doc["latency_range"] = {c.latency_range[0], c.latency_range[1]};
  doc["cloud_link_latency"] = c.cloud_link_latency;
  doc["master_seed"] = c.master_seed;
  doc["name"] = c.name;
  json templates = json::array();
  for (const AppTemplate& t : c.templates) {
    json edges = json::array();
    for (auto [a, b] : t.edges) edges.push_back({a, b});
    templates.push_back(
        {{"name", t.name}, {"services", t.service_count}, {"edges", std::move(edges)}});
  }
  doc["templates"] = std::move(templates);
  return doc;
}

inline ExperimentConfig experiment_config_from_json(const json& doc,
                                                    ExperimentConfig base = {}) {
  ExperimentConfig c = std::move(base);
  c.device_count = doc.value("device_count", c.device_count);
  c.ba_attachment = doc.value("ba_attachment", c.ba_attachment);
  c.gateway_fraction = doc.value("gateway_fraction", c.gateway_fraction);
  c.users_per_gateway = doc.value("users_per_gateway", c.users_per_gateway);
  c.app_count = doc.value("app_count", c.app_count);
  if (doc.contains("capacity_range")) {
    c.capacity_range[0] = doc.at("capacity_range").at(0).get<int>();
    c.capacity_range[1] = doc.at("capacity_range").at(1).get<int>();
  }
  if (doc.contains("consumption_range")) {
    c.consumption_range[0] = doc.at("consumption_range").at(0).get<int>();
    c.consumption_range[1] = doc.at("consumption_range").at(1).get<int>();
  }
  if (doc.contains("latency_range")) {
    c.latency_range[0] = doc.at("latency_range").at(0).get<double>();
    c.latency_range[1] = doc.at("latency_range").at(1).get<double>();
  }
  c.cloud_link_latency = doc.value("cloud_link_latency", c.cloud_link_latency);
  c.master_seed = doc.value("master_seed", c.master_seed);
  c.name = doc.value("name", c.name);
  if (doc.contains("templates")) {
    c.templates.clear();
    for (const auto& t : doc.at("templates")) {
      std::vector<std::pair<int, int>> edges;
      for (const auto& e : t.at("edges"))
        edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
      c.templates.push_back(AppTemplate::make(t.at("name").get<std::string>(),
                                              t.at("services").get<int>(), std::move(edges)));
    }
  }
  return c;
}

/// Canonical digest of a template definition, recorded in provenance.
inline std::string template_digest(const AppTemplate& t) {
  std::ostringstream os;
  os << t.name << '|' << t.service_count;
  for (auto [a, b] : t.edges) os << '|' << a << '>' << b;
  const std::string s = os.str();
  return hex64(fnv1a64(s.data(), s.size()));
}

/// Instance document plus provenance (config echo, seed, template digests).
inline json instance_document(const ProblemInstance& inst, const ExperimentConfig& config) {
  json doc = instance_to_json(inst);
  json digests = json::array();
  for (const AppTemplate& t : config.templates) digests.push_back(template_digest(t));
  doc["provenance"] = {{"config", experiment_config_to_json(config)},
                       {"master_seed", config.master_seed},
                       {"template_digests", std::move(digests)}};
  return doc;
}

// ---------------------------------------------------------------------------
// Run artifacts
// ---------------------------------------------------------------------------

inline std::string trace_csv(const RunResult& r) {
  std::ostringstream os;
  os << "generation,best_weighted_sum,free_resources,service_spread,network_latency_ms,wall_ms\n";
  for (const GenerationTrace& t : r.traces)
    os << t.generation << ',' << format_double(t.best_weighted_sum) << ','
       << format_double(t.best_objectives.free_resources) << ','
       << format_double(t.best_objectives.service_spread) << ','
       << format_double(t.best_objectives.network_latency) << ',' << format_double(t.wall_ms)
       << '\n';
  return os.str();
}

inline std::string front_csv(const RunResult& r) {
  std::ostringstream os;
  os << "free_resources,service_spread,network_latency_ms,placement_digest\n";
  for (const FinalSolution& s : r.final_set)
    os << format_double(s.objectives.free_resources) << ','
       << format_double(s.objectives.service_spread) << ','
       << format_double(s.objectives.network_latency) << ',' << placement_digest(s.placement)
       << '\n';
  return os.str();
}

inline json result_json(const RunResult& r, const ProblemInstance& inst,
                        const AlgorithmConfig& config) {
  const WeightConfig w = config.weight_config.value_or(inst.weights);
  json doc;
  doc["algorithm"] = r.algorithm;
  doc["seed"] = r.seed;
  doc["instance"] = {{"name", inst.name},
                     {"devices", inst.infra.device_count()},
                     {"services", inst.apps.service_count()},
                     {"gateways", inst.infra.gateway_ids().size()}};
  doc["config"] = {{"population_size", config.population_size},
                   {"generations", config.generations},
                   {"mutation_prob", config.mutation_prob},
                   {"neighborhood_size", config.neighborhood_size},
                   {"moead_replacement", to_string(config.moead_replacement)},
                   {"weights",
                    {{"theta", {w.theta[0], w.theta[1], w.theta[2]}},
                     {"omega", {w.omega[0], w.omega[1], w.omega[2]}},
                     {"latency_max", w.latency_max}}}};
  doc["final_set_size"] = r.final_set.size();
  if (!r.traces.empty()) {
    const GenerationTrace& last = r.traces.back();
    doc["best"] = {{"weighted_sum", last.best_weighted_sum},
                   {"free_resources", last.best_objectives.free_resources},
                   {"service_spread", last.best_objectives.service_spread},
                   {"network_latency_ms", last.best_objectives.network_latency}};
  }
  doc["timing"] = {{"total_ms", r.total_ms}, {"generations", r.traces.size()}};
  return doc;
}

/// Objective triples from a front.csv body (header skipped).
inline std::vector<ObjectiveVector> parse_front_csv(const std::string& text) {
  std::vector<ObjectiveVector> out;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ObjectiveVector v;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &v.free_resources, &v.service_spread,
                    &v.network_latency) != 3)
      throw std::runtime_error("malformed front.csv row: " + line);
    out.push_back(v);
  }
  return out;
}

/// Per-generation wall_ms column from a trace.csv body.
inline std::vector<double> parse_trace_wall_ms(const std::string& text) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    const auto pos = line.rfind(',');
    if (pos == std::string::npos) continue;
    out.push_back(std::strtod(line.c_str() + pos + 1, nullptr));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline json read_json_file(const std::filesystem::path& path) {
  return json::parse(read_text_file(path));
}

/// Writes trace.csv, front.csv and result.json under dir.
inline void write_run_artifacts(const std::filesystem::path& dir, const RunResult& r,
                                const ProblemInstance& inst, const AlgorithmConfig& config) {
  std::filesystem::create_directories(dir);
  write_text_file(dir / "trace.csv", trace_csv(r));
  write_text_file(dir / "front.csv", front_csv(r));
  write_text_file(dir / "result.json", result_json(r, inst, config).dump(2) + "\n");
}

}  // namespace fogplace

#endif  // FOGPLACE_IO_HPP
