#ifndef FOGPLACE_CLI_HPP
#define FOGPLACE_CLI_HPP

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "fogplace/algorithms.hpp"
#include "fogplace/analysis.hpp"
#include "fogplace/experiment.hpp"
#include "fogplace/io.hpp"

namespace fogplace::cli {

namespace fs = std::filesystem;

/// Seed list syntax: "7", "0,3,9", or "0..9" (inclusive).
inline std::vector<std::uint64_t> parse_seeds(const std::string& spec) {
  std::vector<std::uint64_t> seeds;
  const auto range = spec.find("..");
  if (range != std::string::npos) {
    const std::uint64_t lo = std::stoull(spec.substr(0, range));
    const std::uint64_t hi = std::stoull(spec.substr(range + 2));
    if (hi < lo) throw std::invalid_argument("seed range is empty: " + spec);
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    return seeds;
  }
  std::size_t pos = 0;
  while (pos < spec.size()) {
    std::size_t next = spec.find(',', pos);
    if (next == std::string::npos) next = spec.size();
    seeds.push_back(std::stoull(spec.substr(pos, next - pos)));
    pos = next + 1;
  }
  if (seeds.empty()) throw std::invalid_argument("no seeds in: " + spec);
  return seeds;
}

inline int worker_count() {
  if (const char* env = std::getenv("FOGPLACE_WORKERS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

inline ExperimentConfig config_for_size(const std::string& size) {
  if (size == "100") return paper_config(100);
  if (size == "200") return paper_config(200);
  if (size == "desk") return desk_config();
  throw std::invalid_argument("unknown size '" + size + "' (expected 100, 200 or desk)");
}

struct GenerateOptions {
  std::optional<std::string> size;
  std::optional<int> devices;
  std::optional<int> apps;
  std::optional<std::uint64_t> seed;
  std::string config_path;
  std::string out = "instance.json";
};

inline ProblemInstance run_generate(const GenerateOptions& opt, std::ostream& log) {
  ExperimentConfig config = opt.size ? config_for_size(*opt.size) : ExperimentConfig{};
  if (!opt.config_path.empty())
    config = experiment_config_from_json(read_json_file(opt.config_path), std::move(config));
  if (opt.devices) config.device_count = *opt.devices;
  if (opt.apps) config.app_count = *opt.apps;
  if (opt.seed) config.master_seed = *opt.seed;
  if (!opt.size && opt.config_path.empty()) config.name = fs::path(opt.out).stem().string();

  const ProblemInstance inst = generate_instance(config);
  write_text_file(opt.out, instance_document(inst, config).dump(2) + "\n");
  log << "wrote " << opt.out << ": " << inst.infra.device_count() << " devices, "
      << inst.infra.gateway_ids().size() << " gateways, " << inst.apps.service_count()
      << " services\n";
  return inst;
}

struct RunOptions {
  std::string instance_path;
  std::string algo = "all";
  std::string seeds = "0";
  std::string out = "out";
  std::optional<int> pop;
  std::optional<int> gens;
  std::optional<double> mutation_prob;
  std::optional<int> neighborhood;
  std::string moead_replacement = "dominance";
};

inline AlgorithmConfig algorithm_config_from(const RunOptions& opt) {
  AlgorithmConfig config;
  if (opt.pop) config.population_size = *opt.pop;
  if (opt.gens) config.generations = *opt.gens;
  if (opt.mutation_prob) config.mutation_prob = *opt.mutation_prob;
  if (opt.neighborhood) {
    config.neighborhood_size = *opt.neighborhood;
  } else {
    // Small populations shrink the weight lattice below the stock T.
    const int lattice =
        static_cast<int>(generate_weight_vectors(config.population_size).size());
    config.neighborhood_size = std::min(config.neighborhood_size, lattice);
  }
  if (opt.moead_replacement == "weighted_sum")
    config.moead_replacement = MoeadReplacement::weighted_sum;
  else if (opt.moead_replacement != "dominance")
    throw std::invalid_argument("moead replacement must be dominance or weighted_sum");
  return config;
}

inline void run_runs(const RunOptions& opt, std::ostream& log) {
  const ProblemInstance inst = instance_from_json(read_json_file(opt.instance_path));
  const std::string instance_dir = fs::path(opt.instance_path).stem().string();
  const AlgorithmConfig config = algorithm_config_from(opt);

  std::vector<std::string> algos;
  if (opt.algo == "all")
    algos = algorithm_names();
  else if (opt.algo == "wsga" || opt.algo == "nsga2" || opt.algo == "moead")
    algos = {opt.algo};
  else
    throw std::invalid_argument("unknown algorithm '" + opt.algo +
                                "' (expected one of: wsga, nsga2, moead, all)");

  const std::vector<std::uint64_t> seeds = parse_seeds(opt.seeds);
  struct Task {
    std::string algo;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (const std::string& a : algos)
    for (std::uint64_t s : seeds) tasks.push_back({a, s});

  const auto execute = [&](const Task& task) {
    RngStream rng(task.seed);
    const RunResult result = run_algorithm(task.algo, inst, config, rng);
    const fs::path dir =
        fs::path(opt.out) / instance_dir / task.algo / std::to_string(task.seed);
    write_run_artifacts(dir, result, inst, config);
  };

  const int workers = std::min<int>(worker_count(), static_cast<int>(tasks.size()));
  if (workers <= 1) {
    for (const Task& t : tasks) execute(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1))
          execute(tasks[i]);
      });
    for (std::thread& t : pool) t.join();
  }
  log << "ran " << tasks.size() << " optimizations into " << opt.out << "/" << instance_dir
      << "\n";
}

struct AnalyzeOptions {
  std::string in = "out";
  std::string out;  // defaults to in
};

/// Rebuilds per-run summaries from persisted artifacts; pure function of the
/// files, so re-running it reproduces identical reports.
inline json run_analyze(const AnalyzeOptions& opt, std::ostream& log) {
  const fs::path root(opt.in);
  const fs::path out_root(opt.out.empty() ? opt.in : opt.out);
  if (!fs::is_directory(root))
    throw std::runtime_error("analyze: no such directory: " + root.string());

  struct InstanceGroup {
    ComparisonReport report;
    int services = 0;
    int devices = 0;
  };
  std::map<std::string, InstanceGroup> instances;

  std::vector<fs::path> instance_dirs;
  for (const auto& entry : fs::directory_iterator(root))
    if (entry.is_directory()) instance_dirs.push_back(entry.path());
  std::sort(instance_dirs.begin(), instance_dirs.end());

  for (const fs::path& inst_dir : instance_dirs) {
    InstanceGroup group;
    std::vector<fs::path> run_dirs;
    for (const auto& algo_entry : fs::directory_iterator(inst_dir)) {
      if (!algo_entry.is_directory()) continue;
      for (const auto& seed_entry : fs::directory_iterator(algo_entry.path()))
        if (seed_entry.is_directory() && fs::exists(seed_entry.path() / "result.json"))
          run_dirs.push_back(seed_entry.path());
    }
    std::sort(run_dirs.begin(), run_dirs.end());
    for (const fs::path& dir : run_dirs) {
      const json result = read_json_file(dir / "result.json");
      WeightConfig w;
      const auto& jw = result.at("config").at("weights");
      for (int i = 0; i < 3; ++i) {
        w.theta[i] = jw.at("theta").at(i).get<double>();
        w.omega[i] = jw.at("omega").at(i).get<double>();
      }
      w.latency_max = jw.at("latency_max").get<double>();

      RunSummary s;
      s.instance = inst_dir.filename().string();
      s.algorithm = result.at("algorithm").get<std::string>();
      s.seed = result.at("seed").get<std::uint64_t>();
      const auto front = parse_front_csv(read_text_file(dir / "front.csv"));
      if (front.empty()) throw std::runtime_error("empty front.csv in " + dir.string());
      const std::size_t best = select_best(front, w);
      s.best = front[best];
      s.best_weighted_sum = weighted_sum(front[best], w);
      s.volume = solution_spread_volume(front);
      s.total_ms = result.at("timing").at("total_ms").get<double>();
      const auto wall = parse_trace_wall_ms(read_text_file(dir / "trace.csv"));
      if (!wall.empty()) {
        double sum = 0.0;
        for (double v : wall) sum += v;
        s.mean_gen_ms = sum / static_cast<double>(wall.size());
      }
      group.report.rows.push_back(std::move(s));
      group.services = result.at("instance").at("services").get<int>();
      group.devices = result.at("instance").at("devices").get<int>();
    }
    if (group.report.rows.empty()) continue;
    std::stable_sort(group.report.rows.begin(), group.report.rows.end(),
                     [](const RunSummary& a, const RunSummary& b) {
                       if (a.algorithm != b.algorithm) return a.algorithm < b.algorithm;
                       return a.seed < b.seed;
                     });
    instances[inst_dir.filename().string()] = std::move(group);
  }
  if (instances.empty()) throw std::runtime_error("analyze: no run results under " + opt.in);

  json combined;
  for (const auto& [name, group] : instances) {
    write_text_file(out_root / name / "report.csv", report_csv(group.report));
    json rows = json::array();
    for (const RunSummary& s : group.report.rows)
      rows.push_back({{"algorithm", s.algorithm},
                      {"seed", s.seed},
                      {"best_ws", s.best_weighted_sum},
                      {"free_res", s.best.free_resources},
                      {"spread", s.best.service_spread},
                      {"latency_ms", s.best.network_latency},
                      {"volume", s.volume},
                      {"total_ms", s.total_ms},
                      {"mean_gen_ms", s.mean_gen_ms}});
    json aggregates = json::array();
    for (const AlgorithmAggregate& a : aggregate_by_algorithm(group.report))
      aggregates.push_back({{"algorithm", a.algorithm},
                            {"runs", a.runs},
                            {"mean_best_ws", a.mean_best_ws},
                            {"mean_volume", a.mean_volume},
                            {"mean_total_ms", a.mean_total_ms},
                            {"mean_gen_ms", a.mean_gen_ms}});
    combined["instances"][name] = {{"devices", group.devices},
                                   {"services", group.services},
                                   {"rows", std::move(rows)},
                                   {"aggregates", std::move(aggregates)}};
  }

  // Per-generation runtime ratio when exactly two instance sizes were run.
  if (instances.size() == 2) {
    auto it = instances.begin();
    const auto& first = *it;
    const auto& second = *std::next(it);
    const auto& small = first.second.services <= second.second.services ? first : second;
    const auto& large = first.second.services <= second.second.services ? second : first;
    json ratios;
    for (const AlgorithmAggregate& al : aggregate_by_algorithm(large.second.report))
      for (const AlgorithmAggregate& as : aggregate_by_algorithm(small.second.report))
        if (al.algorithm == as.algorithm && as.mean_gen_ms > 0.0)
          ratios[al.algorithm] = al.mean_gen_ms / as.mean_gen_ms;
    combined["runtime_ratio"] = {{"small", small.first},
                                 {"large", large.first},
                                 {"mean_gen_ms_ratio", std::move(ratios)}};
  }

  write_text_file(out_root / "report.json", combined.dump(2) + "\n");
  log << "wrote " << (out_root / "report.json").string() << "\n";
  return combined;
}

struct ReplicateOptions {
  std::string size = "100";
  std::string seeds = "0..9";
  std::uint64_t master_seed = 0;
  std::string out = "out";
  std::optional<int> pop;
  std::optional<int> gens;
};

inline void run_replicate(const ReplicateOptions& opt, std::ostream& log) {
  ExperimentConfig config = config_for_size(opt.size);
  config.master_seed = opt.master_seed;
  GenerateOptions gen;
  gen.size = opt.size;
  gen.seed = opt.master_seed;
  gen.out = (fs::path(opt.out) / (config.name + ".json")).string();
  run_generate(gen, log);

  RunOptions run;
  run.instance_path = gen.out;
  run.algo = "all";
  run.seeds = opt.seeds;
  run.out = opt.out;
  run.pop = opt.pop;
  run.gens = opt.gens;
  run_runs(run, log);

  AnalyzeOptions analyze;
  analyze.in = opt.out;
  run_analyze(analyze, log);
}

/// Entry point behind main(); returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& log = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"fogplace: evolutionary service placement over fog infrastructures"};
  app.require_subcommand(1);

  GenerateOptions gen_opt;
  auto* gen = app.add_subcommand("generate", "generate a problem instance file");
  std::string gen_size;
  gen->add_option("--size", gen_size, "preset: 100, 200 or desk");
  int gen_devices = 0, gen_apps = 0;
  gen->add_option("--devices", gen_devices, "number of fog devices");
  gen->add_option("--apps", gen_apps, "number of applications");
  std::uint64_t gen_seed = 0;
  auto* gen_seed_opt = gen->add_option("--seed", gen_seed, "master seed");
  gen->add_option("--config", gen_opt.config_path, "experiment config JSON");
  gen->add_option("--out", gen_opt.out, "output instance path");

  RunOptions run_opt;
  auto* runcmd = app.add_subcommand("run", "optimize an instance");
  runcmd->add_option("--instance", run_opt.instance_path, "instance JSON path")->required();
  runcmd->add_option("--algo", run_opt.algo, "wsga | nsga2 | moead | all");
  runcmd->add_option("--seeds", run_opt.seeds, "seed list: 7 | 0,3,9 | 0..9");
  std::uint64_t run_seed = 0;
  auto* run_seed_opt = runcmd->add_option("--seed", run_seed, "single seed (same as --seeds)");
  int run_pop = 0, run_gens = -1, run_nb = 0;
  double run_mut = -1.0;
  runcmd->add_option("--pop", run_pop, "population size");
  auto* run_gens_opt = runcmd->add_option("--gens", run_gens, "generations");
  runcmd->add_option("--mutation-prob", run_mut, "mutation probability");
  runcmd->add_option("--neighborhood", run_nb, "MOEA/D neighborhood size");
  runcmd->add_option("--moead-replacement", run_opt.moead_replacement,
                     "dominance | weighted_sum");
  runcmd->add_option("--out", run_opt.out, "output directory");

  AnalyzeOptions an_opt;
  auto* an = app.add_subcommand("analyze", "aggregate run results into reports");
  an->add_option("--in", an_opt.in, "directory with run results");
  an->add_option("--out", an_opt.out, "report output directory (default: --in)");

  ReplicateOptions rep_opt;
  auto* rep = app.add_subcommand("replicate", "generate + run all algorithms + analyze");
  rep->add_option("--size", rep_opt.size, "100, 200 or desk");
  rep->add_option("--seeds", rep_opt.seeds, "run seeds");
  rep->add_option("--seed", rep_opt.master_seed, "instance master seed");
  rep->add_option("--out", rep_opt.out, "output directory");
  int rep_pop = 0, rep_gens = -1;
  auto* rep_pop_opt = rep->add_option("--pop", rep_pop, "population size");
  auto* rep_gens_opt = rep->add_option("--gens", rep_gens, "generations");

  try {
    app.parse(argc, argv);
    if (gen->parsed()) {
      if (!gen_size.empty()) gen_opt.size = gen_size;
      if (gen_devices > 0) gen_opt.devices = gen_devices;
      if (gen_apps > 0) gen_opt.apps = gen_apps;
      if (gen_seed_opt->count() > 0) gen_opt.seed = gen_seed;
      run_generate(gen_opt, log);
    } else if (runcmd->parsed()) {
      if (run_seed_opt->count() > 0) run_opt.seeds = std::to_string(run_seed);
      if (run_pop > 0) run_opt.pop = run_pop;
      if (run_gens_opt->count() > 0) run_opt.gens = run_gens;
      if (run_mut >= 0.0) run_opt.mutation_prob = run_mut;
      if (run_nb > 0) run_opt.neighborhood = run_nb;
      run_runs(run_opt, log);
    } else if (an->parsed()) {
      run_analyze(an_opt, log);
    } else if (rep->parsed()) {
      if (rep_pop_opt->count() > 0) rep_opt.pop = rep_pop;
      if (rep_gens_opt->count() > 0) rep_opt.gens = rep_gens;
      run_replicate(rep_opt, log);
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace fogplace::cli

#endif  // FOGPLACE_CLI_HPP
