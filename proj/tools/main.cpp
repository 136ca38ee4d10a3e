// gossipsim command line: schedule generation and validation, experiment
// runs and sweeps, and trace statistics.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gossipsim/analysis.hpp"
#include "gossipsim/harness.hpp"
#include "gossipsim/paths.hpp"
#include "gossipsim/schedule_io.hpp"

namespace {

using namespace gossipsim;

nlohmann::json parse_params(const std::vector<std::string>& pairs) {
  nlohmann::json params = nlohmann::json::object();
  for (const auto& kv : pairs) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ParameterError("expected key=value, got " + kv);
    const auto key = kv.substr(0, eq);
    const auto value = kv.substr(eq + 1);
    auto parsed = nlohmann::json::parse(value, nullptr, false);
    params[key] = parsed.is_discarded() ? nlohmann::json(value) : parsed;
  }
  return params;
}

void write_json(const std::string& path, const nlohmann::json& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << doc.dump() << '\n';
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return nlohmann::json::parse(in);
}

int cmd_gen(const std::string& adversary, std::size_t n, std::uint64_t seed, const std::string& out,
            Round horizon, const std::vector<std::string>& params) {
  auto g = harness::generate_adversary(adversary, parse_params(params), n, seed, horizon);
  save_schedule(g.schedule, out);
  std::cout << "wrote " << out << " (" << g.schedule.horizon() << " rounds)\n";
  if (g.infrastructure) {
    write_json(out + ".infra.json", graph_to_json(*g.infrastructure));
    write_json(out + ".paths.json", paths_to_json(g.systems));
    std::cout << "wrote " << out << ".infra.json and " << out << ".paths.json (" << g.systems.size()
              << " path systems)\n";
  }
  return 0;
}

int cmd_validate(const std::string& path, const std::string& infra, const std::string& paths) {
  const auto schedule = load_schedule(path);
  std::cout << path << ": " << schedule.node_count() << " nodes, " << schedule.horizon()
            << " rounds, " << to_string(schedule.mode()) << ", connected\n";
  if (infra.empty() != paths.empty()) {
    std::cerr << "--infra and --paths must be given together\n";
    return 2;
  }
  if (infra.empty()) return 0;
  const auto systems = paths_from_json(read_json(paths));
  const auto report = validate_paths_respecting(schedule, graph_from_json(read_json(infra)), systems);
  if (!report) {
    std::cout << "paths-respecting: REJECT " << report.violation << '\n';
    return 1;
  }
  std::cout << "paths-respecting: OK (" << systems.size() << " systems)\n";
  return 0;
}

int cmd_run(const std::string& config_path) {
  const auto config = harness::load_config(config_path);
  const auto records = harness::run_experiment(config);
  if (config.output.csv.empty()) {
    std::cout << harness::csv_header() << '\n';
    for (const auto& r : records) std::cout << harness::csv_row(r) << '\n';
  } else {
    std::cout << "wrote " << records.size() << " rows to " << config.output.csv << '\n';
  }
  for (const auto& r : records) {
    if (!r.error.empty()) return 1;
  }
  return 0;
}

int cmd_sweep(const std::string& config_path) {
  const auto config = harness::load_config(config_path);
  const auto summary = harness::run_sweep(config);
  std::cout << "n,runs,completed,median,mean,timeout_fraction\n";
  for (const auto& p : summary.points) {
    std::cout << p.n << ',' << p.runs << ',' << p.completed << ',' << p.median << ',' << p.mean << ','
              << p.timeout_fraction << '\n';
  }
  if (!summary.slope) {
    std::cerr << "slope undefined: fewer than three n-values completed\n";
    return 2;
  }
  std::cout << "slope " << *summary.slope << '\n';
  return 0;
}

int cmd_separation(const std::string& trace_path, const std::string& meta_path) {
  const auto trace = analysis::load_trace(trace_path);
  const auto meta = read_json(meta_path);
  if (meta.value("generator", std::string()) == "skb-blocker") {
    const auto s = analysis::measure_skb_crossing(trace, meta);
    std::cout << "segments " << s.segments << " crossed " << s.crossed << " fraction " << s.fraction() << '\n';
    return 0;
  }
  const auto s = analysis::measure_blocker_separation(trace, meta);
  std::cout << "pairs " << s.pairs << " below " << s.below << " threshold " << s.threshold
            << " fraction " << s.fraction() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Token-forwarding gossip on dynamic networks"};
  app.require_subcommand(1);

  std::string adversary, out, schedule_path, infra, paths, config, trace, meta;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  Round horizon = 1000;
  std::vector<std::string> params;

  auto* gen = app.add_subcommand("gen", "Generate an adversary schedule");
  gen->add_option("--adversary", adversary, "Adversary name")->required();
  gen->add_option("--n", n, "Node count")->required();
  gen->add_option("--seed", seed, "Schedule seed")->required();
  gen->add_option("--out", out, "Output DGS1 file")->required();
  gen->add_option("--horizon", horizon, "Rounds for families without a fixed length");
  gen->add_option("--param", params, "Generator parameter key=value");

  auto* validate = app.add_subcommand("validate", "Check a schedule file");
  validate->add_option("schedule", schedule_path)->required();
  validate->add_option("--infra", infra, "Infrastructure graph (JSON)");
  validate->add_option("--paths", paths, "Path systems (JSON)");

  auto* run = app.add_subcommand("run", "Run an experiment config");
  run->add_option("--config", config)->required();

  auto* sweep = app.add_subcommand("sweep", "Run a config and fit the scaling slope");
  sweep->add_option("--config", config)->required();

  auto* sep = app.add_subcommand("separation", "Blocker statistics from a trace");
  sep->add_option("--trace", trace)->required();
  sep->add_option("--meta", meta)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_gen(adversary, n, seed, out, horizon, params);
    if (*validate) return cmd_validate(schedule_path, infra, paths);
    if (*run) return cmd_run(config);
    if (*sweep) return cmd_sweep(config);
    if (*sep) return cmd_separation(trace, meta);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
