#include "gossipsim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <thread>

#include "gossipsim/adversaries.hpp"
#include "gossipsim/analysis.hpp"
#include "gossipsim/central.hpp"
#include "gossipsim/protocols.hpp"
#include "gossipsim/schedule_io.hpp"

namespace gossipsim::harness {

namespace {

std::string substitute(std::string pattern, std::size_t n, std::uint64_t seed) {
  for (const auto& [key, value] : {std::pair{std::string("{n}"), std::to_string(n)},
                                   std::pair{std::string("{seed}"), std::to_string(seed)}}) {
    for (auto pos = pattern.find(key); pos != std::string::npos; pos = pattern.find(key, pos)) {
      pattern.replace(pos, key.size(), value);
      pos += value.size();
    }
  }
  return pattern;
}

bool is_central(std::string_view name) {
  return name == "central-k-gossip" || name == "central-broadcast";
}

central::CentralParams central_params(const nlohmann::json& p, std::uint64_t seed) {
  central::CentralParams c;
  c.c_phase = p.value("c_phase", c.c_phase);
  c.c_stage = p.value("c_stage", c.c_stage);
  c.c_ex = p.value("c_ex", c.c_ex);
  c.c_cap = p.value("c_cap", c.c_cap);
  c.c_S = p.value("c_S", c.c_S);
  c.strategy = central::parse_strategy(p.value("strategy", std::string("guarded")));
  c.seed = seed;
  return c;
}

std::string round_or_timeout(const std::optional<Round>& r) {
  return r ? std::to_string(*r) : std::string("TIMEOUT");
}

std::optional<Round> parse_round(const std::string& text) {
  if (text == "TIMEOUT" || text == "ERROR" || text.empty()) return std::nullopt;
  return static_cast<Round>(std::stol(text));
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& doc) {
  ExperimentConfig c;
  const auto& adv = doc.at("adversary");
  if (adv.is_string()) {
    c.adversary.name = adv.get<std::string>();
  } else {
    c.adversary.name = adv.at("name").get<std::string>();
    c.adversary.params = adv.value("params", nlohmann::json::object());
    if (adv.contains("seed")) c.adversary.seed = adv.at("seed").get<std::uint64_t>();
  }
  const auto& proto = doc.at("protocol");
  if (proto.is_string()) {
    c.protocol.name = proto.get<std::string>();
  } else {
    c.protocol.name = proto.at("name").get<std::string>();
    c.protocol.params = proto.value("params", nlohmann::json::object());
  }
  if (doc.contains("initial")) {
    const auto& init = doc.at("initial");
    if (init.is_string()) {
      c.initial.kind = init.get<std::string>();
    } else {
      c.initial.kind = init.value("kind", c.initial.kind);
      c.initial.source = init.value("source", NodeId{0});
      c.initial.k = init.value("k", std::size_t{0});
      c.initial.file = init.value("file", std::string());
    }
  }
  c.n_values = doc.at("n").get<std::vector<std::size_t>>();
  c.seeds = doc.at("seeds").get<std::vector<std::uint64_t>>();
  c.max_rounds = doc.at("max_rounds").get<Round>();
  if (doc.contains("output")) {
    const auto& out = doc.at("output");
    c.output.csv = out.value("csv", std::string());
    c.output.summary = out.value("summary", std::string());
    c.output.plot = out.value("plot", std::string());
    c.output.trace = out.value("trace", std::string());
  }
  c.metric = doc.value("metric", c.metric);
  c.stop_after_sentinel = doc.value("stop_after_sentinel", false);
  c.validate();
  return c;
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json adv = {{"name", adversary.name}, {"params", adversary.params}};
  if (adversary.seed) adv["seed"] = *adversary.seed;
  return {{"adversary", adv},
          {"protocol", {{"name", protocol.name}, {"params", protocol.params}}},
          {"initial", {{"kind", initial.kind}, {"source", initial.source}, {"k", initial.k}, {"file", initial.file}}},
          {"n", n_values},
          {"seeds", seeds},
          {"max_rounds", max_rounds},
          {"output", {{"csv", output.csv}, {"summary", output.summary}, {"plot", output.plot}, {"trace", output.trace}}},
          {"metric", metric},
          {"stop_after_sentinel", stop_after_sentinel}};
}

std::string ExperimentConfig::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : to_json().dump()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void ExperimentConfig::validate() const {
  const auto names = adversary_names();
  if (std::find(names.begin(), names.end(), adversary.name) == names.end()) {
    throw ParameterError("unknown adversary: " + adversary.name);
  }
  if (!is_protocol_name(protocol.name)) throw ParameterError("unknown protocol: " + protocol.name);
  if (initial.kind != "single-source" && initial.kind != "one-token-per-node" && initial.kind != "file") {
    throw ParameterError("unknown initial distribution: " + initial.kind);
  }
  if (n_values.empty()) throw ParameterError("config: n list is empty");
  if (seeds.empty()) throw ParameterError("config: seeds list is empty");
  if (max_rounds < 1) throw ParameterError("config: max_rounds must be positive");
  if (metric != "completion" && metric != "sentinel") throw ParameterError("unknown metric: " + metric);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return ExperimentConfig::from_json(nlohmann::json::parse(in));
}

std::vector<std::string> adversary_names() {
  return {"static-line",      "static-cycle",       "static-complete", "static-star",
          "random-interval",  "blocker-invasive",   "blocker-oblivious", "skb-blocker",
          "ring-failure",     "center-terminal",    "file"};
}

bool is_protocol_name(std::string_view name) {
  if (is_central(name)) return true;
  try {
    protocols::make_protocol(name);
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

GeneratedSchedule generate_adversary(const std::string& name, const nlohmann::json& params,
                                     std::size_t n, std::uint64_t seed, Round horizon) {
  GeneratedSchedule g;
  const auto stat = [&](NetworkSnapshot graph) {
    g.schedule = static_schedule(graph, horizon, name);
    g.schedule.metadata()["params"] = {{"n", n}};
  };
  if (name == "static-line") {
    stat(NetworkSnapshot::line(n));
  } else if (name == "static-cycle") {
    stat(NetworkSnapshot::cycle(n));
  } else if (name == "static-complete") {
    stat(NetworkSnapshot::complete(n));
  } else if (name == "static-star") {
    stat(NetworkSnapshot::star(n));
  } else if (name == "random-interval") {
    g.schedule = adversaries::build_random_interval_connected(
        n, params.value("extra_edge_prob", 0.0), seed, horizon);
  } else if (name == "blocker-invasive" || name == "blocker-oblivious") {
    const auto p = adversaries::BlockerLineParams::make(n, seed, params.value("epsilon", 1.0 / 32.0),
                                                        params.value("c_clique", 3.0));
    g.schedule = name == "blocker-invasive" ? adversaries::build_blocker_line_invasive(p)
                                            : adversaries::build_blocker_line_oblivious(p);
  } else if (name == "skb-blocker") {
    g.schedule = adversaries::build_skb_adversary(adversaries::SkbAdversaryParams::make(n, seed));
  } else if (name == "ring-failure" || name == "center-terminal") {
    auto pr = name == "ring-failure"
                  ? adversaries::build_ring_failure(
                        n, adversaries::parse_ring_policy(params.value("policy", std::string("round-robin"))),
                        seed, horizon)
                  : adversaries::build_center_terminal(
                        n, params.value("r", std::min<std::size_t>(6, n - 1)), seed, horizon);
    g.schedule = std::move(pr.schedule);
    g.infrastructure = std::move(pr.infrastructure);
    g.systems = std::move(pr.systems);
  } else if (name == "file") {
    const auto path = substitute(params.at("path").get<std::string>(), n, seed);
    g.schedule = load_schedule(path);
    if (g.schedule.node_count() != n) throw ParameterError("schedule file " + path + " has a different n");
  } else {
    throw ParameterError("unknown adversary: " + name);
  }
  return g;
}

TokenState make_initial(const InitialSpec& spec, std::size_t n) {
  if (spec.kind == "single-source") {
    if (spec.source >= n) throw ParameterError("initial source outside node range");
    return single_source_state(n, spec.k == 0 ? n : spec.k, spec.source);
  }
  if (spec.kind == "one-token-per-node") return one_token_per_node_state(n);
  if (spec.kind == "file") {
    std::ifstream in(substitute(spec.file, n, 0));
    if (!in) throw std::runtime_error("cannot read initial distribution " + spec.file);
    std::vector<std::pair<NodeId, TokenId>> pairs;
    std::size_t universe = 0;
    NodeId v;
    TokenId t;
    while (in >> v >> t) {
      if (v >= n) throw ParameterError("initial distribution node outside range");
      pairs.emplace_back(v, t);
      universe = std::max<std::size_t>(universe, t + 1);
    }
    TokenState s(n, universe);
    for (const auto& [node, token] : pairs) s.place_initial(node, token);
    return s;
  }
  throw ParameterError("unknown initial distribution: " + spec.kind);
}

std::optional<SentinelTracker> SentinelTracker::from_metadata(const nlohmann::json& meta,
                                                              std::size_t universe) {
  if (!meta.contains("sentinels")) return std::nullopt;
  const auto& s = meta.at("sentinels");
  SentinelTracker t;
  std::size_t n = 0;
  const auto targets = s.at("targets").get<std::vector<NodeId>>();
  for (NodeId v : targets) n = std::max<std::size_t>(n, v + 1);
  t.target_.assign(n, 0);
  for (NodeId v : targets) t.target_[v] = 1;
  t.first_at_target_.assign(universe, -1);
  if (s.value("kind", std::string("explicit")) == "uncaptured") {
    t.uncaptured_ = true;
    t.captured_.assign(universe, 0);
    for (const auto& phase : meta.at("phases")) {
      const auto& c = phase.at("capture");
      t.captures_.emplace_back(c.at("round").get<Round>(), c.at("nodes").get<std::vector<NodeId>>());
      t.last_capture_ = std::max(t.last_capture_, t.captures_.back().first);
    }
  } else {
    t.explicit_sentinel_.assign(universe, 0);
    for (TokenId tok : s.at("tokens").get<std::vector<TokenId>>()) {
      if (tok < universe) t.explicit_sentinel_[tok] = 1;
    }
  }
  return t;
}

void SentinelTracker::start(const TokenState& state) {
  std::vector<Arrival> initial;
  for (NodeId v = 0; v < state.node_count(); ++v) {
    for (TokenId t : state.holdings(v)) initial.push_back({v, t});
  }
  observe(0, initial);
}

void SentinelTracker::observe(Round round, std::span<const Arrival> arrivals) {
  for (const auto& [r, nodes] : captures_) {
    if (r != round) continue;
    for (const auto& a : arrivals) {
      if (std::find(nodes.begin(), nodes.end(), a.node) != nodes.end()) captured_[a.token] = 1;
    }
  }
  for (const auto& a : arrivals) {
    if (a.node < target_.size() && target_[a.node] && first_at_target_[a.token] < 0) {
      first_at_target_[a.token] = round;
    }
  }
}

std::optional<Round> SentinelTracker::sentinel_round() const {
  std::optional<Round> best;
  for (std::size_t t = 0; t < first_at_target_.size(); ++t) {
    if (first_at_target_[t] < 0) continue;
    const bool sentinel = uncaptured_ ? !captured_[t] : explicit_sentinel_[t] != 0;
    if (sentinel && (!best || first_at_target_[t] < *best)) best = first_at_target_[t];
  }
  return best;
}

bool SentinelTracker::settled(Round now) const {
  return now >= last_capture_ && sentinel_round().has_value();
}

RunRecord run_cell(const ExperimentConfig& config, std::size_t n, std::uint64_t seed) {
  RunRecord rec;
  rec.n = n;
  rec.seed = seed;
  rec.adversary = config.adversary.name;
  rec.protocol = config.protocol.name;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    auto gen = generate_adversary(config.adversary.name, config.adversary.params, n,
                                  config.adversary.seed.value_or(seed), config.max_rounds);
    const auto& schedule = gen.schedule;
    Round max_rounds = config.max_rounds;
    if (!schedule.cyclic_extendable()) max_rounds = std::min(max_rounds, schedule.horizon());
    auto initial = make_initial(config.initial, n);

    if (is_central(config.protocol.name)) {
      const auto params = central_params(config.protocol.params, seed);
      const auto out = config.protocol.name == "central-k-gossip"
                           ? central::k_gossip_centralized(schedule, initial, params, max_rounds)
                           : central::run_n_broadcast(schedule, config.initial.source, params, max_rounds);
      rec.completion_round = out.result.completion_round;
    } else {
      auto protocol = protocols::make_protocol(config.protocol.name);
      auto tracker = SentinelTracker::from_metadata(schedule.metadata(), initial.universe_size());
      std::optional<analysis::TraceRecorder> recorder;
      if (!config.output.trace.empty()) recorder.emplace();
      RunOptions opts;
      opts.max_rounds = max_rounds;
      opts.seed = seed;
      opts.on_start = [&](const TokenState& s) {
        if (tracker) tracker->start(s);
        if (recorder) recorder->start(s);
      };
      opts.observer = [&](Round r, std::span<const Arrival> a, const TokenState&) {
        if (tracker) tracker->observe(r, a);
        if (recorder) recorder->observe(r, a);
      };
      if (tracker && config.stop_after_sentinel) {
        opts.stop = [&](const TokenState& s) { return tracker->settled(s.round() - 1); };
      }
      const auto run = run_simulation(schedule, *protocol, std::move(initial), opts);
      rec.completion_round = run.result.completion_round;
      if (tracker) {
        rec.has_sentinel = true;
        rec.sentinel_round = tracker->sentinel_round();
      }
      if (recorder) analysis::save_trace(substitute(config.output.trace, n, seed), recorder->trace());
    }
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  rec.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

unsigned default_workers() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("GOSSIPSIM_WORKERS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) hw = std::min(hw, static_cast<unsigned>(cap));
  }
  return hw;
}

std::vector<RunRecord> run_experiment(const ExperimentConfig& config, unsigned workers) {
  config.validate();
  std::vector<std::pair<std::size_t, std::uint64_t>> cells;
  for (std::size_t n : config.n_values) {
    for (std::uint64_t s : config.seeds) cells.emplace_back(n, s);
  }
  std::vector<RunRecord> records(cells.size());
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      records[i] = run_cell(config, cells[i].first, cells[i].second);
    }
  };
  const unsigned pool = std::max(1u, std::min<unsigned>(workers == 0 ? default_workers() : workers,
                                                        static_cast<unsigned>(cells.size())));
  {
    std::vector<std::jthread> threads;
    for (unsigned w = 1; w < pool; ++w) threads.emplace_back(work);
    work();
  }
  for (const auto& r : records) {
    if (!r.error.empty()) std::cerr << "run n=" << r.n << " seed=" << r.seed << " failed: " << r.error << '\n';
  }
  if (!config.output.csv.empty()) {
    write_csv(config.output.csv, records);
    std::ofstream meta(config.output.csv + ".meta.json");
    meta << nlohmann::json{{"config_hash", config.hash()}, {"config", config.to_json()}}.dump(2) << '\n';
  }
  return records;
}

std::string csv_header() { return "n,seed,adversary,protocol,completion_round,sentinel_round,wall_time_ms"; }

std::string csv_row(const RunRecord& r) {
  std::ostringstream os;
  os << r.n << ',' << r.seed << ',' << r.adversary << ',' << r.protocol << ',';
  os << (r.error.empty() ? round_or_timeout(r.completion_round) : std::string("ERROR")) << ',';
  if (r.has_sentinel) os << round_or_timeout(r.sentinel_round);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", r.wall_time_ms);
  os << ',' << buf;
  return os.str();
}

void write_csv(const std::filesystem::path& path, std::span<const RunRecord> records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << csv_header() << '\n';
  for (const auto& r : records) out << csv_row(r) << '\n';
}

std::vector<RunRecord> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != csv_header()) throw std::runtime_error("unexpected CSV header");
  std::vector<RunRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (line.back() == ',') f.emplace_back();
    if (f.size() != 7) throw std::runtime_error("malformed CSV row: " + line);
    RunRecord r;
    r.n = std::stoul(f[0]);
    r.seed = std::stoull(f[1]);
    r.adversary = f[2];
    r.protocol = f[3];
    if (f[4] == "ERROR") r.error = "error";
    r.completion_round = parse_round(f[4]);
    r.has_sentinel = !f[5].empty();
    r.sentinel_round = parse_round(f[5]);
    r.wall_time_ms = std::stod(f[6]);
    out.push_back(std::move(r));
  }
  return out;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ParameterError("slope needs at least two points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log2(x[i]);
    my += std::log2(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log2(x[i]) - mx;
    sxy += dx * (std::log2(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0) throw ParameterError("slope needs distinct x values");
  return sxy / sxx;
}

SweepSummary summarize(std::span<const RunRecord> records, const std::string& metric) {
  SweepSummary s;
  s.metric = metric;
  std::vector<std::size_t> ns;
  for (const auto& r : records) {
    if (std::find(ns.begin(), ns.end(), r.n) == ns.end()) ns.push_back(r.n);
  }
  std::sort(ns.begin(), ns.end());
  std::vector<double> xs, ys;
  for (std::size_t n : ns) {
    SweepPoint p;
    p.n = n;
    std::vector<double> values;
    for (const auto& r : records) {
      if (r.n != n || !r.error.empty()) continue;
      ++p.runs;
      const auto& v = metric == "sentinel" ? r.sentinel_round : r.completion_round;
      if (v) values.push_back(static_cast<double>(*v));
    }
    p.completed = values.size();
    if (p.runs > 0) p.timeout_fraction = 1.0 - static_cast<double>(p.completed) / static_cast<double>(p.runs);
    if (!values.empty()) {
      std::sort(values.begin(), values.end());
      const std::size_t m = values.size();
      p.median = m % 2 ? values[m / 2] : 0.5 * (values[m / 2 - 1] + values[m / 2]);
      p.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(m);
      if (p.median > 0) {
        xs.push_back(static_cast<double>(n));
        ys.push_back(p.median);
      }
    }
    s.points.push_back(p);
  }
  if (xs.size() >= 3) s.slope = loglog_slope(xs, ys);
  return s;
}

SweepSummary run_sweep(const ExperimentConfig& config, unsigned workers) {
  if (config.n_values.size() < 3) throw ParameterError("sweep needs at least three n-values");
  const auto records = run_experiment(config, workers);
  auto summary = summarize(records, config.metric);
  if (!config.output.summary.empty()) write_summary_csv(config.output.summary, summary);
  if (!config.output.plot.empty()) write_plot_data(config.output.plot, summary);
  return summary;
}

void write_summary_csv(const std::filesystem::path& path, const SweepSummary& s) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "n,runs,completed,median,mean,timeout_fraction\n";
  for (const auto& p : s.points) {
    out << p.n << ',' << p.runs << ',' << p.completed << ',' << p.median << ',' << p.mean << ','
        << p.timeout_fraction << '\n';
  }
  out << "# metric " << s.metric << '\n';
  if (s.slope) out << "# slope " << *s.slope << '\n';
}

void write_plot_data(const std::filesystem::path& path, const SweepSummary& s) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "# log2n log2median\n";
  for (const auto& p : s.points) {
    if (p.completed == 0 || p.median <= 0) continue;
    out << std::log2(static_cast<double>(p.n)) << ' ' << std::log2(p.median) << '\n';
  }
}

}  // namespace gossipsim::harness
