#include "gossipsim/analysis.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

namespace gossipsim::analysis {

void write_trace(std::ostream& out, const Trace& trace) {
  out << "GTR1 " << trace.node_count << ' ' << trace.universe << '\n';
  for (const auto& a : trace.arrivals) out << "A " << a.round << ' ' << a.node << ' ' << a.token << '\n';
}

Trace read_trace(std::istream& in) {
  Trace t;
  std::string line;
  std::size_t number = 0;
  const auto fail = [&](const std::string& why) {
    throw ScheduleError("GTR1 line " + std::to_string(number) + ": " + why);
  };
  if (!std::getline(in, line)) throw ScheduleError("GTR1: empty trace");
  ++number;
  {
    std::istringstream head(line);
    std::string magic;
    if (!(head >> magic >> t.node_count >> t.universe) || magic != "GTR1") fail("bad header");
  }
  Round last = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string tag;
    TraceArrival a;
    if (!(row >> tag >> a.round >> a.node >> a.token) || tag != "A") fail("malformed arrival");
    if (a.round < last) fail("rounds out of order");
    if (a.node >= t.node_count || a.token >= t.universe) fail("arrival out of range");
    last = a.round;
    t.arrivals.push_back(a);
  }
  return t;
}

void save_trace(const std::filesystem::path& path, const Trace& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_trace(out, trace);
}

Trace load_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return read_trace(in);
}

void TraceRecorder::start(const TokenState& state) {
  trace_.node_count = state.node_count();
  trace_.universe = state.universe_size();
  trace_.arrivals.clear();
  for (NodeId v = 0; v < state.node_count(); ++v) {
    for (TokenId t : state.holdings(v)) trace_.arrivals.push_back({0, v, t});
  }
}

void TraceRecorder::observe(Round round, std::span<const Arrival> arrivals) {
  for (const auto& a : arrivals) trace_.arrivals.push_back({round, a.node, a.token});
}

SeparationMonitor::SeparationMonitor(const nlohmann::json& meta, std::size_t node_count,
                                     std::size_t universe)
    : universe_(universe), holds_(node_count * universe, 0), lists_(node_count) {
  if (!meta.contains("phases")) throw ParameterError("separation: metadata has no segment layout");
  for (const auto& phase : meta.at("phases")) {
    for (const auto& seg : phase.at("segments")) {
      windows_.push_back({seg.at("first_round").get<Round>(), seg.at("last_round").get<Round>(),
                          seg.at("inner").get<std::vector<NodeId>>()});
      last_round_ = std::max(last_round_, windows_.back().last);
    }
  }
  stats_.threshold = std::sqrt(static_cast<double>(node_count)) / 16.0;
}

void SeparationMonitor::add(NodeId node, TokenId token) {
  auto& h = holds_[static_cast<std::size_t>(node) * universe_ + token];
  if (h) return;
  h = 1;
  lists_[node].push_back(token);
}

void SeparationMonitor::start(const TokenState& state) {
  for (NodeId v = 0; v < state.node_count(); ++v) {
    for (TokenId t : state.holdings(v)) add(v, t);
  }
}

void SeparationMonitor::check_until(Round round) {
  for (Round r = checked_ + 1; r <= round; ++r) {
    for (const auto& w : windows_) {
      if (r < w.first || r > w.last) continue;
      for (std::size_t i = 0; i + 1 < w.inner.size(); ++i) {
        for (const auto& [u, v] : {std::pair{w.inner[i], w.inner[i + 1]}, std::pair{w.inner[i + 1], w.inner[i]}}) {
          std::size_t diff = 0;
          for (TokenId t : lists_[u]) diff += holds_[static_cast<std::size_t>(v) * universe_ + t] ? 0 : 1;
          ++stats_.pairs;
          if (static_cast<double>(diff) < stats_.threshold) ++stats_.below;
        }
      }
    }
  }
  checked_ = std::max(checked_, round);
}

void SeparationMonitor::observe(Round round, std::span<const Arrival> arrivals) {
  check_until(round);
  for (const auto& a : arrivals) add(a.node, a.token);
}

void SeparationMonitor::finish(Round last_round) { check_until(last_round); }

SeparationStats measure_blocker_separation(const Trace& trace, const nlohmann::json& meta) {
  SeparationMonitor mon(meta, trace.node_count, trace.universe);
  std::vector<Arrival> batch;
  Round current = 0;
  for (const auto& a : trace.arrivals) {
    if (a.round != current) {
      mon.observe(current, batch);
      batch.clear();
      current = a.round;
    }
    batch.push_back({a.node, a.token});
  }
  mon.observe(current, batch);
  mon.finish(mon.last_segment_round());
  return mon.stats();
}

CrossingMonitor::CrossingMonitor(const nlohmann::json& meta, std::size_t node_count)
    : outer_of_(node_count) {
  if (!meta.contains("segments") || !meta.contains("blocker_token_count")) {
    throw ParameterError("crossing: metadata is not from an skb blocker schedule");
  }
  blockers_ = meta.at("blocker_token_count").get<std::size_t>();
  for (const auto& seg : meta.at("segments")) {
    segments_.push_back({seg.at("first_round").get<Round>(), seg.at("last_round").get<Round>()});
    for (NodeId v : seg.at("outer").get<std::vector<NodeId>>()) outer_of_.at(v).push_back(segments_.size() - 1);
    last_round_ = std::max(last_round_, segments_.back().last);
  }
  crossed_.assign(segments_.size(), 0);
}

void CrossingMonitor::observe(Round round, std::span<const Arrival> arrivals) {
  for (const auto& a : arrivals) {
    if (a.token < blockers_) continue;
    for (std::size_t s : outer_of_[a.node]) {
      if (round >= segments_[s].first && round <= segments_[s].last) crossed_[s] = 1;
    }
  }
}

CrossingStats CrossingMonitor::stats() const {
  CrossingStats s;
  s.segments = segments_.size();
  for (char c : crossed_) s.crossed += c ? 1 : 0;
  return s;
}

CrossingStats measure_skb_crossing(const Trace& trace, const nlohmann::json& meta) {
  CrossingMonitor mon(meta, trace.node_count);
  for (const auto& a : trace.arrivals) {
    const Arrival one{a.node, a.token};
    mon.observe(a.round, std::span<const Arrival>(&one, 1));
  }
  return mon.stats();
}

}  // namespace gossipsim::analysis
