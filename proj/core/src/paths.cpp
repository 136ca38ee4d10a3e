#include "gossipsim/paths.hpp"

#include <algorithm>
#include <sstream>

namespace gossipsim {

namespace {

Edge ordered(NodeId a, NodeId b) { return a < b ? Edge{a, b} : Edge{b, a}; }

}  // namespace

std::optional<std::string> check_path_system(const PathSystem& system,
                                             const NetworkSnapshot& infrastructure) {
  const auto n = infrastructure.node_count();
  if (system.source >= n || system.dest >= n) return "endpoint out of range";
  if (system.source == system.dest) return "source equals destination";
  if (system.paths.empty()) return "no paths";
  std::vector<char> used(n, 0);
  for (std::size_t p = 0; p < system.paths.size(); ++p) {
    const auto& path = system.paths[p];
    const std::string tag = "path " + std::to_string(p) + ": ";
    if (path.size() < 2 || path.front() != system.source || path.back() != system.dest) {
      return tag + "does not join source to destination";
    }
    for (std::size_t i = 0; i < path.size(); ++i) {
      if (path[i] >= n) return tag + "node out of range";
      if (i + 1 < path.size() && !infrastructure.has_edge(path[i], path[i + 1])) {
        return tag + "edge outside infrastructure";
      }
      if (i == 0 || i + 1 == path.size()) continue;
      if (path[i] == system.source || path[i] == system.dest) return tag + "not simple";
      if (used[path[i]]) return tag + "shares an interior node";
      used[path[i]] = 1;
    }
  }
  return std::nullopt;
}

std::size_t inactive_path_edges(const PathSystem& system, const NetworkSnapshot& snapshot) {
  std::size_t count = 0;
  for (const auto& path : system.paths) {
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      count += snapshot.has_edge(path[i], path[i + 1]) ? 0 : 1;
    }
  }
  return count;
}

PathsReport validate_paths_respecting(const AdversarySchedule& schedule,
                                      const NetworkSnapshot& infrastructure,
                                      std::span<const PathSystem> systems) {
  PathsReport report;
  const auto fail = [&](std::string why) {
    report.ok = false;
    report.violation = std::move(why);
    return report;
  };
  if (infrastructure.node_count() != schedule.node_count()) {
    return fail("infrastructure node count does not match schedule");
  }
  for (std::size_t s = 0; s < systems.size(); ++s) {
    if (auto bad = check_path_system(systems[s], infrastructure)) {
      report.system = s;
      return fail(*bad);
    }
  }

  // Infrastructure edge ids and, per edge, the systems whose paths use it.
  std::vector<Edge> infra(infrastructure.edges().begin(), infrastructure.edges().end());
  infra.erase(std::unique(infra.begin(), infra.end()), infra.end());
  const auto edge_id = [&](Edge e) {
    return static_cast<std::size_t>(std::lower_bound(infra.begin(), infra.end(), e) - infra.begin());
  };
  std::vector<std::vector<std::size_t>> users(infra.size());
  for (std::size_t s = 0; s < systems.size(); ++s) {
    for (const auto& path : systems[s].paths) {
      for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        users[edge_id(ordered(path[i], path[i + 1]))].push_back(s);
      }
    }
  }

  // Each distinct graph is checked once; violations are reported at the
  // first round that uses it.
  const auto snaps = schedule.distinct_snapshots();
  std::vector<Round> first_round(snaps.size(), 0);
  for (Round r = schedule.horizon(); r >= 1; --r) first_round[schedule.snapshot_slot(r)] = r;

  std::vector<std::size_t> count(systems.size(), 0);
  std::vector<char> present(infra.size(), 0);
  std::optional<PathsReport> worst;
  for (std::size_t slot = 0; slot < snaps.size(); ++slot) {
    if (first_round[slot] == 0) continue;
    const Round round = first_round[slot];
    std::fill(present.begin(), present.end(), 0);
    for (const Edge& e : snaps[slot].edges()) {
      const auto id = edge_id(e);
      if (id == infra.size() || !(infra[id] == e)) {
        PathsReport r;
        r.ok = false;
        r.round = round;
        r.violation = "round " + std::to_string(round) + ": edge (" + std::to_string(e.u) + "," +
                      std::to_string(e.v) + ") outside infrastructure";
        if (!worst || r.round < worst->round) worst = r;
        break;
      }
      present[id] = 1;
    }
    std::fill(count.begin(), count.end(), 0);
    for (std::size_t id = 0; id < infra.size(); ++id) {
      if (present[id]) continue;
      for (std::size_t s : users[id]) ++count[s];
    }
    for (std::size_t s = 0; s < systems.size(); ++s) {
      if (count[s] <= systems[s].budget()) continue;
      if (worst && worst->round <= round) break;
      PathsReport r;
      r.ok = false;
      r.system = s;
      r.round = round;
      r.inactive = count[s];
      r.budget = systems[s].budget();
      std::ostringstream os;
      os << "round " << round << ": system " << s << " (" << systems[s].source << "->"
         << systems[s].dest << ") has " << count[s] << " inactive path edges, budget "
         << r.budget;
      r.violation = os.str();
      worst = r;
      break;
    }
  }
  return worst ? *worst : report;
}

nlohmann::json paths_to_json(std::span<const PathSystem> systems) {
  auto out = nlohmann::json::array();
  for (const auto& s : systems) {
    out.push_back({{"source", s.source}, {"dest", s.dest}, {"paths", s.paths}});
  }
  return out;
}

std::vector<PathSystem> paths_from_json(const nlohmann::json& doc) {
  std::vector<PathSystem> out;
  for (const auto& item : doc) {
    PathSystem s;
    s.source = item.at("source").get<NodeId>();
    s.dest = item.at("dest").get<NodeId>();
    s.paths = item.at("paths").get<std::vector<std::vector<NodeId>>>();
    out.push_back(std::move(s));
  }
  return out;
}

nlohmann::json graph_to_json(const NetworkSnapshot& graph) {
  auto edges = nlohmann::json::array();
  for (const Edge& e : graph.edges()) edges.push_back({e.u, e.v});
  return {{"n", graph.node_count()}, {"edges", edges}};
}

NetworkSnapshot graph_from_json(const nlohmann::json& doc) {
  std::vector<Edge> edges;
  for (const auto& e : doc.at("edges")) edges.push_back({e.at(0).get<NodeId>(), e.at(1).get<NodeId>()});
  return NetworkSnapshot(doc.at("n").get<std::size_t>(), std::move(edges));
}

}  // namespace gossipsim
