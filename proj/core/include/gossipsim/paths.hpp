#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gossipsim/schedule.hpp"

namespace gossipsim {

/// Vertex-disjoint source-destination paths. In any round at most
/// paths.size() - 1 of their edges may be missing.
struct PathSystem {
  NodeId source = 0;
  NodeId dest = 0;
  std::vector<std::vector<NodeId>> paths;

  std::size_t budget() const { return paths.empty() ? 0 : paths.size() - 1; }
  friend bool operator==(const PathSystem&, const PathSystem&) = default;
};

/// Structural problems with a path system, or nullopt if it is well formed.
std::optional<std::string> check_path_system(const PathSystem& system,
                                             const NetworkSnapshot& infrastructure);

struct PathsReport {
  bool ok = true;
  std::string violation;
  /// First offending system and round (round 0 for structural problems).
  std::optional<std::size_t> system;
  Round round = 0;
  std::size_t inactive = 0;
  std::size_t budget = 0;

  explicit operator bool() const { return ok; }
};

PathsReport validate_paths_respecting(const AdversarySchedule& schedule,
                                      const NetworkSnapshot& infrastructure,
                                      std::span<const PathSystem> systems);

/// Number of the system's path edges absent from `snapshot`.
std::size_t inactive_path_edges(const PathSystem& system, const NetworkSnapshot& snapshot);

nlohmann::json paths_to_json(std::span<const PathSystem> systems);
std::vector<PathSystem> paths_from_json(const nlohmann::json& doc);
nlohmann::json graph_to_json(const NetworkSnapshot& graph);
NetworkSnapshot graph_from_json(const nlohmann::json& doc);

}  // namespace gossipsim
