#include "gossipsim/plan.hpp"

#include <algorithm>
#include <sstream>

namespace gossipsim {

std::optional<std::string> check_plan(const TokenState& state, const NetworkSnapshot& snapshot,
                                      const TransferPlan& plan) {
  std::vector<std::pair<NodeId, NodeId>> directed;
  directed.reserve(plan.sends.size());
  for (const auto& s : plan.sends) {
    if (s.from >= snapshot.node_count() || s.to >= snapshot.node_count() ||
        s.token >= state.universe_size()) {
      std::ostringstream os;
      os << "send (" << s.from << "," << s.to << "," << s.token << ") out of range";
      return os.str();
    }
    if (!snapshot.has_edge(s.from, s.to)) {
      std::ostringstream os;
      os << "send on non-edge (" << s.from << "," << s.to << ")";
      return os.str();
    }
    if (!state.has(s.from, s.token)) {
      std::ostringstream os;
      os << "node " << s.from << " sends token " << s.token << " it does not hold";
      return os.str();
    }
    directed.emplace_back(s.from, s.to);
  }
  std::sort(directed.begin(), directed.end());
  const auto dup = std::adjacent_find(directed.begin(), directed.end());
  if (dup != directed.end()) {
    std::ostringstream os;
    os << "more than one send on directed edge (" << dup->first << "," << dup->second << ")";
    return os.str();
  }
  return std::nullopt;
}

}  // namespace gossipsim
