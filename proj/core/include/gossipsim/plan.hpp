#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "gossipsim/snapshot.hpp"
#include "gossipsim/token_state.hpp"

namespace gossipsim {

struct Send {
  NodeId from = 0;
  NodeId to = 0;
  TokenId token = 0;

  friend auto operator<=>(const Send&, const Send&) = default;
};

/// Token sends executed in one round: at most one per directed edge.
struct TransferPlan {
  std::vector<Send> sends;

  void add(NodeId from, NodeId to, TokenId token) { sends.push_back({from, to, token}); }
  bool empty() const { return sends.empty(); }
  std::size_t size() const { return sends.size(); }
};

/// Returns a description of the first violated plan invariant, if any: a send
/// on a non-edge, two sends on one directed edge, or a token the sender does
/// not hold at the start of the round.
std::optional<std::string> check_plan(const TokenState& state, const NetworkSnapshot& snapshot,
                                      const TransferPlan& plan);

}  // namespace gossipsim
