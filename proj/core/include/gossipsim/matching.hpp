#pragma once

#include <utility>
#include <vector>

#include "gossipsim/types.hpp"

namespace gossipsim::central {

/// Bipartite graph between a node's neighbors (left) and the tokens it could
/// receive (right); an edge (u, t) means neighbor u holds token t.
struct BipartiteInstance {
  std::vector<NodeId> left;
  std::vector<TokenId> right;
  std::vector<std::pair<NodeId, TokenId>> adjacency;
};

using Matching = std::vector<std::pair<NodeId, TokenId>>;

/// Maximum-cardinality matching (Hopcroft-Karp). Tokens are visited in
/// ascending order and each token's candidate senders in ascending order, so
/// the result is a deterministic function of the instance. Output is sorted
/// by token.
Matching max_bipartite_matching(const BipartiteInstance& instance);

}  // namespace gossipsim::central
