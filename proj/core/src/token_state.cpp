#include "gossipsim/token_state.hpp"

#include <stdexcept>

namespace gossipsim {

TokenState::TokenState(std::size_t node_count, std::size_t universe_size)
    : TokenState(node_count, universe_size, universe_size) {}

TokenState::TokenState(std::size_t node_count, std::size_t universe_size,
                       std::size_t real_token_count)
    : node_count_(node_count),
      universe_size_(universe_size),
      real_token_count_(real_token_count),
      arrivals_(node_count * universe_size, kNoArrival),
      holdings_(node_count),
      real_held_(node_count, 0),
      holder_count_(universe_size, 0) {
  if (real_token_count > universe_size) {
    throw std::invalid_argument("real token count exceeds universe size");
  }
  // With no real tokens every node is trivially complete.
  if (real_token_count_ == 0) complete_nodes_ = node_count_;
}

std::optional<Round> TokenState::arrival(TokenId token, NodeId node) const {
  const Round at = arrivals_[static_cast<std::size_t>(node) * universe_size_ + token];
  if (at == kNoArrival) return std::nullopt;
  return at;
}

std::size_t TokenState::tokens_not_everywhere() const {
  std::size_t missing = 0;
  for (TokenId t = 0; t < real_token_count_; ++t) {
    if (holder_count_[t] != node_count_) ++missing;
  }
  return missing;
}

bool TokenState::place_initial(NodeId node, TokenId token) {
  if (round_ != 1) throw std::logic_error("initial placement after round 1 started");
  return deliver(node, token, 0);
}

bool TokenState::deliver(NodeId node, TokenId token, Round at) {
  if (node >= node_count_ || token >= universe_size_) {
    throw std::out_of_range("node or token outside state bounds");
  }
  Round& slot = arrivals_[static_cast<std::size_t>(node) * universe_size_ + token];
  if (slot != kNoArrival) return false;
  slot = at;
  holdings_[node].push_back(token);
  ++holder_count_[token];
  if (!is_dummy(token)) {
    if (++real_held_[node] == real_token_count_) ++complete_nodes_;
  }
  return true;
}

TokenState single_source_state(std::size_t node_count, std::size_t token_count, NodeId source) {
  TokenState state(node_count, token_count);
  for (TokenId t = 0; t < token_count; ++t) state.place_initial(source, t);
  return state;
}

TokenState one_token_per_node_state(std::size_t node_count) {
  TokenState state(node_count, node_count);
  for (NodeId v = 0; v < node_count; ++v) state.place_initial(v, v);
  return state;
}

}  // namespace gossipsim
