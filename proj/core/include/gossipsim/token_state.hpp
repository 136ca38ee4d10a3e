#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "gossipsim/types.hpp"

namespace gossipsim {

/// Per-node token holdings and first-arrival rounds.
///
/// Tokens [0, real_token_count) are real; the rest of the universe are dummy
/// tokens that completion checks ignore. Holdings only ever grow. Each node's
/// holdings are kept in arrival order, so tokens with equal arrival round are
/// contiguous.
class TokenState {
 public:
  TokenState() = default;
  TokenState(std::size_t node_count, std::size_t universe_size);
  TokenState(std::size_t node_count, std::size_t universe_size, std::size_t real_token_count);

  std::size_t node_count() const { return node_count_; }
  std::size_t universe_size() const { return universe_size_; }
  std::size_t real_token_count() const { return real_token_count_; }
  bool is_dummy(TokenId token) const { return token >= real_token_count_; }

  /// The round that executes next; starts at 1.
  Round round() const { return round_; }

  bool has(NodeId node, TokenId token) const {
    return arrivals_[static_cast<std::size_t>(node) * universe_size_ + token] != kNoArrival;
  }
  std::optional<Round> arrival(TokenId token, NodeId node) const;
  std::span<const TokenId> holdings(NodeId node) const { return holdings_[node]; }

  std::size_t real_held(NodeId node) const { return real_held_[node]; }
  std::size_t holder_count(TokenId token) const { return holder_count_[token]; }

  bool node_complete(NodeId node) const { return real_held_[node] == real_token_count_; }
  bool complete() const { return complete_nodes_ == node_count_; }
  std::size_t complete_node_count() const { return complete_nodes_; }
  bool token_everywhere(TokenId token) const { return holder_count_[token] == node_count_; }
  std::size_t tokens_not_everywhere() const;

  /// Places a token before round 1 with arrival round 0. Returns false if the
  /// node already held it.
  bool place_initial(NodeId node, TokenId token);

  /// Adds `token` at `node` with arrival round `at`. Returns true if new.
  /// Only the engine should call this; it does not validate the round.
  bool deliver(NodeId node, TokenId token, Round at);
  void advance_round() { ++round_; }

  friend bool operator==(const TokenState& a, const TokenState& b) {
    return a.node_count_ == b.node_count_ && a.universe_size_ == b.universe_size_ &&
           a.real_token_count_ == b.real_token_count_ && a.round_ == b.round_ &&
           a.arrivals_ == b.arrivals_;
  }

 private:
  std::size_t node_count_ = 0;
  std::size_t universe_size_ = 0;
  std::size_t real_token_count_ = 0;
  Round round_ = 1;
  std::size_t complete_nodes_ = 0;
  std::vector<Round> arrivals_;
  std::vector<std::vector<TokenId>> holdings_;
  std::vector<std::size_t> real_held_;
  std::vector<std::size_t> holder_count_;
};

/// All `token_count` tokens at one node.
TokenState single_source_state(std::size_t node_count, std::size_t token_count, NodeId source);

/// Token i at node i.
TokenState one_token_per_node_state(std::size_t node_count);

}  // namespace gossipsim
