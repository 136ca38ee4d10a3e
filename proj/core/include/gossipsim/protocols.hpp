#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gossipsim/engine.hpp"

namespace gossipsim::protocols {

/// What one node may see at the start of a round. Diff-based protocols get
/// the neighbors' holdings; SKB protocols only see their own arrival history.
class LocalView {
 public:
  LocalView(const TokenState& state, const NetworkSnapshot& snapshot, NodeId node,
            bool neighbor_access)
      : state_(&state), snapshot_(&snapshot), node_(node), neighbor_access_(neighbor_access) {}

  NodeId node() const { return node_; }
  Round round() const { return state_->round(); }
  std::span<const TokenId> own_tokens() const { return state_->holdings(node_); }
  std::span<const NodeId> neighbors() const { return snapshot_->neighbors(node_); }
  std::optional<Round> arrival(TokenId token) const { return state_->arrival(token, node_); }
  bool holds(TokenId token) const { return state_->has(node_, token); }
  bool neighbor_holds(NodeId neighbor, TokenId token) const;

 private:
  const TokenState* state_;
  const NetworkSnapshot* snapshot_;
  NodeId node_;
  bool neighbor_access_;
};

/// Along every directed edge (u, v), u sends a token drawn uniformly from
/// S(u) \ S(v) when that set is nonempty.
TransferPlan rand_diff_step(const TokenState& state, const NetworkSnapshot& snapshot,
                            std::uint64_t seed);

/// Along every undirected edge one token is drawn uniformly from the symmetric
/// difference of the endpoints' holdings; the endpoint that holds it sends it.
TransferPlan sym_diff_step(const TokenState& state, const NetworkSnapshot& snapshot,
                           std::uint64_t seed);

/// Every holder of `token` sends it to each neighbor that lacks it.
TransferPlan flood_step(TokenId token, const TokenState& state, const NetworkSnapshot& snapshot);

/// Symmetric knowledge-based send rule. `weight` is the probability that
/// `node` broadcasts `token` in `round`, given the token's arrival round at the
/// node (nullopt if not held) and the number of tokens the node holds. The
/// remaining mass is the probability of staying silent.
struct SkbPolicy {
  using WeightFn = std::function<double(Round round, NodeId node, TokenId token,
                                        std::optional<Round> arrival, std::size_t held)>;
  std::string name;
  WeightFn weight;
  /// Marks the uniform-over-held rule, which skb_step samples directly.
  bool uniform_over_held = false;
};

SkbPolicy uniform_skb();

struct SkbViolation {
  enum class Kind { asymmetric, mass_exceeds_one, negative_weight, unheld_mass };
  Kind kind;
  NodeId node;
  TokenId token_a;
  TokenId token_b;
  double detail;
};

struct SkbPolicyReport {
  std::vector<SkbViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks the token-transmission and symmetry constraints of `policy` on every
/// node of `state` for `round`.
SkbPolicyReport check_skb_policy(const SkbPolicy& policy, const TokenState& state, Round round);

/// Each node draws at most one held token from the policy (or stays silent) and
/// sends it on every incident edge. Throws PlanError if the weights a node
/// produces violate the SKB constraints.
TransferPlan skb_step(const SkbPolicy& policy, const TokenState& state,
                      const NetworkSnapshot& snapshot, std::uint64_t seed);

class RandDiff final : public Protocol {
 public:
  std::string_view name() const override { return "rand-diff"; }
  TransferPlan plan(const TokenState& s, const NetworkSnapshot& g, std::uint64_t seed) override {
    return rand_diff_step(s, g, seed);
  }
};

class SymDiff final : public Protocol {
 public:
  std::string_view name() const override { return "sym-diff"; }
  TransferPlan plan(const TokenState& s, const NetworkSnapshot& g, std::uint64_t seed) override {
    return sym_diff_step(s, g, seed);
  }
};

class Skb final : public Protocol {
 public:
  explicit Skb(SkbPolicy policy) : policy_(std::move(policy)), name_("skb-" + policy_.name) {}
  std::string_view name() const override { return name_; }
  TransferPlan plan(const TokenState& s, const NetworkSnapshot& g, std::uint64_t seed) override {
    return skb_step(policy_, s, g, seed);
  }

 private:
  SkbPolicy policy_;
  std::string name_;
};

class Flood final : public Protocol {
 public:
  explicit Flood(TokenId token) : token_(token), name_("flood:" + std::to_string(token)) {}
  std::string_view name() const override { return name_; }
  TransferPlan plan(const TokenState& s, const NetworkSnapshot& g, std::uint64_t) override {
    return flood_step(token_, s, g);
  }

 private:
  TokenId token_;
  std::string name_;
};

/// Builds a distributed protocol from its CLI name: rand-diff, sym-diff,
/// skb-uniform, flood:<token>. Throws std::invalid_argument otherwise.
std::unique_ptr<Protocol> make_protocol(std::string_view name);

}  // namespace gossipsim::protocols
