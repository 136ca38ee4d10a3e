#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "gossipsim/engine.hpp"
#include "gossipsim/matching.hpp"

namespace gossipsim::central {

struct StageLog {
  std::string stage;
  Round rounds = 0;
  /// New (node, token) arrivals caused by the stage's sends.
  std::size_t tokens_moved = 0;
  /// Rounds beyond the stage's nominal budget.
  Round overage = 0;
  /// n-broadcast only: full-node count after each phase.
  std::vector<std::size_t> full_nodes;
};

/// Returns false to stop the scheduler before the next round.
using RoundGuard = std::function<bool(const RoundEngine&)>;

/// What a centralized algorithm may see: the engine (current state and current
/// graph), plus a guard and a hard round limit.
class SchedulerContext {
 public:
  explicit SchedulerContext(RoundEngine& engine, RoundGuard guard = {},
                            Round max_rounds = std::numeric_limits<Round>::max());

  const TokenState& state() const { return engine_->state(); }
  const NetworkSnapshot& snapshot() const { return engine_->snapshot(); }
  RoundEngine& engine() { return *engine_; }
  Round rounds_executed() const { return engine_->rounds_executed(); }

  void set_guard(RoundGuard guard) { guard_ = std::move(guard); }
  bool may_step() const;

  /// Executes one round. Returns false (and executes nothing) if the guard,
  /// the round limit or the schedule horizon forbids it.
  bool step(const TransferPlan& plan);
  std::size_t last_new_arrivals() const { return last_new_; }
  bool stopped() const { return stopped_; }

 private:
  RoundEngine* engine_;
  RoundGuard guard_;
  Round max_rounds_;
  std::size_t last_new_ = 0;
  bool stopped_ = false;
};

/// One round of GreedyExchange: every node v takes a maximum matching between
/// its neighbors and the tokens they hold that v lacks. If `allowed` is
/// non-empty only tokens with allowed[t] != 0 are considered.
TransferPlan greedy_exchange_round(const TokenState& state, const NetworkSnapshot& snapshot,
                                   std::span<const std::uint8_t> allowed = {});

/// The matching instance for node v used by greedy_exchange_round.
BipartiteInstance exchange_instance(const TokenState& state, const NetworkSnapshot& snapshot,
                                    NodeId v, std::span<const std::uint8_t> allowed = {});

struct ItemPool {
  /// Underlying token of each item.
  std::vector<TokenId> items;
  /// Rank of each item; a permutation of [0, items.size()).
  std::vector<std::size_t> ranks;

  static ItemPool ranked(std::vector<TokenId> items, std::uint64_t seed);
  std::size_t size() const { return items.size(); }
  /// Item ids ordered by rank.
  std::vector<std::size_t> by_rank() const;
};

struct LoadBalanceResult {
  /// Node each item ended at; indexed by item id.
  std::vector<NodeId> assignment;
  StageLog log;
  bool interrupted = false;
};

/// Moves the pool's items from F to R one rank per round. Each round the rank-i
/// item leaves the F node closest to the least loaded R node and travels a
/// shortest path; every interior path node passes its oldest item one hop on.
LoadBalanceResult load_balance(SchedulerContext& ctx, std::span<const NodeId> full,
                               std::span<const NodeId> targets, const ItemPool& pool);

enum class Strategy { guarded, pipeline, flooding };
std::string to_string(Strategy strategy);
Strategy parse_strategy(std::string_view text);

struct CentralParams {
  double c_phase = 1.0;
  double c_stage = 3.0;
  double c_ex = 1.0;
  double c_cap = 8.0;
  double c_S = 2.0;
  std::uint64_t seed = 0;
  Strategy strategy = Strategy::guarded;
};

enum class CentralStatus { completed, budget_exhausted, cap_exhausted, cover_too_large, interrupted };
std::string to_string(CentralStatus status);

struct BroadcastOutcome {
  CentralStatus status = CentralStatus::completed;
  std::vector<StageLog> stages;
};

/// Spreads `tokens` (all held by `source`) to every node in stages of
/// distribute-then-exchange phases.
BroadcastOutcome n_broadcast(SchedulerContext& ctx, NodeId source, std::span<const TokenId> tokens,
                             const CentralParams& params);

struct TokenGrouping {
  /// ceil(k/n) groups of n ids each.
  std::vector<std::vector<TokenId>> groups;
  /// Ids >= k used to pad the last group.
  std::vector<TokenId> dummies;
};

TokenGrouping reduce_k_to_n(std::size_t k, std::size_t n);

struct CentralOutcome {
  SimulationResult result;
  CentralStatus status = CentralStatus::completed;
  /// Stage that stopped the pipeline, if any.
  std::string stalled_stage;
  bool fell_back = false;
  std::vector<StageLog> stages;
  TokenState final_state;
};

/// The full k-gossip pipeline. `initial` holds only real tokens; dummies are
/// added internally.
CentralOutcome k_gossip_centralized(const AdversarySchedule& schedule, const TokenState& initial,
                                    const CentralParams& params, Round max_rounds);

/// n_broadcast of every real token from `source` as a standalone run.
CentralOutcome run_n_broadcast(const AdversarySchedule& schedule, NodeId source,
                               const CentralParams& params, Round max_rounds);

}  // namespace gossipsim::central
