#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gossipsim/plan.hpp"
#include "gossipsim/schedule.hpp"
#include "gossipsim/token_state.hpp"

namespace gossipsim {

struct Arrival {
  NodeId node = 0;
  TokenId token = 0;
};

/// Executes one round on `state`: every send and insertion is applied, tokens
/// that are new at their node get arrival round state.round(), and the round
/// counter advances. Throws PlanError if the plan is invalid for this state and
/// snapshot, or if an insertion is stamped with a different round.
/// Returns the (node, token) pairs that were new this round.
std::vector<Arrival> apply_round(TokenState& state, const NetworkSnapshot& snapshot,
                                 const TransferPlan& plan,
                                 std::span<const InsertionEvent> insertions);

/// A distributed token-forwarding protocol: given the state at the start of a
/// round and that round's graph, produce the round's sends.
class Protocol {
 public:
  virtual ~Protocol() = default;
  virtual std::string_view name() const = 0;
  virtual TransferPlan plan(const TokenState& state, const NetworkSnapshot& snapshot,
                            std::uint64_t seed) = 0;
};

struct SimulationResult {
  /// Round by which every node held every real token; nullopt on timeout.
  std::optional<Round> completion_round;
  Round rounds_executed = 0;
  std::vector<std::size_t> per_round_new_arrivals;
  /// Round at which each node first held every real token (0 if initially).
  std::vector<std::optional<Round>> per_node_completion;
  std::uint64_t rng_seed = 0;

  bool timed_out() const { return !completion_round.has_value(); }
  friend bool operator==(const SimulationResult&, const SimulationResult&) = default;
};

/// Drives rounds of a schedule against a token state. Used directly by the
/// centralized scheduler and by run_simulation for distributed protocols.
class RoundEngine {
 public:
  struct Options {
    /// Re-check snapshot connectivity the first time each graph is used.
    bool validate_snapshots = true;
  };

  RoundEngine(const AdversarySchedule& schedule, TokenState initial);
  RoundEngine(const AdversarySchedule& schedule, TokenState initial, Options options);

  const AdversarySchedule& schedule() const { return *schedule_; }
  const TokenState& state() const { return state_; }
  TokenState release_state() { return std::move(state_); }
  Round round() const { return state_.round(); }
  Round rounds_executed() const { return state_.round() - 1; }
  bool can_advance() const;

  /// Graph of the round about to execute.
  const NetworkSnapshot& snapshot() const;

  /// Executes the current round with `plan` plus the schedule's insertions.
  std::span<const Arrival> step(const TransferPlan& plan);

  bool complete() const { return state_.complete(); }
  SimulationResult result(std::uint64_t seed) const;

 private:
  void record(std::span<const Arrival> arrivals);

  const AdversarySchedule* schedule_;
  TokenState state_;
  Options options_;
  std::vector<bool> checked_slots_;
  std::vector<Arrival> last_arrivals_;
  std::vector<std::size_t> per_round_;
  std::vector<std::optional<Round>> node_completion_;
  std::optional<Round> completion_;
};

struct RunOptions {
  Round max_rounds = 0;
  std::uint64_t seed = 0;
  bool validate_snapshots = true;
  /// Called once with the starting state (round-0 insertions applied).
  std::function<void(const TokenState&)> on_start;
  /// Called after every round with the round index, that round's new arrivals
  /// and the state after the round.
  std::function<void(Round, std::span<const Arrival>, const TokenState&)> observer;
  /// Stops the run early when it returns true (checked after each round).
  std::function<bool(const TokenState&)> stop;
};

struct SimulationRun {
  SimulationResult result;
  TokenState final_state;
};

/// Runs `protocol` against `schedule` from `initial` until every node holds
/// every real token or `max_rounds` rounds have executed.
SimulationRun run_simulation(const AdversarySchedule& schedule, Protocol& protocol,
                             TokenState initial, const RunOptions& options);

}  // namespace gossipsim
