#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gossipsim/snapshot.hpp"

namespace gossipsim {

enum class ScheduleMode { oblivious, invasive };

std::string_view to_string(ScheduleMode mode);
ScheduleMode parse_schedule_mode(std::string_view text);

/// Adversary token insertion. An event with round r is applied together with
/// the transfers of round r (arrival round r); round 0 events are applied to
/// the initial configuration.
struct InsertionEvent {
  Round round = 0;
  NodeId node = 0;
  TokenId token = 0;

  friend auto operator<=>(const InsertionEvent&, const InsertionEvent&) = default;
};

/// A fully materialized, pre-committed sequence of per-round graphs.
///
/// Consecutive identical snapshots share storage. When `cyclic_extendable`
/// is set, rounds beyond the horizon repeat the final snapshot.
class AdversarySchedule {
 public:
  AdversarySchedule() = default;

  std::size_t node_count() const { return node_count_; }
  Round horizon() const { return static_cast<Round>(round_index_.size()); }
  ScheduleMode mode() const { return mode_; }
  bool cyclic_extendable() const { return cyclic_extendable_; }
  void set_cyclic_extendable(bool value) { cyclic_extendable_ = value; }

  /// Snapshot used in round `round` (1-based).
  const NetworkSnapshot& snapshot(Round round) const;
  std::span<const NetworkSnapshot> distinct_snapshots() const { return snapshots_; }
  std::size_t snapshot_slot(Round round) const { return round_index_.at(static_cast<std::size_t>(round - 1)); }

  std::span<const InsertionEvent> insertions() const { return insertions_; }
  std::span<const InsertionEvent> insertions_at(Round round) const;

  const nlohmann::json& metadata() const { return metadata_; }
  nlohmann::json& metadata() { return metadata_; }

  /// Checks every snapshot for connectivity and the mode/insertion rules.
  /// Throws ScheduleError naming the first offending round.
  void validate() const;

  friend bool operator==(const AdversarySchedule& a, const AdversarySchedule& b);

 private:
  friend class ScheduleBuilder;

  std::size_t node_count_ = 0;
  ScheduleMode mode_ = ScheduleMode::oblivious;
  bool cyclic_extendable_ = false;
  std::vector<NetworkSnapshot> snapshots_;
  std::vector<std::uint32_t> round_index_;
  std::vector<InsertionEvent> insertions_;
  std::vector<std::size_t> insertion_offsets_;
  nlohmann::json metadata_ = nlohmann::json::object();
};

/// Appends rounds in order and produces an AdversarySchedule.
class ScheduleBuilder {
 public:
  ScheduleBuilder(std::size_t node_count, ScheduleMode mode);

  /// Adds the next round; returns its 1-based index.
  Round add_round(NetworkSnapshot snapshot);
  /// Adds the next round reusing the previous round's graph.
  Round repeat_round();
  /// Stores a graph without adding a round; use_slot adds rounds that reuse it.
  std::size_t add_snapshot(NetworkSnapshot snapshot);
  Round use_slot(std::size_t slot);
  Round rounds() const { return static_cast<Round>(round_index_.size()); }

  void insert(Round round, NodeId node, TokenId token);

  AdversarySchedule build(nlohmann::json metadata, bool cyclic_extendable);

 private:
  std::size_t node_count_;
  ScheduleMode mode_;
  std::vector<NetworkSnapshot> snapshots_;
  std::vector<std::uint32_t> round_index_;
  std::vector<InsertionEvent> insertions_;
};

/// A single static graph repeated for `horizon` rounds.
AdversarySchedule static_schedule(const NetworkSnapshot& graph, Round horizon,
                                  std::string generator = "static");

}  // namespace gossipsim
