#include "gossipsim/schedule.hpp"

#include <algorithm>
#include <sstream>

namespace gossipsim {

std::string_view to_string(ScheduleMode mode) {
  return mode == ScheduleMode::invasive ? "invasive" : "oblivious";
}

ScheduleMode parse_schedule_mode(std::string_view text) {
  if (text == "oblivious") return ScheduleMode::oblivious;
  if (text == "invasive") return ScheduleMode::invasive;
  throw ScheduleError("unknown schedule mode '" + std::string(text) + "'");
}

const NetworkSnapshot& AdversarySchedule::snapshot(Round round) const {
  if (round < 1) throw std::out_of_range("rounds start at 1");
  if (round > horizon()) {
    if (!cyclic_extendable_ || round_index_.empty()) {
      throw ScheduleError("round " + std::to_string(round) + " beyond schedule horizon " +
                          std::to_string(horizon()));
    }
    return snapshots_[round_index_.back()];
  }
  return snapshots_[round_index_[static_cast<std::size_t>(round - 1)]];
}

std::span<const InsertionEvent> AdversarySchedule::insertions_at(Round round) const {
  if (round < 0 || round > horizon()) return {};
  const auto r = static_cast<std::size_t>(round);
  return {insertions_.data() + insertion_offsets_[r], insertions_.data() + insertion_offsets_[r + 1]};
}

void AdversarySchedule::validate() const {
  if (mode_ == ScheduleMode::oblivious && !insertions_.empty()) {
    throw ScheduleError("oblivious schedule carries insertion events");
  }
  std::vector<bool> checked(snapshots_.size(), false);
  for (std::size_t r = 0; r < round_index_.size(); ++r) {
    const auto slot = round_index_[r];
    if (checked[slot]) continue;
    checked[slot] = true;
    const auto& g = snapshots_[slot];
    if (g.node_count() != node_count_) {
      throw ScheduleError("round " + std::to_string(r + 1) + ": node count mismatch");
    }
    const auto check = validate_snapshot(g);
    if (!check) {
      std::ostringstream os;
      os << "round " << r + 1 << ": " << check.violation;
      if (!check.witness.empty()) os << " (witness node " << check.witness.front() << ")";
      throw ScheduleError(os.str());
    }
  }
  for (const auto& ev : insertions_) {
    if (ev.node >= node_count_) throw ScheduleError("insertion node out of range");
    if (ev.round < 0 || ev.round > horizon()) throw ScheduleError("insertion round out of range");
  }
}

bool operator==(const AdversarySchedule& a, const AdversarySchedule& b) {
  if (a.node_count_ != b.node_count_ || a.mode_ != b.mode_ || a.horizon() != b.horizon() ||
      a.insertions_ != b.insertions_) {
    return false;
  }
  for (Round r = 1; r <= a.horizon(); ++r) {
    if (!(a.snapshot(r) == b.snapshot(r))) return false;
  }
  return true;
}

ScheduleBuilder::ScheduleBuilder(std::size_t node_count, ScheduleMode mode)
    : node_count_(node_count), mode_(mode) {}

Round ScheduleBuilder::add_round(NetworkSnapshot snapshot) {
  if (snapshot.node_count() != node_count_) {
    throw ScheduleError("snapshot node count does not match schedule");
  }
  if (snapshots_.empty() || !(snapshots_.back() == snapshot)) {
    snapshots_.push_back(std::move(snapshot));
  }
  round_index_.push_back(static_cast<std::uint32_t>(snapshots_.size() - 1));
  return rounds();
}

Round ScheduleBuilder::repeat_round() {
  if (round_index_.empty()) throw ScheduleError("no round to repeat");
  round_index_.push_back(round_index_.back());
  return rounds();
}

std::size_t ScheduleBuilder::add_snapshot(NetworkSnapshot snapshot) {
  if (snapshot.node_count() != node_count_) {
    throw ScheduleError("snapshot node count does not match schedule");
  }
  snapshots_.push_back(std::move(snapshot));
  return snapshots_.size() - 1;
}

Round ScheduleBuilder::use_slot(std::size_t slot) {
  if (slot >= snapshots_.size()) throw ScheduleError("unknown snapshot slot");
  round_index_.push_back(static_cast<std::uint32_t>(slot));
  return rounds();
}

void ScheduleBuilder::insert(Round round, NodeId node, TokenId token) {
  if (mode_ != ScheduleMode::invasive) {
    throw ScheduleError("insertions require an invasive schedule");
  }
  if (round < 0) throw ScheduleError("insertion round must be >= 0");
  insertions_.push_back({round, node, token});
}

AdversarySchedule ScheduleBuilder::build(nlohmann::json metadata, bool cyclic_extendable) {
  AdversarySchedule s;
  s.node_count_ = node_count_;
  s.mode_ = mode_;
  s.cyclic_extendable_ = cyclic_extendable;
  s.snapshots_ = std::move(snapshots_);
  s.round_index_ = std::move(round_index_);
  std::sort(insertions_.begin(), insertions_.end());
  insertions_.erase(std::unique(insertions_.begin(), insertions_.end()), insertions_.end());
  for (const auto& ev : insertions_) {
    if (ev.round > s.horizon()) throw ScheduleError("insertion after schedule horizon");
  }
  s.insertions_ = std::move(insertions_);
  const auto h = static_cast<std::size_t>(s.horizon());
  s.insertion_offsets_.assign(h + 2, 0);
  for (const auto& ev : s.insertions_) ++s.insertion_offsets_[static_cast<std::size_t>(ev.round) + 1];
  for (std::size_t i = 1; i < s.insertion_offsets_.size(); ++i) {
    s.insertion_offsets_[i] += s.insertion_offsets_[i - 1];
  }
  s.metadata_ = std::move(metadata);
  return s;
}

AdversarySchedule static_schedule(const NetworkSnapshot& graph, Round horizon,
                                  std::string generator) {
  ScheduleBuilder builder(graph.node_count(), ScheduleMode::oblivious);
  if (horizon >= 1) {
    builder.add_round(graph);
    for (Round r = 2; r <= horizon; ++r) builder.repeat_round();
  }
  nlohmann::json meta = {{"generator", std::move(generator)}, {"params", {{"n", graph.node_count()}}}};
  return builder.build(std::move(meta), true);
}

}  // namespace gossipsim
