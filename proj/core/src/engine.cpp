#include "gossipsim/engine.hpp"

#include <sstream>

namespace gossipsim {

std::vector<Arrival> apply_round(TokenState& state, const NetworkSnapshot& snapshot,
                                 const TransferPlan& plan,
                                 std::span<const InsertionEvent> insertions) {
  if (snapshot.node_count() != state.node_count()) {
    throw PlanError("snapshot and state disagree on node count");
  }
  if (auto err = check_plan(state, snapshot, plan)) throw PlanError(*err);
  const Round now = state.round();
  for (const auto& ev : insertions) {
    if (ev.round != now) {
      std::ostringstream os;
      os << "insertion stamped for round " << ev.round << " applied in round " << now;
      throw PlanError(os.str());
    }
    if (ev.token >= state.universe_size()) throw PlanError("inserted token outside universe");
  }

  std::vector<Arrival> arrivals;
  for (const auto& s : plan.sends) {
    if (state.deliver(s.to, s.token, now)) arrivals.push_back({s.to, s.token});
  }
  for (const auto& ev : insertions) {
    if (state.deliver(ev.node, ev.token, now)) arrivals.push_back({ev.node, ev.token});
  }
  state.advance_round();
  return arrivals;
}

RoundEngine::RoundEngine(const AdversarySchedule& schedule, TokenState initial)
    : RoundEngine(schedule, std::move(initial), Options{}) {}

RoundEngine::RoundEngine(const AdversarySchedule& schedule, TokenState initial, Options options)
    : schedule_(&schedule),
      state_(std::move(initial)),
      options_(options),
      checked_slots_(schedule.distinct_snapshots().size(), false),
      node_completion_(state_.node_count()) {
  if (state_.node_count() != schedule.node_count()) {
    throw ScheduleError("schedule and initial state disagree on node count");
  }
  if (state_.round() != 1) throw std::logic_error("initial state has already advanced");
  for (const auto& ev : schedule.insertions_at(0)) {
    if (ev.token >= state_.universe_size()) throw ScheduleError("inserted token outside universe");
    state_.place_initial(ev.node, ev.token);
  }
  for (NodeId v = 0; v < state_.node_count(); ++v) {
    if (state_.node_complete(v)) node_completion_[v] = 0;
  }
  if (state_.complete()) completion_ = 0;
}

bool RoundEngine::can_advance() const {
  return schedule_->cyclic_extendable() || round() <= schedule_->horizon();
}

const NetworkSnapshot& RoundEngine::snapshot() const { return schedule_->snapshot(round()); }

std::span<const Arrival> RoundEngine::step(const TransferPlan& plan) {
  const Round now = round();
  const auto& g = snapshot();
  if (options_.validate_snapshots) {
    const auto slot = now <= schedule_->horizon() ? schedule_->snapshot_slot(now)
                                                  : schedule_->distinct_snapshots().size() - 1;
    if (!checked_slots_[slot]) {
      const auto check = validate_snapshot(g);
      if (!check) {
        throw ScheduleError("round " + std::to_string(now) + ": " + check.violation);
      }
      checked_slots_[slot] = true;
    }
  }
  last_arrivals_ = apply_round(state_, g, plan, schedule_->insertions_at(now));
  record(last_arrivals_);
  return last_arrivals_;
}

void RoundEngine::record(std::span<const Arrival> arrivals) {
  const Round done = rounds_executed();
  per_round_.push_back(arrivals.size());
  for (const auto& a : arrivals) {
    if (!node_completion_[a.node] && state_.node_complete(a.node)) node_completion_[a.node] = done;
  }
  if (!completion_ && state_.complete()) completion_ = done;
}

SimulationResult RoundEngine::result(std::uint64_t seed) const {
  SimulationResult r;
  r.completion_round = completion_;
  r.rounds_executed = rounds_executed();
  r.per_round_new_arrivals = per_round_;
  r.per_node_completion = node_completion_;
  r.rng_seed = seed;
  return r;
}

SimulationRun run_simulation(const AdversarySchedule& schedule, Protocol& protocol,
                             TokenState initial, const RunOptions& options) {
  if (options.max_rounds > schedule.horizon() && !schedule.cyclic_extendable()) {
    throw ScheduleError("max_rounds exceeds the horizon of a non-extendable schedule");
  }
  RoundEngine engine(schedule, std::move(initial),
                     RoundEngine::Options{.validate_snapshots = options.validate_snapshots});
  if (options.on_start) options.on_start(engine.state());
  while (!engine.complete() && engine.rounds_executed() < options.max_rounds) {
    const TransferPlan plan = protocol.plan(engine.state(), engine.snapshot(), options.seed);
    const Round now = engine.round();
    const auto arrivals = engine.step(plan);
    if (options.observer) options.observer(now, arrivals, engine.state());
    if (options.stop && options.stop(engine.state())) break;
  }
  SimulationRun run{engine.result(options.seed), engine.release_state()};
  return run;
}

}  // namespace gossipsim
