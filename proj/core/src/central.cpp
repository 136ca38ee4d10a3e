#include "gossipsim/central.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <random>
#include <stdexcept>

#include "gossipsim/protocols.hpp"
#include "gossipsim/rng.hpp"

namespace gossipsim::central {

namespace {

double log2n(std::size_t n) { return std::log2(static_cast<double>(std::max<std::size_t>(n, 2))); }

StageLog named(std::string stage) {
  StageLog log;
  log.stage = std::move(stage);
  return log;
}

std::size_t ceil_pos(double x) { return static_cast<std::size_t>(std::max(1.0, std::ceil(x))); }

std::size_t isqrt_ceil(std::size_t n) {
  auto r = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  while (r * r < n) ++r;
  while (r > 0 && (r - 1) * (r - 1) >= n) --r;
  return r;
}

bool holds_all(const TokenState& s, NodeId v, std::span<const TokenId> tokens) {
  return std::all_of(tokens.begin(), tokens.end(), [&](TokenId t) { return s.has(v, t); });
}

std::size_t full_count(const TokenState& s, std::span<const TokenId> tokens) {
  std::size_t c = 0;
  for (NodeId v = 0; v < s.node_count(); ++v) c += holds_all(s, v, tokens) ? 1 : 0;
  return c;
}

// Floods `token` until everyone holds it or `limit` rounds pass.
bool flood_token(SchedulerContext& ctx, TokenId token, std::size_t limit, StageLog& log) {
  for (std::size_t r = 0; r < limit && !ctx.state().token_everywhere(token); ++r) {
    if (!ctx.step(protocols::flood_step(token, ctx.state(), ctx.snapshot()))) return false;
    ++log.rounds;
    log.tokens_moved += ctx.last_new_arrivals();
  }
  return true;
}

}  // namespace

SchedulerContext::SchedulerContext(RoundEngine& engine, RoundGuard guard, Round max_rounds)
    : engine_(&engine), guard_(std::move(guard)), max_rounds_(max_rounds) {}

bool SchedulerContext::may_step() const {
  if (engine_->rounds_executed() >= max_rounds_) return false;
  if (!engine_->can_advance()) return false;
  return !guard_ || guard_(*engine_);
}

bool SchedulerContext::step(const TransferPlan& plan) {
  if (!may_step()) {
    stopped_ = true;
    return false;
  }
  last_new_ = 0;
  for (const auto& a : engine_->step(plan)) {
    last_new_ += engine_->state().is_dummy(a.token) ? 0 : 1;
  }
  return true;
}

BipartiteInstance exchange_instance(const TokenState& state, const NetworkSnapshot& snapshot,
                                    NodeId v, std::span<const std::uint8_t> allowed) {
  BipartiteInstance inst;
  for (NodeId u : snapshot.neighbors(v)) {
    bool any = false;
    for (TokenId t : state.holdings(u)) {
      if (!allowed.empty() && allowed[t] == 0) continue;
      if (state.has(v, t)) continue;
      inst.adjacency.emplace_back(u, t);
      inst.right.push_back(t);
      any = true;
    }
    if (any) inst.left.push_back(u);
  }
  std::sort(inst.right.begin(), inst.right.end());
  inst.right.erase(std::unique(inst.right.begin(), inst.right.end()), inst.right.end());
  return inst;
}

TransferPlan greedy_exchange_round(const TokenState& state, const NetworkSnapshot& snapshot,
                                   std::span<const std::uint8_t> allowed) {
  TransferPlan plan;
  for (NodeId v = 0; v < state.node_count(); ++v) {
    auto inst = exchange_instance(state, snapshot, v, allowed);
    if (inst.adjacency.empty()) continue;
    for (const auto& [u, t] : max_bipartite_matching(inst)) plan.add(u, v, t);
  }
  return plan;
}

ItemPool ItemPool::ranked(std::vector<TokenId> items, std::uint64_t seed) {
  ItemPool pool;
  pool.items = std::move(items);
  std::vector<std::size_t> order(pool.items.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 gen(seed);
  std::shuffle(order.begin(), order.end(), gen);
  pool.ranks.assign(order.size(), 0);
  for (std::size_t r = 0; r < order.size(); ++r) pool.ranks[order[r]] = r;
  return pool;
}

std::vector<std::size_t> ItemPool::by_rank() const {
  std::vector<std::size_t> order(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) order[ranks[i]] = i;
  return order;
}

LoadBalanceResult load_balance(SchedulerContext& ctx, std::span<const NodeId> full,
                               std::span<const NodeId> targets, const ItemPool& pool) {
  if (targets.empty()) throw ParameterError("load_balance: empty target set");
  if (pool.size() == 0) throw ParameterError("load_balance: empty pool");
  if (pool.size() < targets.size()) throw ParameterError("load_balance: pool smaller than target set");
  if (full.empty()) throw ParameterError("load_balance: empty full set");

  const std::size_t n = ctx.state().node_count();
  std::vector<char> is_target(n, 0), is_full(n, 0);
  for (NodeId v : targets) is_target.at(v) = 1;
  for (NodeId v : full) is_full.at(v) = 1;
  for (NodeId v = 0; v < n; ++v) {
    if (!is_target[v] && !is_full[v]) throw ParameterError("load_balance: F and R do not cover V");
  }
  for (NodeId v : full) {
    for (TokenId t : pool.items) {
      if (!ctx.state().has(v, t)) throw ParameterError("load_balance: F node missing a pool token");
    }
  }

  const std::size_t lo = pool.size() / targets.size();
  std::vector<std::size_t> load(n, 0);
  std::vector<std::deque<std::size_t>> held(n);

  LoadBalanceResult out;
  out.log.stage = "load-balance";
  out.assignment.assign(pool.size(), 0);

  std::vector<NodeId> sources(full.begin(), full.end());
  std::sort(sources.begin(), sources.end());
  std::vector<int> dist(n);
  std::vector<NodeId> parent(n);
  std::deque<NodeId> queue;

  for (std::size_t item : pool.by_rank()) {
    const auto& g = ctx.snapshot();
    std::fill(dist.begin(), dist.end(), -1);
    queue.clear();
    for (NodeId s : sources) {
      dist[s] = 0;
      parent[s] = s;
      queue.push_back(s);
    }
    while (!queue.empty()) {
      NodeId u = queue.front();
      queue.pop_front();
      for (NodeId w : g.neighbors(u)) {
        if (dist[w] >= 0) continue;
        dist[w] = dist[u] + 1;
        parent[w] = u;
        queue.push_back(w);
      }
    }

    NodeId target = 0;
    bool found = false;
    for (std::size_t cap : {lo, lo + 1}) {
      for (NodeId v = 0; v < n; ++v) {
        if (!is_target[v] || load[v] >= cap || dist[v] < 0) continue;
        if (!found || dist[v] < dist[target]) {
          target = v;
          found = true;
        }
      }
      if (found) break;
    }
    if (!found) throw std::logic_error("load_balance: no reachable target with room");

    std::vector<NodeId> path{target};
    while (dist[path.back()] > 0) path.push_back(parent[path.back()]);
    std::reverse(path.begin(), path.end());

    if (path.size() > 1) {
      TransferPlan plan;
      plan.add(path[0], path[1], pool.items[item]);
      std::vector<std::size_t> forwarded(path.size(), 0);
      for (std::size_t j = 1; j + 1 < path.size(); ++j) {
        if (held[path[j]].empty()) throw std::logic_error("load_balance: relay node holds no item");
        forwarded[j] = held[path[j]].front();
        plan.add(path[j], path[j + 1], pool.items[forwarded[j]]);
      }
      if (!ctx.step(plan)) {
        out.interrupted = true;
        return out;
      }
      ++out.log.rounds;
      out.log.tokens_moved += ctx.last_new_arrivals();
      for (std::size_t j = 1; j + 1 < path.size(); ++j) held[path[j]].pop_front();
      for (std::size_t j = 1; j + 1 < path.size(); ++j) {
        held[path[j + 1]].push_back(forwarded[j]);
        out.assignment[forwarded[j]] = path[j + 1];
      }
      held[path[1]].push_back(item);
      out.assignment[item] = path[1];
    } else {
      held[target].push_back(item);
      out.assignment[item] = target;
    }
    ++load[target];
  }
  out.log.overage = std::max<Round>(0, out.log.rounds - static_cast<Round>(pool.size()));
  return out;
}

std::string to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::guarded: return "guarded";
    case Strategy::pipeline: return "pipeline";
    case Strategy::flooding: return "flooding";
  }
  return "?";
}

Strategy parse_strategy(std::string_view text) {
  if (text == "guarded") return Strategy::guarded;
  if (text == "pipeline") return Strategy::pipeline;
  if (text == "flooding") return Strategy::flooding;
  throw ParameterError("unknown strategy: " + std::string(text));
}

std::string to_string(CentralStatus status) {
  switch (status) {
    case CentralStatus::completed: return "completed";
    case CentralStatus::budget_exhausted: return "budget-exhausted";
    case CentralStatus::cap_exhausted: return "cap-exhausted";
    case CentralStatus::cover_too_large: return "cover-too-large";
    case CentralStatus::interrupted: return "interrupted";
  }
  return "?";
}

BroadcastOutcome n_broadcast(SchedulerContext& ctx, NodeId source, std::span<const TokenId> tokens,
                             const CentralParams& params) {
  BroadcastOutcome out;
  const std::size_t n = ctx.state().node_count();
  if (tokens.empty()) return out;
  if (!holds_all(ctx.state(), source, tokens)) {
    throw ParameterError("n_broadcast: source does not hold every token");
  }
  std::vector<std::uint8_t> allowed(ctx.state().universe_size(), 0);
  for (TokenId t : tokens) allowed[t] = 1;

  const std::size_t stages = ceil_pos(params.c_stage * log2n(n));
  const std::size_t phases = ceil_pos(params.c_phase * std::sqrt(static_cast<double>(n)) * log2n(n));

  for (std::size_t stage = 1; stage <= stages; ++stage) {
    std::vector<NodeId> full, rest;
    for (NodeId v = 0; v < n; ++v) (holds_all(ctx.state(), v, tokens) ? full : rest).push_back(v);
    if (rest.empty()) return out;

    StageLog log;
    log.stage = "broadcast-stage-" + std::to_string(stage);
    for (std::size_t phase = 1; phase <= phases; ++phase) {
      if (full_count(ctx.state(), tokens) == n) break;
      std::vector<TokenId> items;
      const std::size_t want = std::max(tokens.size(), rest.size());
      for (std::size_t i = 0; i < want; ++i) items.push_back(tokens[i % tokens.size()]);
      const std::uint64_t key = splitmix64(params.seed ^ splitmix64(stage * 1000003ULL + phase));
      auto lb = load_balance(ctx, full, rest, ItemPool::ranked(std::move(items), key));
      log.rounds += lb.log.rounds;
      log.tokens_moved += lb.log.tokens_moved;
      if (lb.interrupted) {
        out.stages.push_back(std::move(log));
        out.status = CentralStatus::interrupted;
        return out;
      }
      for (std::size_t r = 0; r < n && full_count(ctx.state(), tokens) < n; ++r) {
        if (!ctx.step(greedy_exchange_round(ctx.state(), ctx.snapshot(), allowed))) {
          out.stages.push_back(std::move(log));
          out.status = CentralStatus::interrupted;
          return out;
        }
        ++log.rounds;
        log.tokens_moved += ctx.last_new_arrivals();
      }
      log.full_nodes.push_back(full_count(ctx.state(), tokens));
    }
    out.stages.push_back(std::move(log));
  }
  if (full_count(ctx.state(), tokens) < n) out.status = CentralStatus::budget_exhausted;
  return out;
}

TokenGrouping reduce_k_to_n(std::size_t k, std::size_t n) {
  if (k == 0 || n == 0) throw ParameterError("reduce_k_to_n: k and n must be positive");
  TokenGrouping g;
  const std::size_t groups = (k + n - 1) / n;
  for (std::size_t i = 0; i < groups; ++i) {
    auto& group = g.groups.emplace_back();
    for (std::size_t j = 0; j < n; ++j) {
      const auto t = static_cast<TokenId>(i * n + j);
      group.push_back(t);
      if (t >= k) g.dummies.push_back(t);
    }
  }
  return g;
}

namespace {

struct Pipeline {
  SchedulerContext& ctx;
  const CentralParams& params;
  std::vector<StageLog>& logs;
  std::vector<TokenId> pad;  // reserve of dummies held everywhere
  std::string stalled;

  CentralStatus run_group(std::size_t index, const std::vector<TokenId>& group, std::size_t k) {
    const std::size_t n = ctx.state().node_count();
    const std::size_t root = isqrt_ceil(n);
    const std::string tag = "group-" + std::to_string(index) + "-";
    std::vector<TokenId> real;
    for (TokenId t : group) if (t < k) real.push_back(t);

    // (a) consolidation
    StageLog cons = named(tag + "consolidation");
    for (TokenId t : real) {
      const std::size_t before = ctx.state().holder_count(t);
      const Round start = cons.rounds;
      if (!flood_token(ctx, t, root, cons)) return stop(cons, "consolidation");
      const auto spent = static_cast<std::size_t>(cons.rounds - start);
      if (ctx.state().holder_count(t) < std::min(n, before + spent)) {
        throw std::logic_error("consolidation: flooding frontier did not grow");
      }
    }
    logs.push_back(cons);

    // (b) greedy cover of the group's real tokens
    StageLog cover = named(tag + "cover");
    std::vector<char> covered(ctx.state().universe_size(), 1);
    for (TokenId t : real) covered[t] = 0;
    std::size_t left = real.size();
    std::vector<std::pair<NodeId, std::vector<TokenId>>> chosen;
    while (left > 0) {
      NodeId best = 0;
      std::size_t best_gain = 0;
      for (NodeId v = 0; v < n; ++v) {
        std::size_t gain = 0;
        for (TokenId t : ctx.state().holdings(v)) gain += covered[t] ? 0 : 1;
        if (gain > best_gain) {
          best_gain = gain;
          best = v;
        }
      }
      if (best_gain == 0) throw std::logic_error("cover: a group token is held nowhere");
      std::vector<TokenId> mine;
      for (TokenId t : ctx.state().holdings(best)) {
        if (!covered[t]) {
          covered[t] = 1;
          mine.push_back(t);
        }
      }
      left -= mine.size();
      chosen.emplace_back(best, std::move(mine));
    }
    cover.tokens_moved = chosen.size();
    logs.push_back(cover);
    const std::size_t cover_cap = ceil_pos(params.c_S * std::sqrt(static_cast<double>(n)) * log2n(n));
    if (chosen.size() > cover_cap) {
      stalled = cover.stage;
      return CentralStatus::cover_too_large;
    }

    // (c) distribution
    StageLog dist = named(tag + "distribution");
    std::vector<NodeId> everyone(n);
    std::iota(everyone.begin(), everyone.end(), 0);
    for (const auto& [u, mine] : chosen) {
      std::vector<TokenId> items;
      for (TokenId t : mine) items.insert(items.end(), root, t);
      for (std::size_t i = 0; items.size() < n; ++i) items.push_back(pad[i]);
      const NodeId f[] = {u};
      const std::uint64_t key = splitmix64(params.seed ^ splitmix64(index * 7919ULL + u + 1));
      auto lb = load_balance(ctx, f, everyone, ItemPool::ranked(std::move(items), key));
      dist.rounds += lb.log.rounds;
      dist.tokens_moved += lb.log.tokens_moved;
      dist.overage += lb.log.overage;
      if (lb.interrupted) return stop(dist, "distribution");
    }
    logs.push_back(dist);

    // (d) exchange
    StageLog ex = named(tag + "exchange");
    std::vector<std::uint8_t> allowed(ctx.state().universe_size(), 0);
    for (TokenId t : group) allowed[t] = 1;
    const std::size_t slack = ceil_pos(params.c_ex * std::sqrt(static_cast<double>(n)) * log2n(n));
    const std::size_t threshold = n > slack ? n - slack : 0;
    const auto cap = static_cast<Round>(
        std::ceil(params.c_cap * std::pow(static_cast<double>(n), 1.5) * log2n(n)));
    NodeId best = 0;
    for (;;) {
      std::size_t best_count = 0;
      for (NodeId v = 0; v < n; ++v) {
        std::size_t c = 0;
        for (TokenId t : group) c += ctx.state().has(v, t) ? 1 : 0;
        if (c > best_count) {
          best_count = c;
          best = v;
        }
      }
      if (best_count >= threshold) break;
      if (ex.rounds >= cap) {
        logs.push_back(ex);
        stalled = ex.stage;
        return CentralStatus::cap_exhausted;
      }
      if (!ctx.step(greedy_exchange_round(ctx.state(), ctx.snapshot(), allowed))) {
        return stop(ex, "exchange");
      }
      ++ex.rounds;
      ex.tokens_moved += ctx.last_new_arrivals();
    }
    logs.push_back(ex);

    // (e) broadcast what the best node holds
    std::vector<TokenId> held;
    for (TokenId t : real) if (ctx.state().has(best, t)) held.push_back(t);
    auto bc = n_broadcast(ctx, best, held, params);
    for (auto& s : bc.stages) {
      s.stage = tag + s.stage;
      logs.push_back(std::move(s));
    }
    if (bc.status == CentralStatus::interrupted) {
      stalled = tag + "broadcast";
      return bc.status;
    }

    // (f) residual tokens
    StageLog res = named(tag + "residual");
    for (TokenId t : real) {
      if (!flood_token(ctx, t, n, res)) return stop(res, "residual");
    }
    logs.push_back(res);
    return CentralStatus::completed;
  }

  CentralStatus stop(StageLog& log, const std::string&) {
    stalled = log.stage;
    logs.push_back(log);
    return CentralStatus::interrupted;
  }
};

TokenState with_dummies(const TokenState& initial, std::size_t universe) {
  TokenState s(initial.node_count(), universe, initial.real_token_count());
  for (NodeId v = 0; v < initial.node_count(); ++v) {
    for (TokenId t : initial.holdings(v)) s.place_initial(v, t);
    for (auto t = static_cast<TokenId>(initial.real_token_count()); t < universe; ++t) {
      s.place_initial(v, t);
    }
  }
  return s;
}

CentralOutcome finish(RoundEngine& engine, CentralOutcome out, std::uint64_t seed) {
  out.result = engine.result(seed);
  out.final_state = engine.release_state();
  if (out.status == CentralStatus::completed && !out.final_state.complete()) {
    out.status = CentralStatus::interrupted;
  }
  if (out.final_state.complete()) out.status = CentralStatus::completed;
  return out;
}

}  // namespace

CentralOutcome k_gossip_centralized(const AdversarySchedule& schedule, const TokenState& initial,
                                    const CentralParams& params, Round max_rounds) {
  const std::size_t n = schedule.node_count();
  const std::size_t k = initial.real_token_count();
  if (initial.node_count() != n) throw ParameterError("k_gossip: state size does not match schedule");
  if (k == 0) throw ParameterError("k_gossip: no tokens");
  for (TokenId t = 0; t < k; ++t) {
    if (initial.holder_count(t) == 0) throw ParameterError("k_gossip: a token is held nowhere");
  }

  const auto grouping = reduce_k_to_n(k, n);
  const std::size_t padded = grouping.groups.size() * n;
  RoundEngine engine(schedule, with_dummies(initial, padded + n));

  CentralOutcome out;
  const auto budget = static_cast<Round>(n * k);
  RoundGuard guard;
  if (params.strategy == Strategy::guarded) {
    guard = [n, budget](const RoundEngine& e) {
      const auto missing = static_cast<Round>(e.state().tokens_not_everywhere());
      return e.rounds_executed() + missing * static_cast<Round>(n - 1) + 1 <= budget;
    };
  }
  SchedulerContext ctx(engine, guard, max_rounds);

  if (params.strategy != Strategy::flooding && !engine.complete()) {
    Pipeline pipe{ctx, params, out.stages, {}, {}};
    for (std::size_t i = 0; i < n; ++i) pipe.pad.push_back(static_cast<TokenId>(padded + i));
    for (std::size_t g = 0; g < grouping.groups.size(); ++g) {
      auto status = pipe.run_group(g, grouping.groups[g], k);
      if (status != CentralStatus::completed) {
        out.status = status;
        out.stalled_stage = pipe.stalled;
        break;
      }
    }
  }

  const bool guard_fired = ctx.stopped() && params.strategy == Strategy::guarded &&
                           ctx.rounds_executed() < max_rounds && engine.can_advance();
  const bool pipeline_failed = params.strategy == Strategy::guarded &&
                               out.status != CentralStatus::completed;
  if (params.strategy == Strategy::flooding || guard_fired || pipeline_failed) {
    out.fell_back = params.strategy != Strategy::flooding;
    ctx.set_guard({});
    StageLog fb = named(params.strategy == Strategy::flooding ? "flooding" : "fallback-flooding");
    for (TokenId t = 0; t < k; ++t) {
      if (!flood_token(ctx, t, std::numeric_limits<std::size_t>::max(), fb)) break;
    }
    out.stages.push_back(fb);
    out.status = CentralStatus::completed;
  }
  return finish(engine, std::move(out), params.seed);
}

CentralOutcome run_n_broadcast(const AdversarySchedule& schedule, NodeId source,
                               const CentralParams& params, Round max_rounds) {
  const std::size_t n = schedule.node_count();
  RoundEngine engine(schedule, single_source_state(n, n, source));
  SchedulerContext ctx(engine, {}, max_rounds);
  std::vector<TokenId> tokens(n);
  std::iota(tokens.begin(), tokens.end(), 0);
  auto bc = n_broadcast(ctx, source, tokens, params);
  CentralOutcome out;
  out.status = bc.status;
  out.stages = std::move(bc.stages);
  if (bc.status != CentralStatus::completed) out.stalled_stage = "broadcast";
  return finish(engine, std::move(out), params.seed);
}

}  // namespace gossipsim::central
