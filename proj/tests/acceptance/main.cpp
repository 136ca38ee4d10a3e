// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gossipsim/adversaries.hpp"
#include "gossipsim/analysis.hpp"
#include "gossipsim/central.hpp"
#include "gossipsim/harness.hpp"
#include "gossipsim/matching.hpp"
#include "gossipsim/paths.hpp"
#include "gossipsim/protocols.hpp"
#include "oracles.hpp"

namespace {

using namespace gossipsim;
namespace adv = gossipsim::adversaries;
namespace cen = gossipsim::central;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double log2d(double x) { return std::log2(x); }

std::vector<NodeId> iota_nodes(std::size_t n) {
  std::vector<NodeId> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

std::filesystem::path tmp(const std::string& name) {
  const auto dir = std::filesystem::path(GOSSIPSIM_TEST_TMP) / "acceptance";
  std::filesystem::create_directories(dir);
  return dir / name;
}

// 1. LoadBalance placement and balance.
Outcome load_balance_b1_b2() {
  std::size_t violations = 0, runs = 0;
  std::string first;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    std::mt19937_64 rng(1000 + i);
    const bool ring = i % 2 == 1;
    const std::size_t n = std::uniform_int_distribution<std::size_t>(ring ? 3 : 2, 64)(rng);

    std::vector<NodeId> perm = iota_nodes(n);
    std::shuffle(perm.begin(), perm.end(), rng);
    const std::size_t nf = std::uniform_int_distribution<std::size_t>(1, n - 1)(rng);
    std::vector<NodeId> full(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(nf));
    std::vector<NodeId> targets(perm.begin() + static_cast<std::ptrdiff_t>(nf), perm.end());
    std::bernoulli_distribution also(0.2);
    for (NodeId f : full) {
      if (also(rng)) targets.push_back(f);
    }
    std::sort(targets.begin(), targets.end());
    const std::size_t pool_size =
        std::uniform_int_distribution<std::size_t>(targets.size(), 3 * targets.size())(rng);
    const std::size_t universe = std::uniform_int_distribution<std::size_t>(1, 2 * targets.size())(rng);
    std::vector<TokenId> items(pool_size);
    for (auto& t : items) t = std::uniform_int_distribution<TokenId>(0, TokenId(universe - 1))(rng);

    const auto horizon = static_cast<Round>(pool_size + 1);
    AdversarySchedule sched;
    if (ring) {
      sched = adv::build_ring_failure(n, adv::RingPolicy::random, i, horizon).schedule;
    } else {
      sched = static_schedule(adv::build_random_interval_connected(n, 0.1, i, 1).snapshot(1), horizon);
    }
    TokenState s(n, universe);
    for (NodeId f : full) {
      for (TokenId t = 0; t < universe; ++t) s.place_initial(f, t);
    }
    RoundEngine engine(sched, std::move(s));
    cen::SchedulerContext ctx(engine);
    const auto result = cen::load_balance(ctx, full, targets, cen::ItemPool::ranked(items, i));
    ++runs;
    auto bad = oracle::load_balance_violation(engine.state(), items, result.assignment, targets);
    if (!bad && result.interrupted) bad = "interrupted";
    if (!bad && result.log.rounds > static_cast<Round>(pool_size)) bad = "more rounds than items";
    if (bad) {
      if (first.empty()) first = fmt("run %llu: %s", (unsigned long long)i, bad->c_str());
      ++violations;
    }
  }
  return {violations == 0, fmt("%zu runs, %zu violations%s%s", runs, violations, first.empty() ? "" : "; ",
                               first.c_str())};
}

// 2. LoadBalance subset uniformity.
Outcome load_balance_b3() {
  const std::size_t pool = 8, targets = 4, per = 2;
  const auto sched = static_schedule(NetworkSnapshot::line(targets + 1), 20);
  // Index the C(8,2) pairs.
  std::map<std::pair<TokenId, TokenId>, std::size_t> index;
  for (TokenId a = 0; a < pool; ++a) {
    for (TokenId b = a + 1; b < pool; ++b) index.emplace(std::pair{a, b}, index.size());
  }
  const auto categories = oracle::binomial(pool, per);
  std::vector<std::vector<double>> counts(targets, std::vector<double>(categories, 0.0));
  const int seeds = 2000;
  std::vector<TokenId> items(pool);
  std::iota(items.begin(), items.end(), 0);
  const std::vector<NodeId> full{0}, r{1, 2, 3, 4};
  for (int seed = 0; seed < seeds; ++seed) {
    TokenState s(targets + 1, pool);
    for (TokenId t = 0; t < pool; ++t) s.place_initial(0, t);
    RoundEngine engine(sched, std::move(s));
    cen::SchedulerContext ctx(engine);
    const auto res = cen::load_balance(ctx, full, r, cen::ItemPool::ranked(items, seed));
    std::vector<std::vector<TokenId>> at(targets);
    for (std::size_t i = 0; i < pool; ++i) at[res.assignment[i] - 1].push_back(items[i]);
    for (std::size_t v = 0; v < targets; ++v) {
      if (at[v].size() != per) return {false, fmt("seed %d: node %zu got %zu items", seed, v + 1, at[v].size())};
      std::sort(at[v].begin(), at[v].end());
      counts[v][index.at({at[v][0], at[v][1]})] += 1;
    }
  }
  const std::vector<double> expected(categories, double(seeds) / double(categories));
  double min_p = 1.0;
  std::string ps;
  for (std::size_t v = 0; v < targets; ++v) {
    const double p = oracle::chi_square_p(counts[v], expected);
    min_p = std::min(min_p, p);
    ps += fmt("%s%.3g", v ? "," : "", p);
  }
  return {min_p > 0.001, fmt("%d seeds, %llu subsets per node, p-values [%s], need > 0.001", seeds,
                             (unsigned long long)categories, ps.c_str())};
}

// 3. GreedyExchange per-node optimality.
Outcome greedy_exchange_optimal() {
  std::mt19937_64 rng(303);
  std::size_t mismatches = 0, checked = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 9)(rng);
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
    const double p_edge = std::uniform_real_distribution<double>(0.2, 1.0)(rng);
    const double p_hold = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
    std::vector<Edge> edges;
    std::bernoulli_distribution e(p_edge), h(p_hold);
    for (NodeId a = 0; a < n; ++a) {
      for (NodeId b = a + 1; b < n; ++b) {
        if (e(rng)) edges.push_back({a, b});
      }
    }
    const NetworkSnapshot g(n, edges);
    TokenState s(n, k);
    for (NodeId v = 0; v < n; ++v) {
      for (TokenId t = 0; t < k; ++t) {
        if (h(rng)) s.place_initial(v, t);
      }
    }
    const auto plan = cen::greedy_exchange_round(s, g, {});
    if (oracle::plan_violation(s, g, plan)) {
      ++mismatches;
      continue;
    }
    for (NodeId v = 0; v < n; ++v) {
      std::set<TokenId> got;
      for (const auto& send : plan.sends) {
        if (send.to == v && !s.has(v, send.token)) got.insert(send.token);
      }
      ++checked;
      if (got.size() != oracle::exchange_optimum(s, g, v)) ++mismatches;
    }
  }
  return {mismatches == 0, fmt("500 instances, %zu node checks, %zu mismatches", checked, mismatches)};
}

// 4. Matching cardinality.
Outcome matching_oracle() {
  std::mt19937_64 rng(404);
  std::size_t mismatches = 0;
  for (int i = 0; i < 500; ++i) {
    cen::BipartiteInstance inst;
    const int nl = std::uniform_int_distribution<int>(1, 8)(rng);
    const int nr = std::uniform_int_distribution<int>(1, 8)(rng);
    std::bernoulli_distribution edge(std::uniform_real_distribution<double>(0.05, 0.95)(rng));
    for (int a = 0; a < nl; ++a) inst.left.push_back(static_cast<NodeId>(a));
    for (int b = 0; b < nr; ++b) inst.right.push_back(static_cast<TokenId>(b));
    for (auto u : inst.left) {
      for (auto t : inst.right) {
        if (edge(rng)) inst.adjacency.push_back({u, t});
      }
    }
    const auto m = cen::max_bipartite_matching(inst);
    std::set<NodeId> ls;
    std::set<TokenId> rs;
    bool valid = true;
    for (const auto& p : m) {
      valid = valid && ls.insert(p.first).second && rs.insert(p.second).second &&
              std::find(inst.adjacency.begin(), inst.adjacency.end(), p) != inst.adjacency.end();
    }
    if (!valid || m.size() != oracle::brute_force_matching(inst)) ++mismatches;
  }
  return {mismatches == 0, fmt("500 instances, %zu mismatches", mismatches)};
}

// 5. Centralized k-gossip on random schedules.
Outcome central_k_gossip() {
  struct Cell {
    std::size_t n, k;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (std::size_t n : {16u, 32u, 64u}) {
    for (std::size_t k : {n / 2, n, 2 * n}) {
      for (std::uint64_t seed = 1; seed <= 5; ++seed) cells.push_back({n, k, seed});
    }
  }
  struct Result {
    bool done = false;
    Round rounds = 0;
    double bound = 0;
    bool fell_back = false;
  };
  std::vector<std::future<Result>> futures;
  for (const auto& c : cells) {
    futures.push_back(std::async(std::launch::async, [c] {
      const auto budget = static_cast<Round>(c.n * c.k);
      const auto sched = adv::build_random_interval_connected(c.n, 0.0, c.seed, budget);
      std::mt19937_64 rng(c.seed * 7919 + c.k);
      TokenState s(c.n, c.k);
      for (TokenId t = 0; t < c.k; ++t) {
        s.place_initial(std::uniform_int_distribution<NodeId>(0, NodeId(c.n - 1))(rng), t);
      }
      const auto out = cen::k_gossip_centralized(sched, s, {.seed = c.seed}, budget);
      const double lg = log2d(double(c.n));
      Result r;
      r.bound = std::min(double(c.n * c.k), 64.0 * double(c.n + c.k) * std::sqrt(double(c.n)) * lg * lg);
      r.done = out.result.completion_round.has_value();
      r.rounds = out.result.completion_round.value_or(out.result.rounds_executed);
      r.fell_back = out.fell_back;
      return r;
    }));
  }
  std::size_t completed = 0, within = 0, fallbacks = 0;
  double worst = 0;
  for (auto& f : futures) {
    const auto r = f.get();
    completed += r.done ? 1 : 0;
    within += r.done && r.rounds <= r.bound ? 1 : 0;
    fallbacks += r.fell_back ? 1 : 0;
    worst = std::max(worst, double(r.rounds) / r.bound);
  }
  return {completed == cells.size() && within == cells.size(),
          fmt("%zu/%zu completed, %zu within min(nk, 64(n+k)sqrt(n)log2^2 n), worst rounds/bound %.3f, "
              "%zu fell back to flooding",
              completed, cells.size(), within, worst, fallbacks)};
}

// 6. Rand-Diff against the oblivious blocker line.
Outcome rand_diff_lower_bound_trend() {
  auto c = harness::ExperimentConfig::from_json(nlohmann::json::parse(R"({
    "adversary": "blocker-oblivious",
    "protocol": "rand-diff",
    "initial": {"kind": "single-source", "source": 0},
    "n": [64, 144, 256, 400],
    "seeds": [1, 2, 3, 4, 5],
    "max_rounds": 20000,
    "metric": "sentinel",
    "stop_after_sentinel": true
  })"));
  c.output.csv = tmp("trend.csv").string();
  const auto summary = harness::run_sweep(c);
  std::string medians;
  double m400 = 0;
  for (const auto& p : summary.points) {
    medians += fmt("%sn=%zu:%g", medians.empty() ? "" : " ", p.n, p.median);
    if (p.n == 400) m400 = p.median;
  }
  const double slope = summary.slope.value_or(0.0);
  const bool ok = summary.slope && slope >= 1.2 && m400 >= 4000;
  return {ok, fmt("sentinel medians %s; slope %.3f (need >= 1.2); median(400) %g (need >= 4000)",
                  medians.c_str(), slope, m400)};
}

// 7. Blocker separation on the invasive line.
Outcome blocker_separation() {
  const std::size_t n = 1024;
  std::size_t pairs = 0, below = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto p = adv::BlockerLineParams::make(n, seed);
    const auto sched = adv::build_blocker_line_invasive(p);
    analysis::SeparationMonitor mon(sched.metadata(), n, n);
    protocols::RandDiff proto;
    RunOptions opts;
    opts.max_rounds = mon.last_segment_round();
    opts.seed = seed;
    opts.on_start = [&](const TokenState& s) { mon.start(s); };
    opts.observer = [&](Round r, std::span<const Arrival> a, const TokenState&) { mon.observe(r, a); };
    run_simulation(sched, proto, single_source_state(n, n, 0), opts);
    mon.finish(mon.last_segment_round());
    pairs += mon.stats().pairs;
    below += mon.stats().below;
  }
  const double frac = pairs ? double(below) / double(pairs) : 1.0;
  return {frac < 0.05, fmt("n=1024, 5 seeds: %zu of %zu inner pairs below sqrt(n)/16, fraction %.4f (need < 0.05)",
                           below, pairs, frac)};
}

// 8. SKB blocking at n = 4096.
Outcome skb_blocking() {
  const std::size_t n = 4096;
  std::size_t segments = 0, crossed = 0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto sched = adv::build_skb_adversary(adv::SkbAdversaryParams::make(n, seed));
    analysis::CrossingMonitor mon(sched.metadata(), n);
    protocols::Skb proto(protocols::uniform_skb());
    RunOptions opts;
    opts.max_rounds = mon.last_segment_round();
    opts.seed = seed;
    opts.validate_snapshots = false;
    opts.observer = [&](Round r, std::span<const Arrival> a, const TokenState&) { mon.observe(r, a); };
    run_simulation(sched, proto, single_source_state(n, n, 0), opts);
    segments += mon.stats().segments;
    crossed += mon.stats().crossed;
  }
  const double frac = segments ? double(crossed) / double(segments) : 1.0;
  return {frac <= 0.05, fmt("n=4096, 3 seeds: %zu of %zu segments crossed, fraction %.4f (need <= 0.05)", crossed,
                            segments, frac)};
}

// 9. Rand-Diff on the failing ring.
Outcome ring_upper_bound() {
  std::size_t runs = 0, ok = 0;
  std::string raw;
  for (std::size_t n : {32u, 64u, 128u}) {
    const double lg = log2d(double(n));
    const double budget = 8.0 * std::pow(double(n), 5.0 / 3.0) * lg * lg * lg;
    const auto horizon = static_cast<Round>(std::ceil(budget));
    for (auto policy : {adv::RingPolicy::round_robin, adv::RingPolicy::random, adv::RingPolicy::fixed_edge}) {
      std::vector<Round> rounds;
      for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto ring = adv::build_ring_failure(n, policy, seed, horizon);
        protocols::RandDiff proto;
        const auto run = run_simulation(ring.schedule, proto, one_token_per_node_state(n),
                                        {.max_rounds = horizon, .seed = seed, .validate_snapshots = false});
        ++runs;
        if (run.result.completion_round && *run.result.completion_round <= budget) ++ok;
        rounds.push_back(run.result.completion_round.value_or(-1));
      }
      raw += fmt("%sn=%zu/%s:", raw.empty() ? "" : " ", n, adv::to_string(policy).c_str());
      for (std::size_t i = 0; i < rounds.size(); ++i) raw += fmt("%s%d", i ? "," : "", rounds[i]);
    }
  }
  return {ok == runs, fmt("%zu/%zu completed within 8 n^(5/3) log2^3 n; raw rounds %s", ok, runs, raw.c_str())};
}

// 10. Paths-respecting validator.
Outcome validator_correctness() {
  std::vector<adv::PathsRespecting> generated;
  for (std::size_t n = 3; n <= 12; ++n) {
    for (auto policy : {adv::RingPolicy::round_robin, adv::RingPolicy::random, adv::RingPolicy::fixed_edge}) {
      for (std::uint64_t seed = 1; seed <= 2; ++seed) generated.push_back(adv::build_ring_failure(n, policy, seed, 30));
    }
  }
  for (std::size_t n = 4; n <= 14; ++n) {
    for (std::size_t r = 3; r + 1 <= n; ++r) generated.push_back(adv::build_center_terminal(n, r, n * 31 + r, 20));
  }
  std::size_t accepted = 0;
  for (const auto& g : generated) {
    accepted += validate_paths_respecting(g.schedule, g.infrastructure, g.systems) ? 1 : 0;
  }

  // Mutants: in a round where some system already has its full budget of
  // inactive edges, drop one more of its active path edges.
  std::mt19937_64 rng(1010);
  std::size_t mutants = 0, rejected = 0, attempts = 0;
  while (mutants < 100 && attempts < 100000) {
    ++attempts;
    const auto& g = generated[std::uniform_int_distribution<std::size_t>(0, generated.size() - 1)(rng)];
    const Round t = std::uniform_int_distribution<Round>(1, g.schedule.horizon())(rng);
    const auto& snap = g.schedule.snapshot(t);
    std::vector<std::size_t> tight;
    for (std::size_t i = 0; i < g.systems.size(); ++i) {
      if (inactive_path_edges(g.systems[i], snap) == g.systems[i].budget()) tight.push_back(i);
    }
    if (tight.empty()) continue;
    const auto& sys = g.systems[tight[std::uniform_int_distribution<std::size_t>(0, tight.size() - 1)(rng)]];
    std::vector<Edge> active;
    for (const auto& path : sys.paths) {
      for (std::size_t j = 0; j + 1 < path.size(); ++j) {
        if (snap.has_edge(path[j], path[j + 1])) {
          active.push_back({std::min(path[j], path[j + 1]), std::max(path[j], path[j + 1])});
        }
      }
    }
    if (active.empty()) continue;
    const Edge drop = active[std::uniform_int_distribution<std::size_t>(0, active.size() - 1)(rng)];
    ScheduleBuilder b(g.schedule.node_count(), ScheduleMode::oblivious);
    for (Round r = 1; r <= g.schedule.horizon(); ++r) {
      if (r != t) {
        b.add_round(g.schedule.snapshot(r));
        continue;
      }
      std::vector<Edge> edges;
      for (const auto& e : snap.edges()) {
        if (!(e == drop)) edges.push_back(e);
      }
      b.add_round(NetworkSnapshot(g.schedule.node_count(), std::move(edges)));
    }
    const auto mutant = b.build({}, false);
    const auto report = validate_paths_respecting(mutant, g.infrastructure, g.systems);
    ++mutants;
    if (!report && report.round == t && report.inactive > report.budget) ++rejected;
  }
  const bool ok = accepted == generated.size() && mutants == 100 && rejected == 100;
  return {ok, fmt("accepted %zu/%zu generated pairs; rejected %zu/%zu mutants", accepted, generated.size(),
                  rejected, mutants)};
}

// 11. Engine invariants under fuzzing.
Outcome engine_invariants() {
  const std::vector<std::string> adversaries{"random-interval", "ring-failure",     "center-terminal",
                                             "blocker-invasive", "blocker-oblivious", "skb-blocker",
                                             "static-line",      "static-star"};
  const std::vector<std::string> protocol_names{"rand-diff", "sym-diff", "skb-uniform", "flood:0",
                                                "greedy-exchange"};
  std::mt19937_64 rng(1111);
  std::size_t rounds = 0, runs = 0;
  std::map<std::string, std::size_t> violations;
  std::set<std::string> adv_seen, proto_seen;
  while (rounds < 10000) {
    const auto& a = adversaries[runs % adversaries.size()];
    const auto& pname = protocol_names[(runs / adversaries.size()) % protocol_names.size()];
    ++runs;
    const bool blocker = a.starts_with("blocker") || a == "skb-blocker";
    const std::size_t n = blocker ? 64 : std::uniform_int_distribution<std::size_t>(4, 40)(rng);
    const std::uint64_t seed = rng();
    nlohmann::json params = nlohmann::json::object();
    if (a == "random-interval") params["extra_edge_prob"] = std::uniform_real_distribution<double>(0, 0.3)(rng);
    if (a == "ring-failure") params["policy"] = "random";
    const auto gen = harness::generate_adversary(a, params, n, seed, 60);
    adv_seen.insert(a);
    proto_seen.insert(pname);

    TokenState init(n, n);
    std::bernoulli_distribution hold(2.0 / double(n));
    for (TokenId t = 0; t < n; ++t) {
      init.place_initial(std::uniform_int_distribution<NodeId>(0, NodeId(n - 1))(rng), t);
      for (NodeId v = 0; v < n; ++v) {
        if (hold(rng)) init.place_initial(v, t);
      }
    }
    std::unique_ptr<Protocol> proto;
    if (pname != "greedy-exchange") proto = protocols::make_protocol(pname);

    RoundEngine engine(gen.schedule, std::move(init), {.validate_snapshots = false});
    const Round limit = std::min<Round>(60, gen.schedule.horizon());
    while (engine.rounds_executed() < limit && !engine.complete() && rounds < 10000) {
      const auto& g = engine.snapshot();
      const Round r = engine.round();
      if (!oracle::connected(g)) ++violations["connectivity"];
      const auto before = engine.state();
      const auto plan = proto ? proto->plan(before, g, seed) : cen::greedy_exchange_round(before, g, {});
      if (oracle::plan_violation(before, g, plan)) ++violations["plan validity"];
      std::map<std::pair<NodeId, NodeId>, int> per_edge;
      for (const auto& s : plan.sends) {
        if (++per_edge[{s.from, s.to}] > 1) ++violations["edge capacity"];
      }
      std::vector<Arrival> arrivals;
      try {
        const auto got = engine.step(plan);
        arrivals.assign(got.begin(), got.end());
      } catch (const std::exception&) {
        ++violations["engine rejected plan"];
        break;
      }
      ++rounds;
      const auto& after = engine.state();
      std::vector<std::size_t> gained(n, 0);
      for (NodeId v = 0; v < n; ++v) {
        for (TokenId t = 0; t < after.universe_size(); ++t) {
          if (before.has(v, t)) {
            if (!after.has(v, t) || after.arrival(t, v) != before.arrival(t, v)) ++violations["monotonicity"];
          } else if (after.has(v, t)) {
            ++gained[v];
            if (after.arrival(t, v) != r) ++violations["arrival stamp"];
          }
        }
      }
      std::vector<std::size_t> inserted(n, 0);
      for (const auto& ev : gen.schedule.insertions_at(r)) inserted[ev.node] += 1;
      for (NodeId v = 0; v < n; ++v) {
        if (gained[v] > g.degree(v) + inserted[v]) ++violations["edge capacity"];
      }
      if (arrivals.size() != std::accumulate(gained.begin(), gained.end(), std::size_t{0})) {
        ++violations["arrival report"];
      }
    }
  }
  std::size_t total = 0;
  std::string kinds;
  for (const auto& [k, c] : violations) {
    total += c;
    kinds += fmt(" %s=%zu", k.c_str(), c);
  }
  return {total == 0 && adv_seen.size() == adversaries.size() && proto_seen.size() == protocol_names.size(),
          fmt("%zu rounds in %zu runs over %zu adversaries x %zu protocols, %zu violations%s", rounds, runs,
              adv_seen.size(), proto_seen.size(), total, kinds.c_str())};
}

// 12. Determinism of experiment CSVs.
Outcome determinism() {
  const char* configs[] = {
      R"({"adversary": {"name": "random-interval", "params": {"extra_edge_prob": 0.1}},
          "protocol": "rand-diff", "initial": {"kind": "one-token-per-node"},
          "n": [8, 16, 24], "seeds": [1, 2, 3], "max_rounds": 2000})",
      R"({"adversary": {"name": "ring-failure", "params": {"policy": "random"}},
          "protocol": "sym-diff", "initial": {"kind": "one-token-per-node"},
          "n": [8, 12], "seeds": [4, 5], "max_rounds": 5000})",
      R"({"adversary": "center-terminal", "protocol": "skb-uniform",
          "initial": {"kind": "single-source", "k": 6}, "n": [10, 14], "seeds": [1, 2], "max_rounds": 5000})",
      R"({"adversary": "random-interval", "protocol": "central-k-gossip",
          "initial": {"kind": "one-token-per-node"}, "n": [8, 16], "seeds": [1, 2], "max_rounds": 256})",
      R"({"adversary": "blocker-oblivious", "protocol": "rand-diff", "initial": {"kind": "single-source"},
          "n": [64, 144], "seeds": [1, 2], "max_rounds": 3000, "metric": "sentinel", "stop_after_sentinel": true})",
      R"({"adversary": "static-line", "protocol": "flood:0", "initial": {"kind": "single-source", "k": 1},
          "n": [5, 9], "seeds": [1], "max_rounds": 50})",
  };
  const auto strip = [](const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream out;
    for (std::string line; std::getline(in, line);) out << line.substr(0, line.rfind(',')) << '\n';
    return out.str();
  };
  std::size_t same = 0, total = 0, rows = 0;
  for (const char* text : configs) {
    auto c = harness::ExperimentConfig::from_json(nlohmann::json::parse(text));
    c.output.csv = tmp(fmt("det_%zu_a.csv", total)).string();
    const auto first = harness::run_experiment(c, 1);
    const auto a = strip(c.output.csv);
    c.output.csv = tmp(fmt("det_%zu_b.csv", total)).string();
    harness::run_experiment(c, 4);
    const auto b = strip(c.output.csv);
    ++total;
    rows += first.size();
    same += a == b ? 1 : 0;
  }
  return {same == total, fmt("%zu/%zu configs re-ran with identical data columns (%zu rows)", same, total, rows)};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "LoadBalance placement and floor/ceil balance", load_balance_b1_b2},
      {2, "LoadBalance per-node subset uniformity", load_balance_b3},
      {3, "GreedyExchange per-node optimality", greedy_exchange_optimal},
      {4, "Maximum matching vs brute force", matching_oracle},
      {5, "Centralized k-gossip completion and round bound", central_k_gossip},
      {6, "Rand-Diff sentinel trend on oblivious blocker line", rand_diff_lower_bound_trend},
      {7, "Blocker separation of inner nodes", blocker_separation},
      {8, "SKB blocker sets stop crossing", skb_blocking},
      {9, "Rand-Diff on failing ring within budget", ring_upper_bound},
      {10, "Paths-respecting validator", validator_correctness},
      {11, "Engine invariants under fuzzing", engine_invariants},
      {12, "Experiment determinism", determinism},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s [%2d] %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
