#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gossipsim/adversaries.hpp"
#include "gossipsim/central.hpp"
#include "oracles.hpp"

using namespace gossipsim;
using namespace gossipsim::central;

namespace {

std::vector<NodeId> range_nodes(NodeId lo, NodeId hi) {
  std::vector<NodeId> v;
  for (NodeId x = lo; x < hi; ++x) v.push_back(x);
  return v;
}

struct LbRun {
  LoadBalanceResult result;
  TokenState state;
};

LbRun run_load_balance(const AdversarySchedule& sched, std::size_t pool_size, std::uint64_t seed,
                       std::vector<NodeId> full, std::vector<NodeId> targets) {
  const auto n = sched.node_count();
  TokenState s(n, pool_size);
  for (NodeId f : full) {
    for (TokenId t = 0; t < pool_size; ++t) s.place_initial(f, t);
  }
  RoundEngine engine(sched, std::move(s));
  SchedulerContext ctx(engine);
  std::vector<TokenId> items(pool_size);
  std::iota(items.begin(), items.end(), 0);
  auto result = load_balance(ctx, full, targets, ItemPool::ranked(items, seed));
  return {std::move(result), engine.release_state()};
}

}  // namespace

TEST(GreedyExchange, CenterGainsFromDisjointSuppliers) {
  TokenState s(3, 2);
  s.place_initial(1, 0);
  s.place_initial(2, 1);
  const auto g = NetworkSnapshot::star(3, 0);
  const auto plan = greedy_exchange_round(s, g, {});
  std::size_t to_center = 0;
  for (const auto& send : plan.sends) to_center += send.to == 0 ? 1 : 0;
  EXPECT_EQ(to_center, 2u);
  EXPECT_FALSE(oracle::plan_violation(s, g, plan));
}

TEST(GreedyExchange, IdenticalHoldingsGiveEmptyPlan) {
  TokenState s(4, 3);
  for (NodeId v = 0; v < 4; ++v) {
    s.place_initial(v, 0);
    s.place_initial(v, 2);
  }
  EXPECT_TRUE(greedy_exchange_round(s, NetworkSnapshot::complete(4), {}).empty());
}

TEST(GreedyExchange, AllowedMaskRestrictsTokens) {
  TokenState s(2, 2);
  s.place_initial(0, 0);
  s.place_initial(0, 1);
  const std::vector<std::uint8_t> allowed{0, 1};
  const auto plan = greedy_exchange_round(s, NetworkSnapshot::line(2), allowed);
  ASSERT_EQ(plan.size(), 1u);
  EXPECT_EQ(plan.sends[0].token, 1u);
}

TEST(GreedyExchange, MatchesPerNodeOptimum) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 9)(rng);
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
    std::vector<Edge> edges;
    std::bernoulli_distribution coin(0.5);
    for (NodeId a = 0; a < n; ++a) {
      for (NodeId b = a + 1; b < n; ++b) {
        if (coin(rng)) edges.push_back({a, b});
      }
    }
    const NetworkSnapshot g(n, edges);
    TokenState s(n, k);
    for (NodeId v = 0; v < n; ++v) {
      for (TokenId t = 0; t < k; ++t) {
        if (coin(rng)) s.place_initial(v, t);
      }
    }
    const auto plan = greedy_exchange_round(s, g, {});
    ASSERT_FALSE(oracle::plan_violation(s, g, plan));
    for (NodeId v = 0; v < n; ++v) {
      std::set<TokenId> got;
      for (const auto& send : plan.sends) {
        if (send.to == v && !s.has(v, send.token)) got.insert(send.token);
      }
      ASSERT_EQ(got.size(), oracle::exchange_optimum(s, g, v)) << "trial " << trial << " node " << v;
    }
  }
}

TEST(LoadBalance, ExactDivision) {
  const auto sched = static_schedule(NetworkSnapshot::line(3), 20);
  auto run = run_load_balance(sched, 4, 7, {0}, {1, 2});
  EXPECT_FALSE(oracle::load_balance_violation(run.state, {0, 1, 2, 3}, run.result.assignment, {1, 2}));
  EXPECT_EQ(std::count(run.result.assignment.begin(), run.result.assignment.end(), 1u), 2);
  EXPECT_EQ(run.result.log.rounds, 4);
  EXPECT_EQ(run.result.log.overage, 0);
}

TEST(LoadBalance, FloorCeilSplit) {
  const auto sched = static_schedule(NetworkSnapshot::line(3), 20);
  auto run = run_load_balance(sched, 5, 3, {0}, {1, 2});
  EXPECT_FALSE(oracle::load_balance_violation(run.state, {0, 1, 2, 3, 4}, run.result.assignment, {1, 2}));
  const auto at1 = std::count(run.result.assignment.begin(), run.result.assignment.end(), 1u);
  EXPECT_TRUE(at1 == 2 || at1 == 3);
}

TEST(LoadBalance, TargetsInsideFullSetCostNoRounds) {
  const auto sched = static_schedule(NetworkSnapshot::line(4), 20);
  auto run = run_load_balance(sched, 8, 1, {0}, range_nodes(0, 4));
  EXPECT_FALSE(oracle::load_balance_violation(run.state, {0, 1, 2, 3, 4, 5, 6, 7}, run.result.assignment,
                                              range_nodes(0, 4)));
  EXPECT_EQ(run.result.log.rounds, 6);
}

TEST(LoadBalance, RejectsBadArguments) {
  const auto sched = static_schedule(NetworkSnapshot::line(3), 20);
  TokenState s(3, 2);
  s.place_initial(0, 0);
  RoundEngine engine(sched, s);
  SchedulerContext ctx(engine);
  const std::vector<NodeId> f{0}, r{1, 2}, partial{1};
  EXPECT_THROW(load_balance(ctx, f, {}, ItemPool::ranked({0, 0}, 1)), ParameterError);
  EXPECT_THROW(load_balance(ctx, f, r, ItemPool::ranked({0}, 1)), ParameterError);
  EXPECT_THROW(load_balance(ctx, f, partial, ItemPool::ranked({0, 0}, 1)), ParameterError);
  EXPECT_THROW(load_balance(ctx, f, r, ItemPool::ranked({0, 1}, 1)), ParameterError);
  EXPECT_THROW(load_balance(ctx, {}, r, ItemPool::ranked({0, 0}, 1)), ParameterError);
}

TEST(LoadBalance, RingFailureSchedule) {
  const auto ring = adversaries::build_ring_failure(10, adversaries::RingPolicy::random, 4, 200);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto run = run_load_balance(ring.schedule, 23, seed, {0, 5}, range_nodes(1, 10));
    std::vector<TokenId> items(23);
    std::iota(items.begin(), items.end(), 0);
    ASSERT_FALSE(oracle::load_balance_violation(run.state, items, run.result.assignment, range_nodes(1, 10)))
        << "seed " << seed;
  }
}

TEST(ItemPool, RanksArePermutation) {
  const auto pool = ItemPool::ranked({4, 4, 9, 1, 0}, 12);
  auto r = pool.ranks;
  std::sort(r.begin(), r.end());
  EXPECT_EQ(r, (std::vector<std::size_t>{0, 1, 2, 3, 4}));
  const auto order = pool.by_rank();
  for (std::size_t i = 0; i < order.size(); ++i) EXPECT_EQ(pool.ranks[order[i]], i);
}

TEST(Reduction, Grouping) {
  auto g = reduce_k_to_n(4, 4);
  EXPECT_EQ(g.groups.size(), 1u);
  EXPECT_TRUE(g.dummies.empty());
  g = reduce_k_to_n(3, 4);
  EXPECT_EQ(g.groups.size(), 1u);
  EXPECT_EQ(g.dummies, std::vector<TokenId>{3});
  g = reduce_k_to_n(10, 4);
  EXPECT_EQ(g.groups.size(), 3u);
  EXPECT_EQ(g.dummies, (std::vector<TokenId>{10, 11}));
  for (const auto& grp : g.groups) EXPECT_EQ(grp.size(), 4u);
}

TEST(NBroadcast, TwoNodeEdge) {
  const auto sched = static_schedule(NetworkSnapshot::line(2), 50);
  const auto out = run_n_broadcast(sched, 0, {}, 50);
  ASSERT_TRUE(out.result.completion_round);
  EXPECT_LE(*out.result.completion_round, 3);
}

TEST(NBroadcast, RandomSchedule) {
  const auto sched = adversaries::build_random_interval_connected(16, 0.0, 3, 2000);
  const auto out = run_n_broadcast(sched, 5, {.seed = 3}, 2000);
  EXPECT_EQ(out.status, CentralStatus::completed);
  EXPECT_TRUE(out.result.completion_round);
  EXPECT_TRUE(out.final_state.complete());
}

TEST(KGossip, SingleTokenFloodsWithinN) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const std::size_t n = 12;
    const auto sched = adversaries::build_random_interval_connected(n, 0.0, seed, 500);
    const auto out = k_gossip_centralized(sched, single_source_state(n, 1, 4), {.seed = seed}, 500);
    ASSERT_TRUE(out.result.completion_round);
    EXPECT_LE(*out.result.completion_round, static_cast<Round>(n));
  }
}

TEST(KGossip, CompleteGraphWithinBound) {
  const std::size_t n = 16, k = 16;
  const auto sched = static_schedule(NetworkSnapshot::complete(n), static_cast<Round>(n * k));
  const auto out = k_gossip_centralized(sched, one_token_per_node_state(n), {.seed = 1},
                                        static_cast<Round>(n * k));
  ASSERT_TRUE(out.result.completion_round);
  const double lg = std::log2(double(n));
  const double bound = std::min<double>(n * k, 64.0 * (n + k) * std::sqrt(double(n)) * lg * lg);
  EXPECT_LE(*out.result.completion_round, bound);
}

TEST(KGossip, FloodingStrategyCompletes) {
  const std::size_t n = 10;
  const auto sched = adversaries::build_random_interval_connected(n, 0.1, 8, 400);
  TokenState s(n, 20);
  for (TokenId t = 0; t < 20; ++t) s.place_initial(t % n, t);
  const auto out = k_gossip_centralized(sched, s, {.seed = 8, .strategy = Strategy::flooding}, 400);
  EXPECT_TRUE(out.result.completion_round);
  EXPECT_FALSE(out.fell_back);
  ASSERT_FALSE(out.stages.empty());
  EXPECT_EQ(out.stages.back().stage, "flooding");
}

TEST(Strategy, NamesRoundTrip) {
  for (auto st : {Strategy::guarded, Strategy::pipeline, Strategy::flooding}) {
    EXPECT_EQ(parse_strategy(to_string(st)), st);
  }
  EXPECT_THROW(parse_strategy("fastest"), ParameterError);
}
