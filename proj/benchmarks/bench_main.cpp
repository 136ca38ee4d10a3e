#include <random>

#include <benchmark/benchmark.h>

#include "gossipsim/adversaries.hpp"
#include "gossipsim/central.hpp"
#include "gossipsim/engine.hpp"
#include "gossipsim/matching.hpp"
#include "gossipsim/protocols.hpp"

namespace {

using namespace gossipsim;

void BM_RandDiffRandomInterval(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto sched = adversaries::build_random_interval_connected(n, 0.05, 1, 64);
  for (auto _ : st) {
    protocols::RandDiff proto;
    auto run = run_simulation(sched, proto, one_token_per_node_state(n), {.max_rounds = 64, .seed = 7});
    benchmark::DoNotOptimize(run.result.rounds_executed);
  }
  st.SetItemsProcessed(st.iterations() * 64);
}
BENCHMARK(BM_RandDiffRandomInterval)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_SkbBlocker(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto sched = adversaries::build_skb_adversary(adversaries::SkbAdversaryParams::make(n, 1));
  for (auto _ : st) {
    protocols::Skb proto(protocols::uniform_skb());
    auto run = run_simulation(sched, proto, single_source_state(n, n, 0),
                              {.max_rounds = sched.horizon(), .seed = 1, .validate_snapshots = false});
    benchmark::DoNotOptimize(run.result.rounds_executed);
  }
}
BENCHMARK(BM_SkbBlocker)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_GreedyExchangeRound(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto g = adversaries::build_random_interval_connected(n, 0.1, 3, 1).snapshot(1);
  std::mt19937_64 rng(5);
  std::bernoulli_distribution hold(0.3);
  TokenState s(n, n);
  for (NodeId v = 0; v < n; ++v) {
    for (TokenId t = 0; t < n; ++t) {
      if (hold(rng)) s.place_initial(v, t);
    }
  }
  for (auto _ : st) benchmark::DoNotOptimize(central::greedy_exchange_round(s, g, {}).sends.size());
}
BENCHMARK(BM_GreedyExchangeRound)->Arg(32)->Arg(128);

void BM_Matching(benchmark::State& st) {
  const auto side = static_cast<int>(st.range(0));
  std::mt19937_64 rng(9);
  std::bernoulli_distribution edge(0.1);
  central::BipartiteInstance inst;
  for (int i = 0; i < side; ++i) {
    inst.left.push_back(static_cast<NodeId>(i));
    inst.right.push_back(static_cast<TokenId>(i));
  }
  for (auto u : inst.left) {
    for (auto t : inst.right) {
      if (edge(rng)) inst.adjacency.push_back({u, t});
    }
  }
  for (auto _ : st) benchmark::DoNotOptimize(central::max_bipartite_matching(inst).size());
}
BENCHMARK(BM_Matching)->Arg(64)->Arg(512);

}  // namespace
BENCHMARK_MAIN();
