#include "gossipsim/protocols.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include "gossipsim/rng.hpp"

namespace gossipsim::protocols {

bool LocalView::neighbor_holds(NodeId neighbor, TokenId token) const {
  if (!neighbor_access_) throw std::logic_error("this view has no neighbor knowledge");
  return state_->has(neighbor, token);
}

TransferPlan rand_diff_step(const TokenState& state, const NetworkSnapshot& snapshot,
                            std::uint64_t seed) {
  TransferPlan plan;
  std::vector<TokenId> diff;
  for (NodeId u = 0; u < snapshot.node_count(); ++u) {
    const LocalView view(state, snapshot, u, true);
    if (view.own_tokens().empty()) continue;
    StreamRng rng(seed, static_cast<std::uint64_t>(view.round()), u);
    for (NodeId v : view.neighbors()) {
      diff.clear();
      for (TokenId t : view.own_tokens()) {
        if (!view.neighbor_holds(v, t)) diff.push_back(t);
      }
      if (!diff.empty()) plan.add(u, v, diff[rng.below(diff.size())]);
    }
  }
  return plan;
}

TransferPlan sym_diff_step(const TokenState& state, const NetworkSnapshot& snapshot,
                           std::uint64_t seed) {
  TransferPlan plan;
  std::vector<TokenId> u_only;
  std::vector<TokenId> v_only;
  for (NodeId u = 0; u < snapshot.node_count(); ++u) {
    const LocalView view(state, snapshot, u, true);
    StreamRng rng(seed, static_cast<std::uint64_t>(view.round()), u);
    for (NodeId v : view.neighbors()) {
      if (v < u) continue;
      u_only.clear();
      v_only.clear();
      for (TokenId t : state.holdings(u)) {
        if (!state.has(v, t)) u_only.push_back(t);
      }
      for (TokenId t : state.holdings(v)) {
        if (!state.has(u, t)) v_only.push_back(t);
      }
      const std::size_t total = u_only.size() + v_only.size();
      if (total == 0) continue;
      const auto pick = rng.below(total);
      if (pick < u_only.size()) {
        plan.add(u, v, u_only[pick]);
      } else {
        plan.add(v, u, v_only[pick - u_only.size()]);
      }
    }
  }
  return plan;
}

TransferPlan flood_step(TokenId token, const TokenState& state, const NetworkSnapshot& snapshot) {
  TransferPlan plan;
  if (token >= state.universe_size()) return plan;
  for (NodeId u = 0; u < snapshot.node_count(); ++u) {
    if (!state.has(u, token)) continue;
    for (NodeId v : snapshot.neighbors(u)) {
      if (!state.has(v, token)) plan.add(u, v, token);
    }
  }
  return plan;
}

SkbPolicy uniform_skb() {
  SkbPolicy p;
  p.name = "uniform";
  p.uniform_over_held = true;
  p.weight = [](Round, NodeId, TokenId, std::optional<Round> arrival, std::size_t held) {
    if (!arrival || held == 0) return 0.0;
    return 1.0 / static_cast<double>(held);
  };
  return p;
}

namespace {

constexpr double kMassTolerance = 1e-9;

bool same_weight(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

SkbPolicyReport check_skb_policy(const SkbPolicy& policy, const TokenState& state, Round round) {
  SkbPolicyReport report;
  std::vector<double> weights;
  for (NodeId u = 0; u < state.node_count(); ++u) {
    const auto held = state.holdings(u);
    weights.assign(held.size(), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < held.size(); ++i) {
      weights[i] = policy.weight(round, u, held[i], state.arrival(held[i], u), held.size());
      if (weights[i] < 0.0) {
        report.violations.push_back({SkbViolation::Kind::negative_weight, u, held[i], held[i], weights[i]});
      }
      total += weights[i];
    }
    if (total > 1.0 + kMassTolerance) {
      report.violations.push_back({SkbViolation::Kind::mass_exceeds_one, u, 0, 0, total});
    }
    // Holdings are in arrival order, so equal-arrival tokens form runs.
    for (std::size_t start = 0; start < held.size();) {
      const Round at = *state.arrival(held[start], u);
      std::size_t end = start + 1;
      while (end < held.size() && *state.arrival(held[end], u) == at) {
        if (!same_weight(weights[end], weights[start])) {
          report.violations.push_back(
              {SkbViolation::Kind::asymmetric, u, held[start], held[end], weights[start] - weights[end]});
        }
        ++end;
      }
      start = end;
    }
    for (TokenId t = 0; t < state.universe_size(); ++t) {
      if (state.has(u, t)) continue;
      const double w = policy.weight(round, u, t, std::nullopt, held.size());
      if (w != 0.0) report.violations.push_back({SkbViolation::Kind::unheld_mass, u, t, t, w});
    }
  }
  return report;
}

TransferPlan skb_step(const SkbPolicy& policy, const TokenState& state,
                      const NetworkSnapshot& snapshot, std::uint64_t seed) {
  TransferPlan plan;
  std::vector<double> weights;
  for (NodeId u = 0; u < snapshot.node_count(); ++u) {
    const LocalView view(state, snapshot, u, false);
    const auto held = view.own_tokens();
    if (held.empty() || view.neighbors().empty()) continue;
    StreamRng rng(seed, static_cast<std::uint64_t>(view.round()), u);

    std::optional<TokenId> chosen;
    if (policy.uniform_over_held) {
      chosen = held[rng.below(held.size())];
    } else {
      weights.resize(held.size());
      double total = 0.0;
      Round run_arrival = kNoArrival;
      double run_weight = 0.0;
      for (std::size_t i = 0; i < held.size(); ++i) {
        const Round at = *view.arrival(held[i]);
        const double w = policy.weight(view.round(), u, held[i], at, held.size());
        if (w < 0.0) throw PlanError("SKB policy produced a negative weight");
        if (at == run_arrival && !same_weight(w, run_weight)) {
          throw PlanError("SKB policy '" + policy.name + "' violates symmetry at node " +
                          std::to_string(u));
        }
        run_arrival = at;
        run_weight = w;
        weights[i] = w;
        total += w;
      }
      if (total > 1.0 + kMassTolerance) {
        throw PlanError("SKB policy '" + policy.name + "' sends with total mass above 1");
      }
      double x = rng.unit();
      for (std::size_t i = 0; i < held.size(); ++i) {
        if (x < weights[i]) {
          chosen = held[i];
          break;
        }
        x -= weights[i];
      }
    }
    if (!chosen) continue;
    for (NodeId v : view.neighbors()) plan.add(u, v, *chosen);
  }
  return plan;
}

std::unique_ptr<Protocol> make_protocol(std::string_view name) {
  if (name == "rand-diff") return std::make_unique<RandDiff>();
  if (name == "sym-diff") return std::make_unique<SymDiff>();
  if (name == "skb-uniform") return std::make_unique<Skb>(uniform_skb());
  if (name.starts_with("flood:")) {
    const auto arg = name.substr(6);
    TokenId token{};
    const auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), token);
    if (ec != std::errc() || ptr != arg.data() + arg.size() || arg.empty()) {
      throw std::invalid_argument("bad flood token in '" + std::string(name) + "'");
    }
    return std::make_unique<Flood>(token);
  }
  throw std::invalid_argument("unknown protocol '" + std::string(name) + "'");
}

}  // namespace gossipsim::protocols
