#include "gossipsim/adversaries.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <random>

namespace gossipsim::adversaries {

namespace {

double lg(std::size_t n) { return std::log2(static_cast<double>(n)); }

std::size_t floor_clamped(double x, const char* name, std::vector<std::string>& clamped) {
  const double f = std::floor(x);
  if (f < 1.0) {
    clamped.emplace_back(name);
    return 1;
  }
  return static_cast<std::size_t>(f);
}

std::size_t exact_sqrt(std::size_t n) {
  auto r = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
  return r * r == n ? r : 0;
}

std::size_t icbrt(std::size_t n) {
  auto r = static_cast<std::size_t>(std::cbrt(static_cast<double>(n)));
  while ((r + 1) * (r + 1) * (r + 1) <= n) ++r;
  while (r > 0 && r * r * r > n) --r;
  return r;
}

// Line plus extra edges, without duplicates.
NetworkSnapshot with_edges(std::span<const NodeId> order, std::size_t n, std::vector<Edge> extra) {
  for (std::size_t i = 0; i + 1 < order.size(); ++i) extra.push_back({order[i], order[i + 1]});
  for (auto& e : extra) {
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(extra.begin(), extra.end());
  extra.erase(std::unique(extra.begin(), extra.end()), extra.end());
  return NetworkSnapshot(n, std::move(extra));
}

void clique(std::span<const NodeId> nodes, std::vector<Edge>& out) {
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    for (std::size_t b = a + 1; b < nodes.size(); ++b) out.push_back({nodes[a], nodes[b]});
  }
}

struct Line {
  NodeId hub = 0;
  std::vector<NodeId> left;
  std::vector<NodeId> mid;
  std::vector<NodeId> right;

  std::vector<NodeId> order() const {
    std::vector<NodeId> o(left.rbegin(), left.rend());
    o.push_back(hub);
    o.insert(o.end(), mid.begin(), mid.end());
    o.insert(o.end(), right.begin(), right.end());
    return o;
  }
};

std::vector<NodeId> slice(const std::vector<NodeId>& v, std::size_t from, std::size_t to) {
  return {v.begin() + static_cast<std::ptrdiff_t>(from), v.begin() + static_cast<std::ptrdiff_t>(to)};
}

nlohmann::json blocker_params_json(const BlockerLineParams& p) {
  return {{"n", p.n},
          {"epsilon", p.epsilon},
          {"phases", p.phases},
          {"segments_per_phase", p.segments_per_phase},
          {"segment_rounds", p.segment_rounds},
          {"inner_width", p.inner_width},
          {"c_clique", p.c_clique},
          {"clique_rounds", p.clique_rounds()},
          {"seed", p.seed},
          {"clamped", p.clamped}};
}

struct Interval {
  std::vector<NodeId> nodes, x, inner, outer, x_outer;
};

AdversarySchedule build_blocker_line(const BlockerLineParams& p, ScheduleMode mode) {
  p.check();
  const std::size_t n = p.n;
  const std::size_t sq = p.root();
  const bool invasive = mode == ScheduleMode::invasive;
  std::mt19937_64 rng(p.seed);
  std::bernoulli_distribution coin(0.5);

  ScheduleBuilder builder(n, mode);
  Line line;
  for (NodeId v = 1; v < n; ++v) line.right.push_back(v);

  auto groups = nlohmann::json::array();
  for (std::size_t i = 0; i < p.phases; ++i) {
    std::vector<TokenId> g;
    for (std::size_t t = i * sq; t < (i + 1) * sq; ++t) g.push_back(static_cast<TokenId>(t));
    groups.push_back(g);
  }

  auto phases_meta = nlohmann::json::array();
  for (std::size_t i = 1; i <= p.phases; ++i) {
    std::vector<Interval> iv(p.segments_per_phase);
    for (std::size_t j = 0; j < iv.size(); ++j) {
      auto& it = iv[j];
      it.nodes = slice(line.right, j * 2 * sq, (j + 1) * 2 * sq);
      it.x = slice(it.nodes, 0, sq);
      it.inner = slice(it.nodes, 0, p.inner_width);
      it.outer = slice(it.nodes, p.inner_width, it.nodes.size());
      it.x_outer = slice(it.nodes, p.inner_width, sq);
    }
    nlohmann::json phase = {{"phase", i}, {"first_round", builder.rounds() + 1}};
    const auto blockers = groups[i - 1].get<std::vector<TokenId>>();

    if (!invasive) {
      std::vector<Edge> direct;
      for (NodeId x : iv[0].x) direct.push_back({0, x});
      const Round capture = builder.add_round(with_edges(line.order(), n, std::move(direct)));
      std::vector<Edge> random;
      for (std::size_t a = 0; a < sq; ++a) {
        for (std::size_t b = a + 1; b < sq; ++b) {
          if (coin(rng)) random.push_back({iv[0].x[a], iv[0].x[b]});
        }
      }
      builder.add_round(with_edges(line.order(), n, std::move(random)));
      phase["capture"] = {{"round", capture}, {"nodes", iv[0].x}};
    }

    auto segments = nlohmann::json::array();
    for (std::size_t j = 1; j <= p.segments_per_phase; ++j) {
      const auto& it = iv[j - 1];
      if (invasive) {
        const Round at = builder.rounds();
        for (TokenId t : blockers) {
          for (NodeId x : it.x) {
            if (coin(rng)) builder.insert(at, x, t);
          }
        }
      }
      const auto order = line.order();
      const auto seg_line = NetworkSnapshot::path(order, n);
      const Round first = builder.rounds() + 1;
      for (std::size_t r = 0; r < p.segment_rounds; ++r) builder.add_round(seg_line);
      segments.push_back({{"segment", j},
                          {"first_round", first},
                          {"last_round", builder.rounds()},
                          {"interval", it.nodes},
                          {"x", it.x},
                          {"inner", it.inner},
                          {"outer", it.outer}});
      if (!invasive && j < p.segments_per_phase) {
        std::vector<Edge> cl;
        clique(it.x_outer, cl);
        const auto clique_round = with_edges(order, n, cl);
        for (std::size_t r = 0; r < p.clique_rounds(); ++r) builder.add_round(clique_round);
        std::vector<Edge> bi;
        for (NodeId a : it.x_outer) {
          for (NodeId b : iv[j].x) bi.push_back({a, b});
        }
        builder.add_round(with_edges(order, n, std::move(bi)));
      }
      // Inner nodes join the far end of the left line, outer nodes the far
      // end of the right line.
      line.left.insert(line.left.end(), it.inner.begin(), it.inner.end());
      line.right.erase(std::find(line.right.begin(), line.right.end(), it.nodes.front()),
                       std::find(line.right.begin(), line.right.end(), it.nodes.back()) + 1);
      line.right.insert(line.right.end(), it.outer.begin(), it.outer.end());
    }

    if (invasive) {
      const Round at = builder.rounds();
      for (NodeId v : line.right) {
        for (TokenId t : blockers) builder.insert(at, v, t);
      }
    } else {
      std::vector<Edge> cl;
      clique(line.right, cl);
      builder.add_round(with_edges(line.order(), n, std::move(cl)));
    }
    phase["last_round"] = builder.rounds();
    phase["segments"] = std::move(segments);
    phases_meta.push_back(std::move(phase));
  }

  nlohmann::json meta;
  meta["generator"] = invasive ? "blocker-invasive" : "blocker-oblivious";
  meta["params"] = blocker_params_json(p);
  meta["source"] = 0;
  meta["layout"] = "line is reverse(left), v0, right; inner nodes append to left, outer nodes to the end of right";
  meta["blocker_groups"] = groups;
  meta["phases"] = std::move(phases_meta);
  nlohmann::json sentinels = {{"targets", line.right}};
  if (invasive) {
    std::vector<TokenId> tokens;
    for (std::size_t t = p.phases * sq; t < n; ++t) tokens.push_back(static_cast<TokenId>(t));
    sentinels["kind"] = "explicit";
    sentinels["tokens"] = tokens;
  } else {
    sentinels["kind"] = "uncaptured";
  }
  meta["sentinels"] = std::move(sentinels);
  return builder.build(std::move(meta), true);
}

}  // namespace

BlockerLineParams BlockerLineParams::make(std::size_t n, std::uint64_t seed, double epsilon,
                                          double c_clique) {
  BlockerLineParams p;
  p.n = n;
  p.seed = seed;
  p.epsilon = epsilon;
  p.c_clique = c_clique;
  const double root = std::sqrt(static_cast<double>(n));
  const double log_n = lg(std::max<std::size_t>(n, 2));
  p.phases = floor_clamped(root / (2.0 * log_n), "phases", p.clamped);
  p.segments_per_phase = floor_clamped(root / 3.0, "segments_per_phase", p.clamped);
  p.segment_rounds = floor_clamped(epsilon * root, "segment_rounds", p.clamped);
  p.inner_width = static_cast<std::size_t>(std::max(1.0, std::ceil(log_n)));
  return p;
}

std::size_t BlockerLineParams::root() const { return exact_sqrt(n); }

std::size_t BlockerLineParams::clique_rounds() const {
  return static_cast<std::size_t>(std::max(1.0, std::ceil(c_clique * lg(std::max<std::size_t>(n, 2)))));
}

void BlockerLineParams::check() const {
  const std::size_t sq = root();
  if (n < 4 || sq == 0) throw ParameterError("blocker line: n must be a perfect square >= 4");
  if (sq <= inner_width) {
    throw ParameterError("blocker line: sqrt(n) must exceed the inner width");
  }
  if (phases == 0 || segments_per_phase == 0 || segment_rounds == 0) {
    throw ParameterError("blocker line: counts must be positive");
  }
  if (phases * sq > n) throw ParameterError("blocker line: blocker groups exceed the token universe");
  for (std::size_t i = 1; i <= phases; ++i) {
    const std::size_t moved = (i - 1) * segments_per_phase * inner_width;
    if (segments_per_phase * 2 * sq > n - 1 - moved) {
      throw ParameterError("blocker line: right line too short for phase " + std::to_string(i));
    }
  }
}

AdversarySchedule build_blocker_line_invasive(const BlockerLineParams& params) {
  return build_blocker_line(params, ScheduleMode::invasive);
}

AdversarySchedule build_blocker_line_oblivious(const BlockerLineParams& params) {
  return build_blocker_line(params, ScheduleMode::oblivious);
}

Round blocker_oblivious_horizon(const BlockerLineParams& p) {
  const std::size_t s = p.segments_per_phase;
  return static_cast<Round>(p.phases *
                            (2 + s * p.segment_rounds + (s - 1) * (1 + p.clique_rounds()) + 1));
}

SkbAdversaryParams SkbAdversaryParams::make(std::size_t n, std::uint64_t seed) {
  SkbAdversaryParams p;
  p.n = n;
  p.seed = seed;
  const std::size_t b = std::max<std::size_t>(1, icbrt(n));
  const double log_n = lg(std::max<std::size_t>(n, 2));
  p.blocker_set_size = b;
  p.sets_per_phase = b;
  p.phases = floor_clamped(std::cbrt(static_cast<double>(n)) / (2.0 * log_n), "phases", p.clamped);
  p.inner_width = std::min(static_cast<std::size_t>(std::ceil(log_n)), b > 1 ? b - 1 : 1);
  p.segments_per_phase = floor_clamped(std::pow(static_cast<double>(n), 2.0 / 3.0) + 1e-9,
                                       "segments_per_phase", p.clamped);
  // Each segment consumes sets_per_phase middle nodes and returns the outer
  // ones to the right part, which rejoins the middle at the next phase.
  const std::size_t host = (n - 1) / (b + (p.phases - 1) * p.inner_width);
  if (p.segments_per_phase > host) {
    p.segments_per_phase = std::max<std::size_t>(1, host);
    p.clamped.emplace_back("segments_per_phase:hosting");
  }
  return p;
}

void SkbAdversaryParams::check() const {
  if (n < 64) throw ParameterError("skb adversary: n must be at least 64");
  if (blocker_tokens() > n / 2) throw ParameterError("skb adversary: blocker sets exceed n/2 tokens");
  if (inner_width >= sets_per_phase) throw ParameterError("skb adversary: no outer nodes");
  for (std::size_t i = 1; i <= phases; ++i) {
    const std::size_t moved = (i - 1) * segments_per_phase * inner_width;
    if (segments_per_phase * sets_per_phase > n - 1 - moved) {
      throw ParameterError("skb adversary: middle part too short for phase " + std::to_string(i));
    }
  }
}

std::vector<TokenId> skb_blocker_set(const SkbAdversaryParams& p, std::size_t phase, std::size_t k) {
  std::vector<TokenId> out;
  const std::size_t base = ((phase - 1) * p.sets_per_phase + (k - 1)) * p.blocker_set_size;
  for (std::size_t t = 0; t < p.blocker_set_size; ++t) out.push_back(static_cast<TokenId>(base + t));
  return out;
}

AdversarySchedule build_skb_adversary(const SkbAdversaryParams& p) {
  p.check();
  const std::size_t n = p.n;
  const std::size_t b = p.sets_per_phase;
  ScheduleBuilder builder(n, ScheduleMode::invasive);
  Line line;
  for (NodeId v = 1; v < n; ++v) line.mid.push_back(v);

  std::vector<std::vector<std::vector<TokenId>>> sets(p.phases);
  auto sets_json = nlohmann::json::array();
  for (std::size_t i = 1; i <= p.phases; ++i) {
    for (std::size_t k = 1; k <= b; ++k) {
      sets[i - 1].push_back(skb_blocker_set(p, i, k));
      sets_json.push_back(sets[i - 1].back());
    }
  }

  auto segments = nlohmann::json::array();
  for (std::size_t i = 1; i <= p.phases; ++i) {
    line.mid.insert(line.mid.end(), line.right.begin(), line.right.end());
    line.right.clear();
    for (std::size_t j = 1; j <= p.segments_per_phase; ++j) {
      const auto v = slice(line.mid, 0, b);
      const auto graph = NetworkSnapshot::path(line.order(), n);
      const Round first = builder.rounds() + 1;
      for (std::size_t k = 1; k <= b; ++k) {
        const Round r = builder.add_round(graph);
        for (std::size_t m = 1; m <= k; ++m) {
          for (TokenId t : sets[i - 1][k - m]) builder.insert(r, v[m - 1], t);
        }
      }
      segments.push_back({{"phase", i},
                          {"segment", j},
                          {"first_round", first},
                          {"last_round", builder.rounds()},
                          {"inner", slice(v, 0, p.inner_width)},
                          {"outer", slice(v, p.inner_width, b)}});
      line.left.insert(line.left.end(), v.begin(), v.begin() + static_cast<std::ptrdiff_t>(p.inner_width));
      line.right.insert(line.right.end(), v.begin() + static_cast<std::ptrdiff_t>(p.inner_width), v.end());
      line.mid.erase(line.mid.begin(), line.mid.begin() + static_cast<std::ptrdiff_t>(b));
    }
  }

  nlohmann::json meta;
  meta["generator"] = "skb-blocker";
  meta["params"] = {{"n", n},
                    {"blocker_set_size", p.blocker_set_size},
                    {"sets_per_phase", p.sets_per_phase},
                    {"phases", p.phases},
                    {"segments_per_phase", p.segments_per_phase},
                    {"segment_rounds", b},
                    {"inner_width", p.inner_width},
                    {"seed", p.seed},
                    {"clamped", p.clamped}};
  meta["source"] = 0;
  meta["blocker_token_count"] = p.blocker_tokens();
  meta["blocker_sets"] = std::move(sets_json);
  meta["segments"] = std::move(segments);
  return builder.build(std::move(meta), true);
}

std::string to_string(RingPolicy policy) {
  switch (policy) {
    case RingPolicy::round_robin: return "round-robin";
    case RingPolicy::random: return "random";
    case RingPolicy::fixed_edge: return "fixed-edge";
  }
  return "?";
}

RingPolicy parse_ring_policy(std::string_view text) {
  if (text == "round-robin") return RingPolicy::round_robin;
  if (text == "random") return RingPolicy::random;
  if (text == "fixed-edge") return RingPolicy::fixed_edge;
  throw ParameterError("unknown ring policy: " + std::string(text));
}

PathsRespecting build_ring_failure(std::size_t n, RingPolicy policy, std::uint64_t seed, Round horizon) {
  if (n < 3) throw ParameterError("ring failure: n must be at least 3");
  if (horizon < 1) throw ParameterError("ring failure: horizon must be positive");
  ScheduleBuilder builder(n, ScheduleMode::oblivious);
  // Slot i is the cycle without edge (i, i+1 mod n).
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Edge> edges;
    for (std::size_t a = 0; a < n; ++a) {
      if (a != i) edges.push_back({static_cast<NodeId>(a), static_cast<NodeId>((a + 1) % n)});
    }
    builder.add_snapshot(NetworkSnapshot(n, std::move(edges)));
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (Round t = 1; t <= horizon; ++t) {
    switch (policy) {
      case RingPolicy::round_robin: builder.use_slot(static_cast<std::size_t>(t) % n); break;
      case RingPolicy::random: builder.use_slot(pick(rng)); break;
      case RingPolicy::fixed_edge: builder.use_slot(0); break;
    }
  }

  PathsRespecting out;
  out.infrastructure = NetworkSnapshot::cycle(n);
  for (NodeId s = 0; s < n; ++s) {
    for (NodeId d = s + 1; d < n; ++d) {
      PathSystem sys{s, d, {{}, {}}};
      for (NodeId v = s; v <= d; ++v) sys.paths[0].push_back(v);
      for (std::size_t v = s + n; v >= d; --v) sys.paths[1].push_back(static_cast<NodeId>(v % n));
      out.systems.push_back(std::move(sys));
    }
  }
  nlohmann::json meta = {{"generator", "ring-failure"},
                         {"params", {{"n", n}, {"policy", to_string(policy)}, {"seed", seed}, {"horizon", horizon}}},
                         {"path_systems", out.systems.size()}};
  out.schedule = builder.build(std::move(meta), false);
  return out;
}

PathsRespecting build_center_terminal(std::size_t n, std::size_t r, std::uint64_t seed, Round horizon) {
  if (r < 3 || r + 1 > n) throw ParameterError("center-terminal: need 3 <= r <= n-1");
  if (horizon < 1) throw ParameterError("center-terminal: horizon must be positive");
  const std::size_t off = (r - 2) / 2;
  const auto is_center = [r](NodeId v) { return v < r; };

  std::vector<Edge> infra;
  for (NodeId c = 0; c < r; ++c) {
    for (NodeId v = c + 1; v < n; ++v) infra.push_back({c, v});
  }
  PathsRespecting out;
  out.infrastructure = NetworkSnapshot(n, infra);

  std::mt19937_64 rng(seed);
  const std::size_t rotation = std::uniform_int_distribution<std::size_t>(0, r - 1)(rng);
  ScheduleBuilder builder(n, ScheduleMode::oblivious);
  auto disabled_json = nlohmann::json::array();
  for (Round t = 1; t <= horizon; ++t) {
    std::vector<char> off_center(r, 0);
    for (std::size_t i = 0; i < off; ++i) {
      off_center[(rotation + static_cast<std::size_t>(t - 1) * off + i) % r] = 1;
    }
    std::vector<Edge> edges;
    for (const Edge& e : infra) {
      if (!is_center(e.v) && off_center[e.u]) continue;
      edges.push_back(e);
    }
    builder.add_round(NetworkSnapshot(n, std::move(edges)));
  }

  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = a + 1; b < n; ++b) {
      PathSystem sys{a, b, {}};
      if (!is_center(a)) {
        for (NodeId c = 0; c + 1 < r; ++c) sys.paths.push_back({a, c, b});
      } else {
        sys.paths.push_back({a, b});
        for (NodeId c = 0; c < r; ++c) {
          if (c != a && c != b) sys.paths.push_back({a, c, b});
        }
      }
      out.systems.push_back(std::move(sys));
    }
  }
  nlohmann::json meta = {{"generator", "center-terminal"},
                         {"params", {{"n", n}, {"r", r}, {"seed", seed}, {"horizon", horizon}}},
                         {"disabled_per_round", off},
                         {"rotation", rotation},
                         {"path_systems", out.systems.size()}};
  out.schedule = builder.build(std::move(meta), false);
  return out;
}

std::vector<Edge> pruefer_tree(std::span<const NodeId> code, std::size_t n) {
  std::vector<Edge> edges;
  if (n < 2) return edges;
  if (code.size() + 2 != n) throw ParameterError("pruefer code must have n-2 entries");
  std::vector<std::size_t> degree(n, 1);
  for (NodeId v : code) ++degree.at(v);
  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> leaves;
  for (NodeId v = 0; v < n; ++v) {
    if (degree[v] == 1) leaves.push(v);
  }
  for (NodeId v : code) {
    const NodeId leaf = leaves.top();
    leaves.pop();
    edges.push_back({std::min(leaf, v), std::max(leaf, v)});
    if (--degree[v] == 1) leaves.push(v);
  }
  const NodeId a = leaves.top();
  leaves.pop();
  const NodeId b = leaves.top();
  edges.push_back({std::min(a, b), std::max(a, b)});
  return edges;
}

AdversarySchedule build_random_interval_connected(std::size_t n, double extra_edge_prob,
                                                  std::uint64_t seed, Round horizon) {
  if (n < 2) throw ParameterError("random interval-connected: n must be at least 2");
  if (extra_edge_prob < 0.0 || extra_edge_prob > 1.0) {
    throw ParameterError("random interval-connected: extra_edge_prob outside [0,1]");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(n - 1));
  std::bernoulli_distribution extra(extra_edge_prob);
  ScheduleBuilder builder(n, ScheduleMode::oblivious);
  std::vector<NodeId> code(n - 2);
  std::vector<char> in_tree(n * n);
  for (Round t = 1; t <= horizon; ++t) {
    for (auto& c : code) c = node(rng);
    auto edges = pruefer_tree(code, n);
    if (extra_edge_prob > 0.0) {
      std::fill(in_tree.begin(), in_tree.end(), 0);
      for (const Edge& e : edges) in_tree[e.u * n + e.v] = 1;
      for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) {
          if (!in_tree[u * n + v] && extra(rng)) edges.push_back({u, v});
        }
      }
    }
    builder.add_round(NetworkSnapshot(n, std::move(edges)));
  }
  nlohmann::json meta = {{"generator", "random-interval"},
                         {"params", {{"n", n}, {"extra_edge_prob", extra_edge_prob}, {"seed", seed}, {"horizon", horizon}}}};
  return builder.build(std::move(meta), false);
}

}  // namespace gossipsim::adversaries
