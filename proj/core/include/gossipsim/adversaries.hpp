#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gossipsim/paths.hpp"
#include "gossipsim/schedule.hpp"

namespace gossipsim::adversaries {

/// Parameters of the dynamic-line lower-bound adversaries. All counts are
/// floors clamped below at 1; `clamped` names the ones that hit the clamp.
struct BlockerLineParams {
  std::size_t n = 0;
  double epsilon = 1.0 / 32.0;
  std::size_t phases = 1;
  std::size_t segments_per_phase = 1;
  std::size_t segment_rounds = 1;
  std::size_t inner_width = 1;
  /// Oblivious only: clique rounds between segments are ceil(c_clique log2 n).
  double c_clique = 3.0;
  std::uint64_t seed = 0;
  std::vector<std::string> clamped;

  static BlockerLineParams make(std::size_t n, std::uint64_t seed, double epsilon = 1.0 / 32.0,
                                double c_clique = 3.0);
  std::size_t root() const;
  std::size_t clique_rounds() const;
  /// Throws ParameterError if the line cannot host the construction.
  void check() const;
};

/// v_0 = node 0 starts with every token; the line is always left line, v_0,
/// right line. Pre-segment insertions land in the round before a segment.
AdversarySchedule build_blocker_line_invasive(const BlockerLineParams& params);

/// Same line, with insertions replaced by direct-edge, random-edge, clique
/// and biclique rounds. The blockers of phase i are whatever v_0 hands to
/// X_{i,1} in the capture round recorded in the metadata.
AdversarySchedule build_blocker_line_oblivious(const BlockerLineParams& params);

/// Closed-form horizon of the oblivious construction.
Round blocker_oblivious_horizon(const BlockerLineParams& params);

struct SkbAdversaryParams {
  std::size_t n = 0;
  std::size_t blocker_set_size = 1;
  std::size_t sets_per_phase = 1;
  std::size_t phases = 1;
  std::size_t segments_per_phase = 1;
  std::size_t inner_width = 1;
  std::uint64_t seed = 0;
  std::vector<std::string> clamped;

  static SkbAdversaryParams make(std::size_t n, std::uint64_t seed);
  std::size_t blocker_tokens() const { return phases * sets_per_phase * blocker_set_size; }
  void check() const;
};

/// s = node 0; the line is left part, s, middle part, right part. Segments
/// last sets_per_phase rounds; at round k of a segment v_m receives B_{i,k-m+1}.
AdversarySchedule build_skb_adversary(const SkbAdversaryParams& params);

/// Token ids of blocker set B_{i,k} (1-based).
std::vector<TokenId> skb_blocker_set(const SkbAdversaryParams& params, std::size_t phase,
                                     std::size_t k);

struct PathsRespecting {
  AdversarySchedule schedule;
  NetworkSnapshot infrastructure;
  std::vector<PathSystem> systems;
};

enum class RingPolicy { round_robin, random, fixed_edge };
std::string to_string(RingPolicy policy);
RingPolicy parse_ring_policy(std::string_view text);

/// n-cycle minus one edge per round.
PathsRespecting build_ring_failure(std::size_t n, RingPolicy policy, std::uint64_t seed,
                                   Round horizon);

/// Centers 0..r-1 adjacent to everything; each round floor((r-2)/2) centers
/// lose their terminal edges, chosen by a seeded rotation.
PathsRespecting build_center_terminal(std::size_t n, std::size_t r, std::uint64_t seed,
                                      Round horizon);

/// Uniform labeled spanning tree (Pruefer code) plus each other edge with
/// probability `extra_edge_prob`, fresh every round.
AdversarySchedule build_random_interval_connected(std::size_t n, double extra_edge_prob,
                                                  std::uint64_t seed, Round horizon);

/// Decodes a Pruefer sequence over nodes [0, n).
std::vector<Edge> pruefer_tree(std::span<const NodeId> code, std::size_t n);

}  // namespace gossipsim::adversaries
