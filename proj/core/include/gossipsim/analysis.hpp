#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "gossipsim/engine.hpp"

namespace gossipsim::analysis {

struct TraceArrival {
  Round round = 0;
  NodeId node = 0;
  TokenId token = 0;
};

/// Every (round, node, token) first arrival of a run, round 0 included.
struct Trace {
  std::size_t node_count = 0;
  std::size_t universe = 0;
  std::vector<TraceArrival> arrivals;
};

/// GTR1 text: "GTR1 n universe" then "A round node token" lines in round order.
void write_trace(std::ostream& out, const Trace& trace);
Trace read_trace(std::istream& in);
void save_trace(const std::filesystem::path& path, const Trace& trace);
Trace load_trace(const std::filesystem::path& path);

/// Collects a Trace through RunOptions hooks.
class TraceRecorder {
 public:
  void start(const TokenState& state);
  void observe(Round round, std::span<const Arrival> arrivals);
  const Trace& trace() const { return trace_; }
  Trace release() { return std::move(trace_); }

 private:
  Trace trace_;
};

struct SeparationStats {
  std::size_t pairs = 0;
  std::size_t below = 0;
  double threshold = 0.0;
  double fraction() const { return pairs == 0 ? 1.0 : static_cast<double>(below) / pairs; }
};

/// At the start of every segment round of a blocker-line schedule, counts
/// ordered pairs (u, v) of line-adjacent inner nodes with
/// |M(u) \ M(v)| < sqrt(n)/16. Feed arrivals in round order.
class SeparationMonitor {
 public:
  SeparationMonitor(const nlohmann::json& meta, std::size_t node_count, std::size_t universe);

  void start(const TokenState& state);
  /// Arrivals of `round`; the check for segment round `round` runs first.
  void observe(Round round, std::span<const Arrival> arrivals);
  /// Runs remaining checks up to `last_round` (no further arrivals).
  void finish(Round last_round);
  const SeparationStats& stats() const { return stats_; }
  Round last_segment_round() const { return last_round_; }

 private:
  void check_until(Round round);
  void add(NodeId node, TokenId token);

  std::size_t universe_;
  std::vector<char> holds_;
  std::vector<std::vector<TokenId>> lists_;
  struct Window {
    Round first, last;
    std::vector<NodeId> inner;
  };
  std::vector<Window> windows_;
  Round checked_ = 0;
  Round last_round_ = 0;
  SeparationStats stats_;
};

SeparationStats measure_blocker_separation(const Trace& trace, const nlohmann::json& meta);

struct CrossingStats {
  std::size_t segments = 0;
  std::size_t crossed = 0;
  double fraction() const { return segments == 0 ? 0.0 : static_cast<double>(crossed) / segments; }
};

/// For an SKB blocker schedule: segments in which a non-blocker token
/// arrives at one of the segment's outer nodes during the segment.
class CrossingMonitor {
 public:
  explicit CrossingMonitor(const nlohmann::json& meta, std::size_t node_count);
  void observe(Round round, std::span<const Arrival> arrivals);
  CrossingStats stats() const;
  Round last_segment_round() const { return last_round_; }

 private:
  struct Segment {
    Round first, last;
  };
  std::vector<Segment> segments_;
  std::vector<char> crossed_;
  /// Segment whose outer set contains each node, by segment index + 1.
  std::vector<std::vector<std::size_t>> outer_of_;
  std::size_t blockers_ = 0;
  Round last_round_ = 0;
};

CrossingStats measure_skb_crossing(const Trace& trace, const nlohmann::json& meta);

}  // namespace gossipsim::analysis
