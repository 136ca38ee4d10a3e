#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gossipsim/types.hpp"

namespace gossipsim {

struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected communication graph of a single round.
///
/// Edges are stored with u <= v in ascending order. Self-loops and duplicate
/// edges are kept as given so that validate_snapshot can report them; the
/// adjacency lists skip both.
class NetworkSnapshot {
 public:
  NetworkSnapshot() = default;
  NetworkSnapshot(std::size_t node_count, std::vector<Edge> edges);

  std::size_t node_count() const { return node_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  std::span<const Edge> edges() const { return edges_; }

  /// Neighbors of `node` in ascending order.
  std::span<const NodeId> neighbors(NodeId node) const {
    return {adjacency_.data() + offsets_[node], adjacency_.data() + offsets_[node + 1]};
  }
  std::size_t degree(NodeId node) const { return offsets_[node + 1] - offsets_[node]; }
  bool has_edge(NodeId a, NodeId b) const;

  friend bool operator==(const NetworkSnapshot& a, const NetworkSnapshot& b) {
    return a.node_count_ == b.node_count_ && a.edges_ == b.edges_;
  }

  static NetworkSnapshot path(std::span<const NodeId> order, std::size_t node_count);
  static NetworkSnapshot line(std::size_t node_count);
  static NetworkSnapshot cycle(std::size_t node_count);
  static NetworkSnapshot complete(std::size_t node_count);
  static NetworkSnapshot star(std::size_t node_count, NodeId center = 0);

 private:
  std::size_t node_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> adjacency_;
};

/// Outcome of validate_snapshot. On rejection `violation` names the first
/// failed property and `witness` holds the offending nodes (the loop node, the
/// duplicated edge, or the component not reachable from node 0).
struct SnapshotCheck {
  bool ok = true;
  std::string violation;
  std::vector<NodeId> witness;

  explicit operator bool() const { return ok; }
};

SnapshotCheck validate_snapshot(const NetworkSnapshot& snapshot);

/// Breadth-first hop distances from `sources` (-1 = unreachable).
std::vector<int> bfs_distances(const NetworkSnapshot& snapshot, std::span<const NodeId> sources);

}  // namespace gossipsim
