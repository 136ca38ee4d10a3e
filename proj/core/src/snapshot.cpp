#include "gossipsim/snapshot.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace gossipsim {

NetworkSnapshot::NetworkSnapshot(std::size_t node_count, std::vector<Edge> edges)
    : node_count_(node_count), edges_(std::move(edges)) {
  for (auto& e : edges_) {
    if (e.u >= node_count_ || e.v >= node_count_) {
      throw std::out_of_range("edge endpoint outside node range");
    }
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges_.begin(), edges_.end());

  std::vector<std::size_t> degree(node_count_, 0);
  const Edge* prev = nullptr;
  for (const auto& e : edges_) {
    const bool repeat = prev != nullptr && *prev == e;
    prev = &e;
    if (e.u == e.v || repeat) continue;
    ++degree[e.u];
    ++degree[e.v];
  }
  offsets_.assign(node_count_ + 1, 0);
  for (std::size_t i = 0; i < node_count_; ++i) offsets_[i + 1] = offsets_[i] + degree[i];
  adjacency_.resize(offsets_.back());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  prev = nullptr;
  for (const auto& e : edges_) {
    const bool repeat = prev != nullptr && *prev == e;
    prev = &e;
    if (e.u == e.v || repeat) continue;
    adjacency_[fill[e.u]++] = e.v;
    adjacency_[fill[e.v]++] = e.u;
  }
  for (std::size_t i = 0; i < node_count_; ++i) {
    std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]),
              adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]));
  }
}

bool NetworkSnapshot::has_edge(NodeId a, NodeId b) const {
  if (a >= node_count_ || b >= node_count_) return false;
  const auto nb = neighbors(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

NetworkSnapshot NetworkSnapshot::path(std::span<const NodeId> order, std::size_t node_count) {
  std::vector<Edge> edges;
  edges.reserve(order.size());
  for (std::size_t i = 1; i < order.size(); ++i) edges.push_back({order[i - 1], order[i]});
  return NetworkSnapshot(node_count, std::move(edges));
}

NetworkSnapshot NetworkSnapshot::line(std::size_t node_count) {
  std::vector<Edge> edges;
  for (std::size_t i = 1; i < node_count; ++i) {
    edges.push_back({static_cast<NodeId>(i - 1), static_cast<NodeId>(i)});
  }
  return NetworkSnapshot(node_count, std::move(edges));
}

NetworkSnapshot NetworkSnapshot::cycle(std::size_t node_count) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < node_count; ++i) {
    edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>((i + 1) % node_count)});
  }
  return NetworkSnapshot(node_count, std::move(edges));
}

NetworkSnapshot NetworkSnapshot::complete(std::size_t node_count) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < node_count; ++i) {
    for (std::size_t j = i + 1; j < node_count; ++j) {
      edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j)});
    }
  }
  return NetworkSnapshot(node_count, std::move(edges));
}

NetworkSnapshot NetworkSnapshot::star(std::size_t node_count, NodeId center) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < node_count; ++i) {
    if (i != center) edges.push_back({center, static_cast<NodeId>(i)});
  }
  return NetworkSnapshot(node_count, std::move(edges));
}

SnapshotCheck validate_snapshot(const NetworkSnapshot& snapshot) {
  SnapshotCheck check;
  const auto edges = snapshot.edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i].u == edges[i].v) {
      return {false, "self-loop", {edges[i].u}};
    }
    if (i > 0 && edges[i] == edges[i - 1]) {
      return {false, "duplicate-edge", {edges[i].u, edges[i].v}};
    }
  }
  if (snapshot.node_count() == 0) return {false, "empty", {}};

  const NodeId root = 0;
  const auto dist = bfs_distances(snapshot, std::span<const NodeId>(&root, 1));
  std::vector<NodeId> unreached;
  for (std::size_t v = 0; v < dist.size(); ++v) {
    if (dist[v] < 0) unreached.push_back(static_cast<NodeId>(v));
  }
  if (!unreached.empty()) {
    check.ok = false;
    check.violation = "disconnected";
    check.witness = std::move(unreached);
  }
  return check;
}

std::vector<int> bfs_distances(const NetworkSnapshot& snapshot, std::span<const NodeId> sources) {
  std::vector<int> dist(snapshot.node_count(), -1);
  std::deque<NodeId> queue;
  for (NodeId s : sources) {
    if (dist[s] < 0) {
      dist[s] = 0;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    for (NodeId w : snapshot.neighbors(u)) {
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

}  // namespace gossipsim
