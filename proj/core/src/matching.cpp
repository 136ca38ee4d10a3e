#include "gossipsim/matching.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>

namespace gossipsim::central {

namespace {

class HopcroftKarp {
 public:
  HopcroftKarp(std::size_t tokens, std::size_t senders, std::vector<std::vector<std::size_t>> adj)
      : adj_(std::move(adj)),
        match_token_(tokens, kFree),
        match_sender_(senders, kFree),
        dist_(tokens, 0) {}

  void run() {
    while (bfs()) {
      for (std::size_t t = 0; t < adj_.size(); ++t) {
        if (match_token_[t] == kFree) dfs(t);
      }
    }
  }

  const std::vector<std::size_t>& token_matches() const { return match_token_; }

  static constexpr std::size_t kFree = std::numeric_limits<std::size_t>::max();

 private:
  bool bfs() {
    std::queue<std::size_t> q;
    bool found = false;
    for (std::size_t t = 0; t < adj_.size(); ++t) {
      if (match_token_[t] == kFree) {
        dist_[t] = 0;
        q.push(t);
      } else {
        dist_[t] = kInf;
      }
    }
    while (!q.empty()) {
      const auto t = q.front();
      q.pop();
      for (auto s : adj_[t]) {
        const auto next = match_sender_[s];
        if (next == kFree) {
          found = true;
        } else if (dist_[next] == kInf) {
          dist_[next] = dist_[t] + 1;
          q.push(next);
        }
      }
    }
    return found;
  }

  bool dfs(std::size_t t) {
    for (auto s : adj_[t]) {
      const auto next = match_sender_[s];
      if (next == kFree || (dist_[next] == dist_[t] + 1 && dfs(next))) {
        match_token_[t] = s;
        match_sender_[s] = t;
        return true;
      }
    }
    dist_[t] = kInf;
    return false;
  }

  static constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();

  std::vector<std::vector<std::size_t>> adj_;
  std::vector<std::size_t> match_token_;
  std::vector<std::size_t> match_sender_;
  std::vector<std::size_t> dist_;
};

}  // namespace

Matching max_bipartite_matching(const BipartiteInstance& instance) {
  std::vector<NodeId> left = instance.left;
  std::vector<TokenId> right = instance.right;
  std::sort(left.begin(), left.end());
  std::sort(right.begin(), right.end());
  left.erase(std::unique(left.begin(), left.end()), left.end());
  right.erase(std::unique(right.begin(), right.end()), right.end());

  std::vector<std::vector<std::size_t>> adj(right.size());
  for (const auto& [u, t] : instance.adjacency) {
    const auto li = std::lower_bound(left.begin(), left.end(), u);
    const auto ri = std::lower_bound(right.begin(), right.end(), t);
    if (li == left.end() || *li != u || ri == right.end() || *ri != t) {
      throw std::invalid_argument("matching adjacency refers to a vertex outside the instance");
    }
    adj[static_cast<std::size_t>(ri - right.begin())].push_back(
        static_cast<std::size_t>(li - left.begin()));
  }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }

  HopcroftKarp hk(right.size(), left.size(), std::move(adj));
  hk.run();
  Matching result;
  const auto& m = hk.token_matches();
  for (std::size_t t = 0; t < m.size(); ++t) {
    if (m[t] != HopcroftKarp::kFree) result.emplace_back(left[m[t]], right[t]);
  }
  return result;
}

}  // namespace gossipsim::central
