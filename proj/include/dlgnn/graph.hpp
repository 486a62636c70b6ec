// Copyright 2026 The dlgnn Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dlgnn/error.hpp"
#include "dlgnn/rng.hpp"

namespace dlgnn {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

inline constexpr std::size_t kUnreachable =
    std::numeric_limits<std::size_t>::max();

// Immutable undirected simple graph. Neighbor lists are sorted, symmetric
// and loop-free; self-loops are never stored and are added explicitly by the
// operators that want them.
class Graph {
 public:
  Graph() = default;

  // Duplicate pairs (in either orientation) and self-loops are dropped.
  static Graph from_edge_list(std::size_t n, std::span<const Edge> edges) {
    Graph g;
    g.adjacency_.resize(n);
    for (const auto& [u, v] : edges) {
      if (u >= n || v >= n) {
        throw InputError("edge (" + std::to_string(u) + "," +
                         std::to_string(v) + ") out of range for n=" +
                         std::to_string(n));
      }
      if (u == v) continue;
      g.adjacency_[u].push_back(v);
      g.adjacency_[v].push_back(u);
    }
    std::size_t total = 0;
    for (auto& adj : g.adjacency_) {
      std::sort(adj.begin(), adj.end());
      adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
      total += adj.size();
    }
    g.edge_count_ = total / 2;
    return g;
  }

  static Graph from_edge_list(std::size_t n, std::initializer_list<Edge> edges) {
    return from_edge_list(n, std::span<const Edge>(edges.begin(), edges.size()));
  }

  std::size_t node_count() const { return adjacency_.size(); }
  std::size_t edge_count() const { return edge_count_; }

  std::span<const NodeId> neighbors(NodeId v) const { return adjacency_[v]; }
  std::size_t degree(NodeId v) const { return adjacency_[v].size(); }

  bool has_edge(NodeId u, NodeId v) const {
    const auto& adj = adjacency_[u];
    return std::binary_search(adj.begin(), adj.end(), v);
  }

  // Each undirected edge once, as (u, v) with u < v, in sorted order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (NodeId u = 0; u < adjacency_.size(); ++u) {
      for (NodeId v : adjacency_[u]) {
        if (u < v) out.emplace_back(u, v);
      }
    }
    return out;
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::vector<NodeId>> adjacency_;
  std::size_t edge_count_ = 0;
};

inline std::vector<std::size_t> degrees(const Graph& g) {
  std::vector<std::size_t> d(g.node_count());
  for (NodeId v = 0; v < d.size(); ++v) d[v] = g.degree(v);
  return d;
}

inline void check_node(const Graph& g, NodeId v) {
  if (v >= g.node_count()) {
    throw InputError("node " + std::to_string(v) + " out of range for n=" +
                     std::to_string(g.node_count()));
  }
}

// Hop distances from `source`; nodes in other components get kUnreachable.
inline std::vector<std::size_t> bfs_distances(const Graph& g, NodeId source) {
  check_node(g, source);
  std::vector<std::size_t> dist(g.node_count(), kUnreachable);
  std::queue<NodeId> frontier;
  dist[source] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    const NodeId u = frontier.front();
    frontier.pop();
    for (NodeId w : g.neighbors(u)) {
      if (dist[w] == kUnreachable) {
        dist[w] = dist[u] + 1;
        frontier.push(w);
      }
    }
  }
  return dist;
}

// G(n, p): every unordered pair {i, j}, i < j, visited in lexicographic
// order and kept when the next uniform draw is below p.
inline Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InputError("edge probability must lie in [0,1], got " +
                     std::to_string(p));
  }
  Rng rng(seed);
  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      if (rng.bernoulli(p)) edges.emplace_back(i, j);
    }
  }
  return Graph::from_edge_list(n, edges);
}

// Image of g under the relabeling v -> perm[v].
inline Graph relabel(const Graph& g, std::span<const NodeId> perm) {
  if (perm.size() != g.node_count()) {
    throw InputError("permutation size does not match node count");
  }
  std::vector<Edge> edges;
  for (const auto& [u, v] : g.edges()) edges.emplace_back(perm[u], perm[v]);
  return Graph::from_edge_list(g.node_count(), edges);
}

inline std::vector<NodeId> random_permutation(std::size_t n, Rng& rng) {
  std::vector<NodeId> perm(n);
  for (NodeId i = 0; i < n; ++i) perm[i] = i;
  rng.shuffle(perm);
  return perm;
}

inline Graph disjoint_union(const Graph& a, const Graph& b) {
  const auto offset = static_cast<NodeId>(a.node_count());
  std::vector<Edge> edges = a.edges();
  for (const auto& [u, v] : b.edges()) edges.emplace_back(u + offset, v + offset);
  return Graph::from_edge_list(a.node_count() + b.node_count(), edges);
}

inline Graph path_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (NodeId i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return Graph::from_edge_list(n, edges);
}

inline Graph cycle_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i) {
    edges.emplace_back(i, static_cast<NodeId>((i + 1) % n));
  }
  return Graph::from_edge_list(n, edges);
}

inline Graph complete_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  }
  return Graph::from_edge_list(n, edges);
}

}  // namespace dlgnn
