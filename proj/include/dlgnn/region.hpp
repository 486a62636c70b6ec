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
#include <string>
#include <vector>

#include "dlgnn/error.hpp"
#include "dlgnn/graph.hpp"

namespace dlgnn {

enum class RegionKind { D, L };

// One member of the D-L hierarchy D_1 ⊆ L_1 ⊆ D_2 ⊆ L_2 ⊆ ...
struct RegionSpec {
  RegionKind kind = RegionKind::D;
  std::size_t radius = 1;

  RegionSpec() = default;
  RegionSpec(RegionKind kind_, std::size_t radius_) : kind(kind_), radius(radius_) {
    if (radius < 1) throw InputError("region radius must be >= 1");
  }

  // Longest returning walk whose edges make up the region: 2k for D_k,
  // 2k + 1 for L_k.
  std::size_t walk_length() const {
    return 2 * radius + (kind == RegionKind::L ? 1 : 0);
  }

  std::string name() const {
    return (kind == RegionKind::D ? "D" : "L") + std::to_string(radius);
  }
};

// Nodes and edges are kept sorted, edges as (u, v) with u < v.
struct RootedSubgraph {
  NodeId root = 0;
  std::vector<NodeId> nodes;
  std::vector<Edge> edges;

  friend bool operator==(const RootedSubgraph&, const RootedSubgraph&) = default;
};

// An edge (i, j) lies on a returning walk of length <= m iff
// d(i) + d(j) + 1 <= m, and a node lies on one iff 2 d(u) <= m. For D_k this
// keeps every node within k hops and drops exactly the edges joining two
// distance-k nodes; L_k keeps them.
inline RootedSubgraph extract_region(const Graph& g, NodeId v,
                                     const RegionSpec& spec) {
  const auto dist = bfs_distances(g, v);
  const std::size_t k = spec.radius;
  const std::size_t edge_budget = spec.walk_length() - 1;

  RootedSubgraph region;
  region.root = v;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (dist[u] <= k) region.nodes.push_back(u);
  }
  for (NodeId u : region.nodes) {
    for (NodeId w : g.neighbors(u)) {
      if (u < w && dist[w] != kUnreachable && dist[u] + dist[w] <= edge_budget) {
        region.edges.emplace_back(u, w);
      }
    }
  }
  return region;
}

// Set inclusion on both node and edge sets.
inline bool is_subregion(const RootedSubgraph& inner, const RootedSubgraph& outer) {
  return std::includes(outer.nodes.begin(), outer.nodes.end(),
                       inner.nodes.begin(), inner.nodes.end()) &&
         std::includes(outer.edges.begin(), outer.edges.end(),
                       inner.edges.begin(), inner.edges.end());
}

// Every edge endpoint is a member and every member is reachable from the
// root using only the region's own edges.
inline bool is_connected_region(const RootedSubgraph& r) {
  auto contains = [&](NodeId u) {
    return std::binary_search(r.nodes.begin(), r.nodes.end(), u);
  };
  if (!contains(r.root)) return false;
  for (const auto& [a, b] : r.edges) {
    if (!contains(a) || !contains(b)) return false;
  }
  std::vector<NodeId> seen{r.root};
  for (std::size_t head = 0; head < seen.size(); ++head) {
    const NodeId u = seen[head];
    for (const auto& [a, b] : r.edges) {
      NodeId other;
      if (a == u) other = b;
      else if (b == u) other = a;
      else continue;
      if (std::find(seen.begin(), seen.end(), other) == seen.end()) {
        seen.push_back(other);
      }
    }
  }
  return seen.size() == r.nodes.size();
}

}  // namespace dlgnn
