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

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dlgnn/canonical.hpp"
#include "dlgnn/error.hpp"
#include "dlgnn/graph.hpp"
#include "dlgnn/region.hpp"
#include "dlgnn/walks.hpp"
#include "dlgnn/wl.hpp"

namespace dlgnn::experiment {

struct WlGapReport {
  std::string first = "C6";
  std::string second = "C3+C3";
  Verdict wl = Verdict::Indistinguishable;
  Verdict augmented = Verdict::Indistinguishable;
  bool isomorphic = false;
  std::vector<Count> first_triangles;
  std::vector<Count> second_triangles;

  nlohmann::json to_json() const {
    return {{"pair", {first, second}},
            {"wl", to_string(wl)},
            {"augmented", to_string(augmented)},
            {"isomorphic", isomorphic},
            {"triangles", {{first, first_triangles}, {second, second_triangles}}}};
  }
};

// The 6-cycle and two disjoint triangles: both 2-regular on six nodes, so
// plain 1-WL never separates them, while triangle-seeded refinement does.
inline WlGapReport demo_wl_gap() {
  const Graph c6 = cycle_graph(6);
  const Graph two_triangles = disjoint_union(cycle_graph(3), cycle_graph(3));
  WlGapReport r;
  r.wl = wl_distinguish(c6, two_triangles);
  r.augmented = augmented_distinguish(c6, two_triangles);
  r.isomorphic = is_isomorphic_small(c6, two_triangles);
  r.first_triangles = triangle_counts_per_node(c6);
  r.second_triangles = triangle_counts_per_node(two_triangles);
  return r;
}

struct RegionRow {
  std::size_t k = 0;
  std::size_t d_nodes = 0, d_edges = 0;
  std::size_t l_nodes = 0, l_edges = 0;
};

struct RegionReport {
  NodeId node = 0;
  std::vector<RegionRow> rows;

  nlohmann::json to_json() const {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : rows) {
      out.push_back({{"k", r.k},
                     {"D", {{"nodes", r.d_nodes}, {"edges", r.d_edges}}},
                     {"L", {{"nodes", r.l_nodes}, {"edges", r.l_edges}}}});
    }
    return {{"node", node}, {"regions", out}};
  }
};

// Sizes of D_k(v) and L_k(v) for k = 1..k_max. Throws InvariantError if
// D_1 ⊆ L_1 ⊆ D_2 ⊆ ... ⊆ L_kmax fails anywhere, or a region is disconnected.
inline RegionReport region_report(const Graph& g, NodeId v, std::size_t k_max) {
  check_node(g, v);
  if (k_max < 1) throw InputError("k_max must be >= 1");
  RegionReport report;
  report.node = v;
  std::optional<RootedSubgraph> previous;
  for (std::size_t k = 1; k <= k_max; ++k) {
    const auto d = extract_region(g, v, {RegionKind::D, k});
    const auto l = extract_region(g, v, {RegionKind::L, k});
    for (const auto* r : {&d, &l}) {
      if (!is_connected_region(*r)) {
        throw InvariantError("region at k=" + std::to_string(k) + " is not connected");
      }
    }
    if ((previous && !is_subregion(*previous, d)) || !is_subregion(d, l)) {
      throw InvariantError("nesting chain violated at k=" + std::to_string(k));
    }
    report.rows.push_back({k, d.nodes.size(), d.edges.size(), l.nodes.size(), l.edges.size()});
    previous = l;
  }
  return report;
}

}  // namespace dlgnn::experiment
