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

#include "dlgnn/wl.hpp"

#include <set>
#include <vector>

#include "gtest/gtest.h"

#include "dlgnn/canonical.hpp"
#include "oracles.hpp"

namespace dlgnn {
namespace {

std::set<std::set<NodeId>> partition(const Coloring& c) {
  std::vector<std::set<NodeId>> cells(c.class_count());
  for (NodeId v = 0; v < c.colors.size(); ++v) cells[c.colors[v]].insert(v);
  return {cells.begin(), cells.end()};
}

Coloring refine_by_degree(const Graph& g) {
  const auto labels = degree_labels(g);
  return wl_refine(g, labels);
}

TEST(WlRefineTest, PathSplitsByDistanceToEnd) {
  const Coloring c = refine_by_degree(path_graph(5));
  EXPECT_EQ(c.class_count(), 3u);
  EXPECT_EQ(c.colors[0], c.colors[4]);
  EXPECT_EQ(c.colors[1], c.colors[3]);
  EXPECT_NE(c.colors[0], c.colors[2]);
}

TEST(WlRefineTest, RegularGraphStaysUniform) {
  const Coloring c = refine_by_degree(cycle_graph(7));
  EXPECT_EQ(c.class_count(), 1u);
  EXPECT_EQ(c.rounds, 1u);
}

TEST(WlRefineTest, EmptyGraphAndLabelMismatch) {
  const Graph empty = Graph::from_edge_list(0, {});
  EXPECT_EQ(refine_by_degree(empty).class_count(), 0u);
  const std::vector<Label> labels{1, 2};
  EXPECT_THROW(wl_refine(path_graph(3), labels), InputError);
}

TEST(WlRefineTest, TerminatesWithinNodeCountRounds) {
  Rng rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.below(30);
    const Graph g = erdos_renyi(n, rng.uniform(0.05, 0.5), rng.next_u64());
    EXPECT_LE(refine_by_degree(g).rounds, n);
  }
}

TEST(WlRefineTest, StableColoringIsAFixedPoint) {
  Rng rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    const Graph g = erdos_renyi(20, 0.15, rng.next_u64());
    const Coloring c = refine_by_degree(g);
    const std::vector<Label> again(c.colors.begin(), c.colors.end());
    const Coloring d = wl_refine(g, again);
    EXPECT_EQ(d.rounds, 1u);
    EXPECT_EQ(partition(c), partition(d));
  }
}

TEST(WlRefineTest, EachRoundRefinesTheInitialPartition) {
  Rng rng(47);
  for (int trial = 0; trial < 30; ++trial) {
    const Graph g = erdos_renyi(25, 0.12, rng.next_u64());
    const auto labels = degree_labels(g);
    const Coloring c = wl_refine(g, labels);
    for (NodeId u = 0; u < 25; ++u) {
      for (NodeId v = 0; v < 25; ++v) {
        if (c.colors[u] == c.colors[v]) {
          EXPECT_EQ(labels[u], labels[v]);
        }
      }
    }
  }
}

TEST(WlFingerprintTest, InvariantUnderRelabeling) {
  Rng rng(53);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + rng.below(25);
    const Graph g = erdos_renyi(n, rng.uniform(0.1, 0.6), rng.next_u64());
    const Graph h = relabel(g, random_permutation(n, rng));
    EXPECT_EQ(wl_fingerprint(g), wl_fingerprint(h));
    EXPECT_EQ(wl_distinguish(g, h), Verdict::Indistinguishable);
    EXPECT_EQ(augmented_distinguish(g, h), Verdict::Indistinguishable);
  }
}

TEST(WlFingerprintTest, DistinguishedPairsAreNotIsomorphic) {
  Rng rng(59);
  for (int trial = 0; trial < 200; ++trial) {
    const Graph g = erdos_renyi(6, 0.5, rng.next_u64());
    const Graph h = erdos_renyi(6, 0.5, rng.next_u64());
    const bool iso = testing::isomorphic_by_search(g, h);
    if (wl_distinguish(g, h) == Verdict::Distinguishable) {
      EXPECT_FALSE(iso);
    }
    if (augmented_distinguish(g, h) == Verdict::Distinguishable) {
      EXPECT_FALSE(iso);
    }
    if (wl_distinguish(g, h) == Verdict::Distinguishable) {
      EXPECT_EQ(augmented_distinguish(g, h), Verdict::Distinguishable);
    }
  }
}

TEST(WlFingerprintTest, SeparatesDifferentSizesAndEdgeCounts) {
  EXPECT_EQ(wl_distinguish(path_graph(4), path_graph(5)), Verdict::Distinguishable);
  EXPECT_EQ(wl_distinguish(path_graph(4), cycle_graph(4)), Verdict::Distinguishable);
  EXPECT_EQ(wl_distinguish(path_graph(4), Graph::from_edge_list(4, {{0, 1}, {0, 2}, {0, 3}})),
            Verdict::Distinguishable);
}

TEST(WlGapTest, HexagonVersusTwoTriangles) {
  const Graph c6 = cycle_graph(6);
  const Graph two = disjoint_union(complete_graph(3), complete_graph(3));
  EXPECT_EQ(wl_distinguish(c6, two), Verdict::Indistinguishable);
  EXPECT_EQ(augmented_distinguish(c6, two), Verdict::Distinguishable);
  EXPECT_FALSE(is_isomorphic_small(c6, two));
  EXPECT_STREQ(to_string(Verdict::Distinguishable), "distinguishable");
  EXPECT_STREQ(to_string(Verdict::Indistinguishable), "indistinguishable");
}

TEST(WlGapTest, CubicGraphsOnEightNodes) {
  const auto cubic = testing::cubic_graphs_on_8();
  std::size_t augmented_pairs = 0;
  for (std::size_t i = 0; i < cubic.size(); ++i) {
    for (std::size_t j = i + 1; j < cubic.size(); ++j) {
      EXPECT_EQ(wl_distinguish(cubic[i], cubic[j]), Verdict::Indistinguishable);
      if (augmented_distinguish(cubic[i], cubic[j]) == Verdict::Distinguishable) {
        ++augmented_pairs;
      }
    }
  }
  EXPECT_GT(augmented_pairs, 0u);
}

TEST(DegreeTriangleLabelsTest, PacksBothValues) {
  const Graph g = Graph::from_edge_list(4, {{0, 1}, {0, 2}, {1, 2}, {2, 3}});
  const auto labels = degree_triangle_labels(g);
  EXPECT_EQ(labels[2], (Label{3} << 32) | 1);
  EXPECT_EQ(labels[3], Label{1} << 32);
}

}  // namespace
}  // namespace dlgnn
