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

#include "dlgnn/canonical.hpp"

#include <map>
#include <vector>

#include "gtest/gtest.h"

#include "oracles.hpp"

namespace dlgnn {
namespace {

TEST(CanonicalFormTest, SmallMatrices) {
  EXPECT_EQ(canonical_form(BitMatrix{{1, 1}, {1, 0}}).bits, (std::vector<std::uint8_t>{0, 1, 1, 1}));
  EXPECT_EQ(canonical_form(BitMatrix{{0, 1}, {1, 0}}).bits, (std::vector<std::uint8_t>{0, 1, 1, 0}));
  EXPECT_EQ(canonical_form(BitMatrix{{0, 0}, {0, 0}}).bits, (std::vector<std::uint8_t>{0, 0, 0, 0}));
  EXPECT_TRUE(canonical_form(BitMatrix(0, 0)).bits.empty());
}

TEST(CanonicalFormTest, PathOnThreeNodes) {
  // Ends first, middle last: rows (0 0 1), (0 0 1), (1 1 0).
  EXPECT_EQ(canonical_form(path_graph(3), false).bits,
            (std::vector<std::uint8_t>{0, 0, 1, 0, 0, 1, 1, 1, 0}));
  EXPECT_EQ(canonical_form(path_graph(3), true).bits,
            (std::vector<std::uint8_t>{1, 0, 1, 0, 1, 1, 1, 1, 1}));
}

TEST(CanonicalFormTest, RejectsBadInput) {
  EXPECT_THROW(canonical_form(BitMatrix(2, 3)), InputError);
  EXPECT_THROW(canonical_form(BitMatrix{{0, 2}, {2, 0}}), InputError);
  EXPECT_THROW(canonical_form(cycle_graph(9), false), CapacityError);
  EXPECT_THROW(canonical_form(BitMatrix(9, 9)), CapacityError);
  EXPECT_THROW(is_isomorphic_small(cycle_graph(9), cycle_graph(9)), CapacityError);
  EXPECT_NO_THROW(canonical_form(cycle_graph(9), false, 9));
}

// Same form <=> same orbit of edge masks, over every graph on up to 5 nodes.
TEST(CanonicalFormTest, ExhaustiveAgainstOrbitSearch) {
  for (std::size_t n = 1; n <= 5; ++n) {
    const std::size_t pairs = n * (n - 1) / 2;
    std::map<std::uint64_t, CanonicalForm> by_orbit;
    std::map<CanonicalForm, std::uint64_t> by_form;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs); ++mask) {
      const Graph g = testing::graph_from_mask(n, mask);
      const auto orbit = testing::orbit_min_mask(g);
      const auto form = canonical_form(g, false);
      auto [it, fresh] = by_orbit.emplace(orbit, form);
      EXPECT_EQ(it->second, form);
      auto [jt, fresh2] = by_form.emplace(form, orbit);
      EXPECT_EQ(jt->second, orbit);
    }
    const std::size_t classes[] = {0, 1, 2, 4, 11, 34};
    EXPECT_EQ(by_orbit.size(), classes[n]);
  }
}

TEST(CanonicalFormTest, RandomSixNodePairs) {
  Rng rng(61);
  for (int trial = 0; trial < 300; ++trial) {
    const Graph g = erdos_renyi(6, 0.5, rng.next_u64());
    const Graph h = trial % 3 == 0 ? relabel(g, random_permutation(6, rng))
                                   : erdos_renyi(6, 0.5, rng.next_u64());
    EXPECT_EQ(is_isomorphic_small(g, h), testing::isomorphic_by_search(g, h));
  }
}

TEST(CanonicalFormTest, InvariantUnderRelabeling) {
  Rng rng(67);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = erdos_renyi(8, 0.4, rng.next_u64());
    const Graph h = relabel(g, random_permutation(8, rng));
    EXPECT_EQ(canonical_form(g, true), canonical_form(h, true));
  }
}

TEST(CanonicalFormTest, CubicRepresentativesAreDistinct) {
  const auto cubic = testing::cubic_graphs_on_8();
  for (std::size_t i = 0; i < cubic.size(); ++i) {
    for (std::size_t j = i + 1; j < cubic.size(); ++j) {
      EXPECT_FALSE(is_isomorphic_small(cubic[i], cubic[j])) << i << " " << j;
    }
  }
}

}  // namespace
}  // namespace dlgnn
