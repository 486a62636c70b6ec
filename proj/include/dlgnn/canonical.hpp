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
#include <cstdint>
#include <string>
#include <vector>

#include "dlgnn/error.hpp"
#include "dlgnn/graph.hpp"
#include "dlgnn/matrix.hpp"

namespace dlgnn {

inline constexpr std::size_t kCanonicalMaxNodes = 8;

// Lexicographically smallest row-major adjacency vector over all node
// orderings. Equal forms <=> isomorphic graphs.
struct CanonicalForm {
  std::size_t n = 0;
  std::vector<std::uint8_t> bits;

  friend bool operator==(const CanonicalForm&, const CanonicalForm&) = default;
  friend auto operator<=>(const CanonicalForm&, const CanonicalForm&) = default;
};

using BitMatrix = Matrix<std::uint8_t>;

// Factorial search over orderings. A partial ordering of depth d fixes the
// first d entries of row 0; a branch is cut as soon as that prefix compares
// greater than the best vector found so far.
inline CanonicalForm canonical_form(const BitMatrix& a,
                                    std::size_t max_nodes = kCanonicalMaxNodes) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw InputError("canonical_form needs a square matrix");
  if (n > max_nodes) {
    throw CapacityError("canonical_form limited to " + std::to_string(max_nodes) +
                        " nodes, got " + std::to_string(n));
  }
  for (auto x : a.values()) {
    if (x > 1) throw InputError("canonical_form needs a 0/1 matrix");
  }
  CanonicalForm best{n, {}};
  if (n == 0) return best;

  std::vector<std::size_t> order;
  std::vector<char> used(n, 0);
  std::vector<std::uint8_t> candidate(n * n);

  // -1: prefix smaller, 0: equal so far, 1: larger.
  auto compare_row0_prefix = [&](std::size_t depth) {
    for (std::size_t j = 0; j < depth; ++j) {
      const auto x = a(order[0], order[j]);
      if (x != best.bits[j]) return x < best.bits[j] ? -1 : 1;
    }
    return 0;
  };

  auto search = [&](auto&& self) -> void {
    const std::size_t depth = order.size();
    if (!best.bits.empty() && compare_row0_prefix(depth) > 0) return;
    if (depth == n) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) candidate[i * n + j] = a(order[i], order[j]);
      }
      if (best.bits.empty() || candidate < best.bits) best.bits = candidate;
      return;
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (used[v]) continue;
      used[v] = 1;
      order.push_back(v);
      self(self);
      order.pop_back();
      used[v] = 0;
    }
  };
  search(search);
  return best;
}

inline BitMatrix adjacency_bits(const Graph& g, bool with_self_loop_diagonal) {
  const std::size_t n = g.node_count();
  BitMatrix a(n, n, 0);
  for (NodeId v = 0; v < n; ++v) {
    for (NodeId u : g.neighbors(v)) a(v, u) = 1;
    if (with_self_loop_diagonal) a(v, v) = 1;
  }
  return a;
}

inline CanonicalForm canonical_form(const Graph& g, bool with_self_loop_diagonal,
                                    std::size_t max_nodes = kCanonicalMaxNodes) {
  if (g.node_count() > max_nodes) {
    throw CapacityError("canonical_form limited to " + std::to_string(max_nodes) +
                        " nodes, got " + std::to_string(g.node_count()));
  }
  return canonical_form(adjacency_bits(g, with_self_loop_diagonal), max_nodes);
}

inline bool is_isomorphic_small(const Graph& g1, const Graph& g2,
                                std::size_t max_nodes = kCanonicalMaxNodes) {
  if (g1.node_count() > max_nodes || g2.node_count() > max_nodes) {
    throw CapacityError("is_isomorphic_small limited to " + std::to_string(max_nodes) +
                        " nodes");
  }
  if (g1.node_count() != g2.node_count()) return false;
  if (g1.edge_count() != g2.edge_count()) return false;
  return canonical_form(g1, false, max_nodes) == canonical_form(g2, false, max_nodes);
}

}  // namespace dlgnn
