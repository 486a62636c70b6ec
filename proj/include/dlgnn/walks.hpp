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
#include <numeric>
#include <string>
#include <type_traits>
#include <vector>

#include "dlgnn/error.hpp"
#include "dlgnn/graph.hpp"
#include "dlgnn/matrix.hpp"

namespace dlgnn {

using Count = std::uint64_t;

// Exact walk-count matrix. Entries are unsigned 64-bit; every operation that
// could exceed that range checks and throws ArithmeticError.
using CountMatrix = Matrix<Count>;

namespace detail {

inline Count checked_add(Count a, Count b) {
  Count out;
  if (__builtin_add_overflow(a, b, &out)) {
    throw ArithmeticError("walk count overflows 64 bits");
  }
  return out;
}

inline Count checked_mul(Count a, Count b) {
  Count out;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw ArithmeticError("walk count overflows 64 bits");
  }
  return out;
}

// acc += w * x, exact for integer element types.
template <class T>
void multiply_add(T& acc, Count w, const T& x) {
  if constexpr (std::is_integral_v<T>) {
    T prod, sum;
    if (__builtin_mul_overflow(static_cast<T>(w), x, &prod) ||
        __builtin_add_overflow(acc, prod, &sum)) {
      throw ArithmeticError("walk count overflows its integer type");
    }
    acc = sum;
  } else {
    acc += static_cast<T>(w) * x;
  }
}

// y = A x for the loop-free adjacency of g, x and y with any column count.
template <class T>
void adjacency_apply(const Graph& g, const Matrix<T>& x, Matrix<T>& y) {
  y.fill(T{});
  for (NodeId v = 0; v < g.node_count(); ++v) {
    auto out = y.row(v);
    for (NodeId u : g.neighbors(v)) {
      auto in = x.row(u);
      for (std::size_t c = 0; c < out.size(); ++c) multiply_add(out[c], 1, in[c]);
    }
  }
}

}  // namespace detail

inline CountMatrix adjacency_counts(const Graph& g, bool with_self_loops) {
  const std::size_t n = g.node_count();
  CountMatrix a(n, n, 0);
  for (NodeId v = 0; v < n; ++v) {
    for (NodeId u : g.neighbors(v)) a(v, u) = 1;
    if (with_self_loops) a(v, v) = 1;
  }
  return a;
}

inline CountMatrix multiply(const CountMatrix& a, const CountMatrix& b) {
  if (a.cols() != b.rows()) {
    throw InputError("count matrix product: " + shape_string(a.rows(), a.cols()) +
                     " times " + shape_string(b.rows(), b.cols()));
  }
  CountMatrix out(a.rows(), b.cols(), 0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const Count w = a(i, l);
      if (w == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        detail::multiply_add(out(i, j), w, b(l, j));
      }
    }
  }
  return out;
}

// (A^k)_{vu} is the number of length-k walks from v to u.
inline CountMatrix mat_power(const CountMatrix& a, std::size_t k) {
  if (k < 1) throw InputError("matrix power exponent must be >= 1");
  if (a.rows() != a.cols()) throw InputError("matrix power needs a square matrix");
  CountMatrix result = a;
  for (std::size_t i = 1; i < k; ++i) result = multiply(result, a);
  return result;
}

// A^k h through k sparse applications of A; A^k itself is never formed.
template <class T>
Matrix<T> power_apply(const CountMatrix& a, std::size_t k, const Matrix<T>& h) {
  if (a.rows() != a.cols() || a.cols() != h.rows()) {
    throw InputError("power_apply: operator " + shape_string(a.rows(), a.cols()) +
                     " does not match features " + shape_string(h.rows(), h.cols()));
  }
  struct Entry {
    std::size_t col;
    Count weight;
  };
  std::vector<std::vector<Entry>> sparse(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a(i, j) != 0) sparse[i].push_back({j, a(i, j)});
    }
  }
  Matrix<T> cur = h;
  Matrix<T> next(h.rows(), h.cols());
  for (std::size_t step = 0; step < k; ++step) {
    next.fill(T{});
    for (std::size_t i = 0; i < sparse.size(); ++i) {
      auto out = next.row(i);
      for (const Entry& e : sparse[i]) {
        auto in = cur.row(e.col);
        for (std::size_t c = 0; c < out.size(); ++c) {
          detail::multiply_add(out[c], e.weight, in[c]);
        }
      }
    }
    std::swap(cur, next);
  }
  return cur;
}

// Same as above with the loop-free adjacency of g, O(k * Omega * cols).
template <class T>
Matrix<T> power_apply(const Graph& g, std::size_t k, const Matrix<T>& h) {
  if (h.rows() != g.node_count()) {
    throw InputError("power_apply: graph has " + std::to_string(g.node_count()) +
                     " nodes but features have " + std::to_string(h.rows()) +
                     " rows");
  }
  Matrix<T> cur = h;
  Matrix<T> next(h.rows(), h.cols());
  for (std::size_t step = 0; step < k; ++step) {
    detail::adjacency_apply(g, cur, next);
    std::swap(cur, next);
  }
  return cur;
}

// Entry v counts closed walks of length m at v, i.e. (A^m)_{vv} for the
// loop-free adjacency.
inline std::vector<Count> diag_closed_walks(const Graph& g, std::size_t m) {
  if (m < 1) throw InputError("closed walk length must be >= 1");
  const std::size_t n = g.node_count();
  std::vector<Count> out(n, 0);
  std::vector<Count> cur(n), next(n);
  for (NodeId v = 0; v < n; ++v) {
    std::fill(cur.begin(), cur.end(), 0);
    cur[v] = 1;
    for (std::size_t step = 0; step < m; ++step) {
      for (NodeId u = 0; u < n; ++u) {
        Count acc = 0;
        for (NodeId w : g.neighbors(u)) acc = detail::checked_add(acc, cur[w]);
        next[u] = acc;
      }
      std::swap(cur, next);
    }
    out[v] = cur[v];
  }
  return out;
}

// Each triangle through v is traversed by exactly two closed 3-walks at v.
inline std::vector<Count> triangle_counts_per_node(const Graph& g) {
  auto walks = diag_closed_walks(g, 3);
  for (Count& w : walks) {
    if (w % 2 != 0) throw InvariantError("odd closed 3-walk count");
    w /= 2;
  }
  return walks;
}

inline Count triangle_total(const Graph& g) {
  const auto per_node = triangle_counts_per_node(g);
  const Count sum = std::accumulate(per_node.begin(), per_node.end(), Count{0});
  return sum / 3;
}

// trace(A^4) counts closed 4-walks: 8 per 4-cycle, plus the degenerate
// walks that retrace one edge (2 per edge) or bounce between two distinct
// neighbors of a center (4 per pair of neighbors). Hence
//   #C4 = (trace(A^4) - 2 Omega - 4 sum_v C(d_v, 2)) / 8.
inline Count four_cycle_count(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<Count> two_walks(n, 0);
  std::vector<NodeId> touched;
  Count trace4 = 0;
  Count wedges = 0;
  for (NodeId v = 0; v < n; ++v) {
    touched.clear();
    for (NodeId u : g.neighbors(v)) {
      for (NodeId w : g.neighbors(u)) {
        if (two_walks[w]++ == 0) touched.push_back(w);
      }
    }
    for (NodeId w : touched) {
      trace4 = detail::checked_add(trace4, detail::checked_mul(two_walks[w], two_walks[w]));
      two_walks[w] = 0;
    }
    const Count d = g.degree(v);
    wedges = detail::checked_add(wedges, d * (d - (d > 0 ? 1 : 0)) / 2);
  }
  const Count retrace = detail::checked_mul(2, g.edge_count());
  const Count bounce = detail::checked_mul(4, wedges);
  const Count cycles8 = trace4 - retrace - bounce;
  if (trace4 < retrace + bounce || cycles8 % 8 != 0) {
    throw InvariantError("closed 4-walk identity violated");
  }
  return cycles8 / 8;
}

inline constexpr std::size_t kBruteCycleMaxNodes = 64;

// Independent oracle: depth-first enumeration of simple cycles of the given
// length, each rooted at its smallest vertex. Both traversal directions are
// found, so the raw count is halved.
inline Count count_simple_cycles_brute(const Graph& g, std::size_t length) {
  if (length < 3 || length > 5) {
    throw InputError("cycle length must be 3, 4 or 5");
  }
  if (g.node_count() > kBruteCycleMaxNodes) {
    throw CapacityError("brute-force cycle count limited to " +
                        std::to_string(kBruteCycleMaxNodes) + " nodes, got " +
                        std::to_string(g.node_count()));
  }
  Count found = 0;
  std::vector<NodeId> path;
  std::vector<char> on_path(g.node_count(), 0);

  auto extend = [&](auto&& self, NodeId start) -> void {
    const NodeId last = path.back();
    if (path.size() == length) {
      if (g.has_edge(last, start)) ++found;
      return;
    }
    for (NodeId next : g.neighbors(last)) {
      if (next <= start || on_path[next]) continue;
      on_path[next] = 1;
      path.push_back(next);
      self(self, start);
      path.pop_back();
      on_path[next] = 0;
    }
  };

  for (NodeId s = 0; s < g.node_count(); ++s) {
    path.assign(1, s);
    on_path[s] = 1;
    extend(extend, s);
    on_path[s] = 0;
  }
  return found / 2;
}

}  // namespace dlgnn
