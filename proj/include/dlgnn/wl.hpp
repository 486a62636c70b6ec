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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dlgnn/graph.hpp"
#include "dlgnn/walks.hpp"

namespace dlgnn {

using Label = std::int64_t;

// Stable 1-WL coloring. Colors are contiguous in [0, class_count) and are
// assigned in sorted order of the refinement signatures, so two isomorphic
// graphs receive the same color for corresponding nodes.
struct Coloring {
  std::vector<std::size_t> colors;
  std::size_t rounds = 0;

  std::size_t class_count() const {
    return colors.empty() ? 0 : *std::max_element(colors.begin(), colors.end()) + 1;
  }
};

struct Fingerprint {
  std::string bytes;
  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

enum class Verdict { Distinguishable, Indistinguishable };

inline const char* to_string(Verdict v) {
  return v == Verdict::Distinguishable ? "distinguishable" : "indistinguishable";
}

namespace detail {

using Signature = std::vector<Label>;

// Relabels by rank among the distinct keys; returns the histogram of keys.
template <class Key>
std::map<Key, std::size_t> compress(const std::vector<Key>& keys,
                                    std::vector<std::size_t>& colors) {
  std::map<Key, std::size_t> histogram;
  for (const Key& k : keys) ++histogram[k];
  std::map<Key, std::size_t> rank;
  std::size_t next = 0;
  for (const auto& [k, count] : histogram) rank.emplace(k, next++);
  colors.resize(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) colors[i] = rank.at(keys[i]);
  return histogram;
}

inline void append_label(std::string& out, Label x) {
  out += std::to_string(x);
}

struct Refinement {
  Coloring coloring;
  std::string trace;
};

// Runs 1-WL to stability. The trace records, for the initial labels and for
// every round, the sorted histogram of keys; it is the fingerprint payload.
inline Refinement refine(const Graph& g, std::span<const Label> initial) {
  const std::size_t n = g.node_count();
  if (initial.size() != n) {
    throw InputError("wl_refine: " + std::to_string(initial.size()) +
                     " labels for " + std::to_string(n) + " nodes");
  }
  Refinement r;
  auto& colors = r.coloring.colors;
  {
    const auto hist = compress(std::vector<Label>(initial.begin(), initial.end()), colors);
    r.trace += "0:";
    for (const auto& [label, count] : hist) {
      append_label(r.trace, label);
      r.trace += '*' + std::to_string(count) + ',';
    }
  }
  std::size_t classes = r.coloring.class_count();
  std::vector<Signature> signatures(n);
  std::vector<std::size_t> next;
  while (n > 0) {
    ++r.coloring.rounds;
    for (NodeId v = 0; v < n; ++v) {
      // (own color; sorted colors over N(v) = adj(v) ∪ {v})
      Signature& s = signatures[v];
      s.clear();
      s.push_back(static_cast<Label>(colors[v]));
      s.push_back(static_cast<Label>(colors[v]));
      for (NodeId u : g.neighbors(v)) s.push_back(static_cast<Label>(colors[u]));
      std::sort(s.begin() + 1, s.end());
    }
    const auto hist = compress(signatures, next);
    r.trace += '|' + std::to_string(r.coloring.rounds) + ':';
    for (const auto& [sig, count] : hist) {
      r.trace += '(';
      for (Label x : sig) {
        append_label(r.trace, x);
        r.trace += ' ';
      }
      r.trace += ")*" + std::to_string(count) + ',';
    }
    const std::size_t new_classes = hist.size();
    colors.swap(next);
    if (new_classes == classes) break;
    classes = new_classes;
  }
  return r;
}

}  // namespace detail

// Refines until one further round leaves the number of classes unchanged.
// Since the own color leads each signature, every round refines the previous
// partition, so an unchanged class count means an unchanged partition.
inline Coloring wl_refine(const Graph& g, std::span<const Label> initial_labels) {
  return detail::refine(g, initial_labels).coloring;
}

inline std::vector<Label> degree_labels(const Graph& g) {
  std::vector<Label> labels(g.node_count());
  for (NodeId v = 0; v < labels.size(); ++v) labels[v] = static_cast<Label>(g.degree(v));
  return labels;
}

// Pairs (degree, triangles at v) packed injectively into one label.
inline std::vector<Label> degree_triangle_labels(const Graph& g) {
  const auto triangles = triangle_counts_per_node(g);
  std::vector<Label> labels(g.node_count());
  for (NodeId v = 0; v < labels.size(); ++v) {
    if (triangles[v] >= (Count{1} << 32)) {
      throw ArithmeticError("triangle count too large for label packing");
    }
    labels[v] = (static_cast<Label>(g.degree(v)) << 32) | static_cast<Label>(triangles[v]);
  }
  return labels;
}

// Deterministic, relabeling-invariant summary: the per-round signature
// histograms followed by the final (color, class size) pairs. Two graphs share
// a fingerprint exactly when 1-WL run jointly on both cannot separate them.
inline Fingerprint wl_fingerprint(const Graph& g,
                                  std::optional<std::span<const Label>> initial_labels = {}) {
  std::vector<Label> defaults;
  if (!initial_labels) {
    defaults = degree_labels(g);
    initial_labels = defaults;
  }
  auto r = detail::refine(g, *initial_labels);
  std::vector<std::size_t> sizes(r.coloring.class_count(), 0);
  for (std::size_t c : r.coloring.colors) ++sizes[c];
  r.trace += "|final:";
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    r.trace += std::to_string(c) + '*' + std::to_string(sizes[c]) + ',';
  }
  return Fingerprint{std::move(r.trace)};
}

// Distinguishable is a proof of non-isomorphism; Indistinguishable proves
// nothing.
inline Verdict wl_distinguish(const Graph& g1, const Graph& g2) {
  return wl_fingerprint(g1) == wl_fingerprint(g2) ? Verdict::Indistinguishable
                                                  : Verdict::Distinguishable;
}

// 1-WL seeded with (degree, per-node triangle count) labels, i.e. the
// information an L_1-class layer with a diag(A^3) term can see.
inline Verdict augmented_distinguish(const Graph& g1, const Graph& g2) {
  const auto l1 = degree_triangle_labels(g1);
  const auto l2 = degree_triangle_labels(g2);
  return wl_fingerprint(g1, std::span<const Label>(l1)) ==
                 wl_fingerprint(g2, std::span<const Label>(l2))
             ? Verdict::Indistinguishable
             : Verdict::Distinguishable;
}

}  // namespace dlgnn
