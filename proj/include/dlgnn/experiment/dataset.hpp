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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "dlgnn/error.hpp"
#include "dlgnn/experiment/io.hpp"
#include "dlgnn/graph.hpp"
#include "dlgnn/rng.hpp"
#include "dlgnn/walks.hpp"

namespace dlgnn::experiment {

enum class TargetKind { Triangles, FourCycles };

inline const char* to_string(TargetKind k) {
  return k == TargetKind::Triangles ? "triangles" : "four-cycles";
}

inline TargetKind parse_target_kind(const std::string& s) {
  if (s == "triangles") return TargetKind::Triangles;
  if (s == "four-cycles" || s == "4-cycles" || s == "fourcycles") return TargetKind::FourCycles;
  throw InputError("unknown target kind '" + s + "' (expected triangles or four-cycles)");
}

struct DatasetMetadata {
  std::size_t n_graphs = 0;
  std::size_t n_nodes = 0;
  double p = 0.0;
  TargetKind target = TargetKind::Triangles;
  std::uint64_t seed = 0;

  friend bool operator==(const DatasetMetadata&, const DatasetMetadata&) = default;
};

struct DatasetItem {
  Graph graph;
  double target = 0.0;
};

struct Dataset {
  std::vector<DatasetItem> items;
  DatasetMetadata metadata;

  std::vector<double> targets() const {
    std::vector<double> out;
    out.reserve(items.size());
    for (const auto& it : items) out.push_back(it.target);
    return out;
  }
};

inline double count_target(const Graph& g, TargetKind kind) {
  return static_cast<double>(kind == TargetKind::Triangles ? triangle_total(g)
                                                           : four_cycle_count(g));
}

// Graph i is erdos_renyi(n_nodes, p, derive_seed(seed, {i})), so any single
// graph can be regenerated from the metadata alone.
inline Dataset gen_dataset(std::size_t n_graphs, std::size_t n_nodes, double p,
                           TargetKind target, std::uint64_t seed) {
  if (n_graphs < 1 || n_nodes < 1) throw InputError("graph and node counts must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw InputError("edge probability must lie in [0,1]");
  Dataset ds;
  ds.metadata = {n_graphs, n_nodes, p, target, seed};
  ds.items.reserve(n_graphs);
  for (std::size_t i = 0; i < n_graphs; ++i) {
    Graph g = erdos_renyi(n_nodes, p, derive_seed(seed, {i}));
    const double y = count_target(g, target);
    ds.items.push_back({std::move(g), y});
  }
  return ds;
}

inline Dataset regenerate(const DatasetMetadata& m) {
  return gen_dataset(m.n_graphs, m.n_nodes, m.p, m.target, m.seed);
}

// One line per graph: {"n": int, "edges": [[u,v],...], "target": number}.
inline std::string to_jsonl(const Dataset& ds) {
  std::string out;
  for (const auto& item : ds.items) {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [u, v] : item.graph.edges()) edges.push_back({u, v});
    nlohmann::json line = {{"n", item.graph.node_count()}, {"edges", edges}};
    const double t = item.target;
    if (t == std::floor(t) && std::abs(t) < 9.0e15) {
      line["target"] = static_cast<std::int64_t>(t);
    } else {
      line["target"] = t;
    }
    out += line.dump();
    out += '\n';
  }
  return out;
}

inline nlohmann::json metadata_json(const DatasetMetadata& m) {
  return {{"n_graphs", m.n_graphs}, {"n_nodes", m.n_nodes}, {"p", m.p},
          {"target", to_string(m.target)}, {"seed", m.seed}};
}

inline DatasetMetadata metadata_from_json(const nlohmann::json& j) {
  DatasetMetadata m;
  m.n_graphs = j.at("n_graphs").get<std::size_t>();
  m.n_nodes = j.at("n_nodes").get<std::size_t>();
  m.p = j.at("p").get<double>();
  m.target = parse_target_kind(j.at("target").get<std::string>());
  m.seed = j.at("seed").get<std::uint64_t>();
  return m;
}

// Writes the JSONL file plus a "<path>.meta.json" sidecar holding the
// generator parameters.
inline void write_dataset(const Dataset& ds, const std::string& path) {
  write_file_atomic(path, to_jsonl(ds));
  write_file_atomic(path + ".meta.json", metadata_json(ds.metadata).dump(2) + "\n");
}

inline Dataset parse_jsonl(std::istream& in, const std::string& source = "<stream>") {
  Dataset ds;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      const auto n = j.at("n").get<std::size_t>();
      std::vector<Edge> edges;
      for (const auto& e : j.at("edges")) {
        const auto u = e.at(0).get<long long>();
        const auto v = e.at(1).get<long long>();
        if (u < 0 || v < 0) throw InputError("negative node id");
        edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
      }
      const double target = j.at("target").get<double>();
      if (!std::isfinite(target)) throw InputError("non-finite target");
      ds.items.push_back({Graph::from_edge_list(n, edges), target});
    } catch (const nlohmann::json::exception& e) {
      throw InputError(source + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const InputError& e) {
      throw InputError(source + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (ds.items.empty()) throw InputError(source + ": dataset is empty");
  ds.metadata.n_graphs = ds.items.size();
  ds.metadata.n_nodes = ds.items.front().graph.node_count();
  return ds;
}

inline Dataset read_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open dataset '" + path + "'");
  Dataset ds = parse_jsonl(in, path);
  std::ifstream meta(path + ".meta.json");
  if (meta) {
    nlohmann::json j;
    meta >> j;
    ds.metadata = metadata_from_json(j);
  }
  return ds;
}

}  // namespace dlgnn::experiment
