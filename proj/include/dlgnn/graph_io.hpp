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

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "dlgnn/error.hpp"
#include "dlgnn/graph.hpp"

namespace dlgnn {

// Edge-list text: a header line "n m" followed by m lines "u v", 0-based.
// Blank lines and lines whose first non-space character is '#' are skipped.
inline Graph read_edge_list(std::istream& in) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    lines.push_back(line);
  }
  if (lines.empty()) throw InputError("edge list: missing header line");

  long long n = -1, m = -1;
  {
    std::istringstream header(lines[0]);
    if (!(header >> n >> m) || n < 0 || m < 0) {
      throw InputError("edge list: malformed header '" + lines[0] + "'");
    }
  }
  if (static_cast<long long>(lines.size()) - 1 != m) {
    throw InputError("edge list: header declares " + std::to_string(m) +
                     " edges but " + std::to_string(lines.size() - 1) +
                     " follow");
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::istringstream row(lines[i]);
    long long u = -1, v = -1;
    if (!(row >> u >> v) || u < 0 || v < 0) {
      throw InputError("edge list: malformed edge line '" + lines[i] + "'");
    }
    if (u >= n || v >= n) {
      throw InputError("edge list: edge (" + std::to_string(u) + "," +
                       std::to_string(v) + ") out of range for n=" +
                       std::to_string(n));
    }
    edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
  }
  return Graph::from_edge_list(static_cast<std::size_t>(n), edges);
}

inline Graph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open graph file '" + path + "'");
  return read_edge_list(in);
}

inline void write_edge_list(std::ostream& out, const Graph& g) {
  out << g.node_count() << ' ' << g.edge_count() << '\n';
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

}  // namespace dlgnn
