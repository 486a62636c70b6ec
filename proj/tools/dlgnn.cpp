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

// dlgnn command-line driver.
//
//   dlgnn gen --graphs 200 --nodes 50 --prob 0.1 --target triangles --out ds.jsonl
//   dlgnn count graph.txt
//   dlgnn wl a.txt b.txt
//   dlgnn regions graph.txt --node 0 --kmax 3
//   dlgnn train --config experiment.cfg --out results/
//   dlgnn demo-wl-gap
//
// Exit codes: 0 success, 1 usage/config error, 2 runtime/training error,
// 3 invariant violation.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "dlgnn/dlgnn.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitInvariant = 3;

void emit(const nlohmann::json& j, const std::string& out) {
  const std::string text = j.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    dlgnn::experiment::write_file_atomic(out, text);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"D-L hierarchy graph learning laboratory"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::string out;
  app.add_option("--seed", seed, "random seed")->capture_default_str();
  app.add_option("--out", out, "output file or directory");

  auto* gen = app.add_subcommand("gen", "generate an Erdos-Renyi counting dataset (JSONL)");
  std::size_t graphs = 200, nodes = 50;
  double prob = 0.1;
  std::string target = "triangles";
  gen->add_option("--graphs", graphs, "number of graphs")->capture_default_str();
  gen->add_option("--nodes", nodes, "nodes per graph")->capture_default_str();
  gen->add_option("--prob", prob, "edge probability")->capture_default_str();
  gen->add_option("--target", target, "triangles | four-cycles")->capture_default_str();

  auto* count = app.add_subcommand("count", "count triangles and 4-cycles of an edge-list graph");
  std::string graph_file;
  count->add_option("graph", graph_file, "edge-list file")->required();

  auto* wl = app.add_subcommand("wl", "compare two graphs with 1-WL and triangle-seeded 1-WL");
  std::string first_file, second_file;
  wl->add_option("first", first_file, "edge-list file")->required();
  wl->add_option("second", second_file, "edge-list file")->required();

  auto* regions = app.add_subcommand("regions", "sizes of D_k / L_k regions around a node");
  std::uint32_t node = 0;
  std::size_t kmax = 3;
  regions->add_option("graph", graph_file, "edge-list file")->required();
  regions->add_option("--node", node, "root node")->capture_default_str();
  regions->add_option("--kmax", kmax, "largest radius")->capture_default_str();

  auto* train = app.add_subcommand("train", "cross-validated training from a config file");
  std::string config_file;
  train->add_option("--config", config_file, "key = value experiment config")->required();

  auto* demo = app.add_subcommand("demo-wl-gap", "C6 vs two triangles: 1-WL vs triangle-seeded");

  for (auto* sub : {gen, count, wl, regions, train, demo}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  using namespace dlgnn;
  try {
    if (*gen) {
      const auto kind = experiment::parse_target_kind(target);
      const auto ds = experiment::gen_dataset(graphs, nodes, prob, kind, seed);
      const std::string path = out.empty() ? "dataset.jsonl" : out;
      experiment::write_dataset(ds, path);
      const auto ys = ds.targets();
      double mean = 0.0;
      for (double y : ys) mean += y;
      mean /= static_cast<double>(ys.size());
      std::cout << "wrote " << ys.size() << " graphs to " << path << " (mean " << to_string(kind)
                << " " << mean << ")\n";
    } else if (*count) {
      const Graph g = read_edge_list_file(graph_file);
      nlohmann::json j = {{"n", g.node_count()},
                          {"edges", g.edge_count()},
                          {"triangles", triangle_total(g)},
                          {"four_cycles", four_cycle_count(g)},
                          {"triangles_per_node", triangle_counts_per_node(g)}};
      emit(j, out);
    } else if (*wl) {
      const Graph a = read_edge_list_file(first_file);
      const Graph b = read_edge_list_file(second_file);
      nlohmann::json j = {{"wl", to_string(wl_distinguish(a, b))},
                          {"augmented", to_string(augmented_distinguish(a, b))}};
      if (a.node_count() <= kCanonicalMaxNodes && b.node_count() <= kCanonicalMaxNodes) {
        j["isomorphic"] = is_isomorphic_small(a, b);
      } else {
        j["isomorphic"] = nullptr;
      }
      emit(j, out);
    } else if (*regions) {
      const Graph g = read_edge_list_file(graph_file);
      emit(experiment::region_report(g, node, kmax).to_json(), out);
    } else if (*train) {
      auto cfg = experiment::read_config(config_file);
      if (app.get_option("--seed")->count() > 0) cfg.seed = seed;
      if (!out.empty()) cfg.out = out;
      const auto report = experiment::run_experiment(cfg);
      experiment::write_report(report, cfg.out);
      for (const auto& m : report.models) {
        std::cout << m.name << ": test MSE " << m.mean_test_mse << " +- " << m.std_test_mse
                  << "\n";
      }
    } else if (*demo) {
      emit(experiment::demo_wl_gap().to_json(), out);
    }
  } catch (const InvariantError& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
