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
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "dlgnn/error.hpp"
#include "dlgnn/nn/model.hpp"
#include "dlgnn/nn/train.hpp"

namespace dlgnn::experiment {

// Flat "key = value" file; '#' starts a comment. Unknown keys are errors.
//
//   dataset          path to a JSONL dataset (required)
//   out              output directory for results.csv / summary.json
//   models           comma-separated: GCN-2L, GCN-3L, GCN-L1-1L, GCN-D2-1L, ...
//   folds            cross-validation folds (>= 3)
//   hidden           hidden feature width
//   combine          mlp2 | linear
//   degree_normalize true | false
//   lr l2 dropout patience lr_factor max_epochs batch_size seed threads
struct ExperimentConfig {
  std::string dataset;
  std::string out = ".";
  std::vector<std::string> models = {"GCN-2L", "GCN-3L", "GCN-L1-1L", "GCN-D2-1L"};
  std::size_t folds = 10;
  std::size_t hidden = 16;
  nn::Combine combine = nn::Combine::Mlp2;
  bool degree_normalize = false;
  nn::TrainConfig train;
  std::uint64_t seed = 0;
  std::size_t threads = 1;

  nlohmann::json to_json() const {
    return {{"dataset", dataset},
            {"models", models},
            {"folds", folds},
            {"hidden", hidden},
            {"combine", combine == nn::Combine::Linear ? "linear" : "mlp2"},
            {"degree_normalize", degree_normalize},
            {"lr", train.lr},
            {"l2", train.l2},
            {"dropout", train.dropout},
            {"patience", train.patience},
            {"lr_factor", train.lr_factor},
            {"max_epochs", train.max_epochs},
            {"batch_size", train.batch_size},
            {"seed", seed}};
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  T out{};
  if (!(in >> out) || !(in >> std::ws).eof()) {
    throw ConfigError("config key '" + key + "': cannot parse '" + value + "'");
  }
  return out;
}

inline bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("config key '" + key + "': expected true or false, got '" + value + "'");
}

}  // namespace detail

inline ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::size_t line_no = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    const std::string line = detail::trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    using detail::parse_number;
    if (key == "dataset") cfg.dataset = value;
    else if (key == "out") cfg.out = value;
    else if (key == "models") {
      cfg.models.clear();
      std::istringstream list(value);
      for (std::string name; std::getline(list, name, ',');) {
        name = detail::trim(name);
        if (name.empty()) continue;
        nn::model_spec_by_name(name);  // validates
        cfg.models.push_back(name);
      }
      if (cfg.models.empty()) throw ConfigError("config key 'models': empty list");
    }
    else if (key == "folds") cfg.folds = parse_number<std::size_t>(key, value);
    else if (key == "hidden") cfg.hidden = parse_number<std::size_t>(key, value);
    else if (key == "combine") {
      if (value == "mlp2") cfg.combine = nn::Combine::Mlp2;
      else if (value == "linear") cfg.combine = nn::Combine::Linear;
      else throw ConfigError("config key 'combine': expected mlp2 or linear");
    }
    else if (key == "degree_normalize") cfg.degree_normalize = detail::parse_bool(key, value);
    else if (key == "lr") cfg.train.lr = parse_number<double>(key, value);
    else if (key == "l2") cfg.train.l2 = parse_number<double>(key, value);
    else if (key == "dropout") cfg.train.dropout = parse_number<double>(key, value);
    else if (key == "patience") cfg.train.patience = parse_number<std::size_t>(key, value);
    else if (key == "lr_factor") cfg.train.lr_factor = parse_number<double>(key, value);
    else if (key == "max_epochs") cfg.train.max_epochs = parse_number<std::size_t>(key, value);
    else if (key == "batch_size") cfg.train.batch_size = parse_number<std::size_t>(key, value);
    else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "threads") cfg.threads = parse_number<std::size_t>(key, value);
    else throw ConfigError("unknown config key '" + key + "'");
  }
  if (cfg.dataset.empty()) throw ConfigError("config key 'dataset' is required");
  if (cfg.folds < 3) throw ConfigError("config key 'folds' must be >= 3");
  if (cfg.hidden < 1) throw ConfigError("config key 'hidden' must be >= 1");
  if (cfg.threads < 1) throw ConfigError("config key 'threads' must be >= 1");
  cfg.train.validate();
  return cfg;
}

inline ExperimentConfig read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  return parse_config(in);
}

}  // namespace dlgnn::experiment
