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
#include <string>

#include "json.hpp"

#include "dlgnn/error.hpp"
#include "dlgnn/nn/model.hpp"

namespace dlgnn::nn {

inline constexpr int kCheckpointVersion = 1;

// {"format": "dlgnn-checkpoint", "version": 1,
//  "params": {name: {"shape": [rows, cols], "values": [row-major...]}}}
// Doubles are written in shortest round-trip form, so save/load is exact.
inline nlohmann::json checkpoint_json(const Model& model) {
  nlohmann::json params = nlohmann::json::object();
  for (const auto& p : model.params()) {
    params[p.name] = {{"shape", {p.value.rows(), p.value.cols()}},
                      {"values", std::vector<double>(p.value.values().begin(),
                                                     p.value.values().end())}};
  }
  return {{"format", "dlgnn-checkpoint"},
          {"version", kCheckpointVersion},
          {"model", model.spec().name},
          {"params", params}};
}

// Overwrites every parameter of `model` from the checkpoint; names and shapes
// must match exactly.
inline void load_checkpoint_json(Model& model, const nlohmann::json& j) {
  if (j.value("format", "") != "dlgnn-checkpoint") {
    throw InputError("not a dlgnn checkpoint");
  }
  if (j.value("version", 0) != kCheckpointVersion) {
    throw InputError("unsupported checkpoint version");
  }
  const auto& params = j.at("params");
  if (params.size() != model.params().size()) {
    throw InputError("checkpoint has " + std::to_string(params.size()) +
                     " parameters, model has " + std::to_string(model.params().size()));
  }
  for (auto& p : model.params()) {
    if (!params.contains(p.name)) throw InputError("checkpoint lacks parameter '" + p.name + "'");
    const auto& entry = params.at(p.name);
    const auto rows = entry.at("shape").at(0).get<std::size_t>();
    const auto cols = entry.at("shape").at(1).get<std::size_t>();
    const auto values = entry.at("values").get<std::vector<double>>();
    if (rows != p.value.rows() || cols != p.value.cols() || values.size() != rows * cols) {
      throw InputError("checkpoint shape mismatch for '" + p.name + "'");
    }
    std::copy(values.begin(), values.end(), p.value.values().begin());
  }
}

inline void save_checkpoint(const Model& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FileError("cannot write checkpoint '" + path + "'");
  out << checkpoint_json(model).dump() << '\n';
  if (!out) throw FileError("failed writing checkpoint '" + path + "'");
}

inline void load_checkpoint(Model& model, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open checkpoint '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("malformed checkpoint '" + path + "': " + e.what());
  }
  load_checkpoint_json(model, j);
}

}  // namespace dlgnn::nn
