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
#include <vector>

#include "dlgnn/error.hpp"
#include "dlgnn/matrix.hpp"
#include "dlgnn/nn/tape.hpp"

namespace dlgnn::nn {

struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t step = 0;
  std::vector<FeatureMatrix> first_moment;
  std::vector<FeatureMatrix> second_moment;
};

// Bias-corrected Adam on every trainable parameter, using Parameter::grad.
inline void adam_step(AdamState& state, std::vector<Parameter>& params, double lr) {
  if (state.first_moment.empty()) {
    for (const auto& p : params) {
      state.first_moment.emplace_back(p.value.rows(), p.value.cols(), 0.0);
      state.second_moment.emplace_back(p.value.rows(), p.value.cols(), 0.0);
    }
  }
  if (state.first_moment.size() != params.size()) {
    throw InputError("adam state does not match parameter list");
  }
  ++state.step;
  const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    Parameter& p = params[i];
    if (!p.trainable) continue;
    if (!p.grad.same_shape(p.value) || !state.first_moment[i].same_shape(p.value)) {
      throw InputError("adam: shape mismatch for parameter '" + p.name + "'");
    }
    auto value = p.value.values();
    auto grad = p.grad.values();
    auto m = state.first_moment[i].values();
    auto v = state.second_moment[i].values();
    for (std::size_t j = 0; j < value.size(); ++j) {
      m[j] = state.beta1 * m[j] + (1.0 - state.beta1) * grad[j];
      v[j] = state.beta2 * v[j] + (1.0 - state.beta2) * grad[j] * grad[j];
      value[j] -= lr * (m[j] / c1) / (std::sqrt(v[j] / c2) + state.epsilon);
    }
  }
}

}  // namespace dlgnn::nn
