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
#include <vector>

#include "dlgnn/error.hpp"
#include "dlgnn/rng.hpp"

namespace dlgnn::experiment {

// k-fold cross-validation rounds. In round i, fold i is the test set, fold
// (i + 1) mod k is the validation set and the remaining folds train.
struct FoldPlan {
  std::size_t k = 0;
  std::vector<std::vector<std::size_t>> folds;

  struct Round {
    std::vector<std::size_t> train, val, test;
  };

  Round round(std::size_t i) const {
    Round r;
    r.test = folds.at(i);
    r.val = folds.at((i + 1) % k);
    for (std::size_t f = 0; f < k; ++f) {
      if (f == i || f == (i + 1) % k) continue;
      r.train.insert(r.train.end(), folds[f].begin(), folds[f].end());
    }
    return r;
  }
};

// Shuffles 0..size-1 and deals it into k contiguous folds whose sizes differ
// by at most one (the first size % k folds get the extra element).
inline FoldPlan kfold_split(std::size_t dataset_size, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw InputError("fold count must be >= 2");
  if (k > dataset_size) {
    throw InputError("fold count " + std::to_string(k) + " exceeds dataset size " +
                     std::to_string(dataset_size));
  }
  std::vector<std::size_t> idx(dataset_size);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  rng.shuffle(idx);

  FoldPlan plan;
  plan.k = k;
  const std::size_t base = dataset_size / k;
  const std::size_t extra = dataset_size % k;
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t len = base + (f < extra ? 1 : 0);
    plan.folds.emplace_back(idx.begin() + pos, idx.begin() + pos + len);
    pos += len;
  }
  return plan;
}

}  // namespace dlgnn::experiment
