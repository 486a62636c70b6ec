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
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "dlgnn/error.hpp"
#include "dlgnn/nn/adam.hpp"
#include "dlgnn/nn/model.hpp"
#include "dlgnn/rng.hpp"

namespace dlgnn::nn {

// One graph with its input features and graph-level target.
struct Sample {
  std::shared_ptr<const GraphContext> context;
  FeatureMatrix features;
  double target = 0.0;
};

struct TrainConfig {
  double lr = 1e-3;
  double l2 = 5e-4;
  double dropout = 0.1;
  std::size_t patience = 10;
  double lr_factor = 0.5;
  std::size_t max_epochs = 500;
  std::size_t batch_size = 1;  // graphs per optimizer step
  std::uint64_t seed = 0;

  void validate() const {
    if (!(lr > 0.0)) throw ConfigError("lr must be > 0");
    if (!(l2 >= 0.0)) throw ConfigError("l2 must be >= 0");
    if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("dropout must lie in [0,1)");
    if (patience < 1) throw ConfigError("patience must be >= 1");
    if (!(lr_factor > 0.0 && lr_factor < 1.0)) throw ConfigError("lr_factor must lie in (0,1)");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  }
};

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;  // mean per-graph MSE seen during the epoch
  double val_loss = 0.0;
  double lr = 0.0;
};

struct FitResult {
  double initial_val_loss = 0.0;
  double best_val_loss = 0.0;
  std::size_t best_epoch = 0;  // 0: the initial parameters were never beaten
  std::size_t epochs_run = 0;
  std::vector<EpochRecord> history;
};

inline double predict(Model& model, const Sample& s) {
  auto pass = forward(model, *s.context, s.features, false);
  return pass.prediction()(0, 0);
}

inline double evaluate_mse(Model& model, const std::vector<Sample>& samples) {
  if (samples.empty()) throw InputError("evaluate_mse on an empty set");
  double acc = 0.0;
  for (const auto& s : samples) {
    const double d = predict(model, s) - s.target;
    acc += d * d;
  }
  return acc / static_cast<double>(samples.size());
}

// Runs the reverse sweep of a recorded pass from a scalar node, accumulating
// into the model's parameter gradients.
inline void backward(ForwardPass& pass, Tape::Var loss, double seed = 1.0) {
  pass.tape().backward(loss, seed);
}

// Zeroes gradients, then fills them with d(MSE + lambda * sum ||W||^2).
// Returns the loss value.
inline double loss_and_gradients(Model& model, const GraphContext& ctx,
                                 const FeatureMatrix& x, const FeatureMatrix& y,
                                 double lambda, bool training = false,
                                 Rng* dropout_rng = nullptr) {
  model.zero_grad();
  auto pass = forward(model, ctx, x, training, dropout_rng);
  Tape& t = pass.tape();
  const Tape::Var loss = t.add(t.mse(pass.output, y), add_l2_penalty(t, model, lambda));
  backward(pass, loss);
  return t.value(loss)(0, 0);
}

// Central differences on every trainable coordinate, dropout off. The
// relative error of one coordinate is |g - g_fd| / max(|g|, |g_fd|, 1e-3);
// the floor keeps vanishing gradients from dividing by zero. A model with no
// trainable coordinates returns 0.
inline double gradient_check(Model& model, const GraphContext& ctx, const FeatureMatrix& x,
                             const FeatureMatrix& y, double h = 1e-5, double lambda = 0.0) {
  loss_and_gradients(model, ctx, x, y, lambda);
  std::vector<FeatureMatrix> analytic;
  for (const auto& p : model.params()) analytic.push_back(p.grad);

  auto loss_at = [&]() {
    auto pass = forward(model, ctx, x, false);
    Tape& t = pass.tape();
    return t.value(t.add(t.mse(pass.output, y), add_l2_penalty(t, model, lambda)))(0, 0);
  };

  double worst = 0.0;
  for (std::size_t i = 0; i < model.params().size(); ++i) {
    if (!model.params()[i].trainable) continue;
    for (std::size_t j = 0; j < model.params()[i].value.size(); ++j) {
      double& w = model.params()[i].value.values()[j];
      const double saved = w;
      w = saved + h;
      const double up = loss_at();
      w = saved - h;
      const double down = loss_at();
      w = saved;
      const double numeric = (up - down) / (2.0 * h);
      const double exact = analytic[i].values()[j];
      const double denom = std::max({std::abs(exact), std::abs(numeric), 1e-3});
      worst = std::max(worst, std::abs(exact - numeric) / denom);
    }
  }
  return worst;
}

// Per-graph mini-batches with Adam. After each epoch the validation MSE is
// compared with the best so far (the untrained model counts as epoch 0).
// After `patience` epochs without improvement the learning rate is multiplied
// by lr_factor; if another `patience` epochs pass with no improvement since
// that cut, training stops. The best-validation parameters are restored.
inline FitResult fit(Model& model, const std::vector<Sample>& train,
                     const std::vector<Sample>& val, const TrainConfig& cfg) {
  cfg.validate();
  if (train.empty() || val.empty()) throw InputError("fit needs nonempty train and validation sets");
  model.set_dropout(cfg.dropout);

  Rng rng(cfg.seed);
  AdamState adam;
  double lr = cfg.lr;
  FitResult result;
  result.initial_val_loss = evaluate_mse(model, val);
  if (!std::isfinite(result.initial_val_loss)) {
    throw TrainingError("non-finite validation loss before training", 0);
  }
  result.best_val_loss = result.initial_val_loss;
  auto best = model.snapshot();
  std::size_t stale = 0;
  bool cut_since_improvement = false;

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);

  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
      const double inv = 1.0 / static_cast<double>(stop - start);
      model.zero_grad();
      for (std::size_t b = start; b < stop; ++b) {
        const Sample& s = train[order[b]];
        ForwardPass pass;
        try {
          pass = forward(model, *s.context, s.features, true, &rng);
        } catch (const NumericError& e) {
          throw TrainingError(std::string(e.what()) + " at epoch " + std::to_string(epoch),
                              static_cast<int>(epoch));
        }
        Tape& t = pass.tape();
        const Tape::Var loss = t.mse(pass.output, FeatureMatrix(1, 1, s.target));
        const double value = t.value(loss)(0, 0);
        if (!std::isfinite(value)) {
          throw TrainingError("non-finite training loss at epoch " + std::to_string(epoch),
                              static_cast<int>(epoch));
        }
        epoch_loss += value;
        backward(pass, loss, inv);
      }
      if (cfg.l2 > 0.0) {
        Tape t(model.params());
        t.backward(add_l2_penalty(t, model, cfg.l2));
      }
      adam_step(adam, model.params(), lr);
    }
    double val_loss = 0.0;
    try {
      val_loss = evaluate_mse(model, val);
    } catch (const NumericError&) {
      val_loss = std::numeric_limits<double>::infinity();
    }
    if (!std::isfinite(val_loss)) {
      throw TrainingError("non-finite validation loss at epoch " + std::to_string(epoch),
                          static_cast<int>(epoch));
    }
    result.history.push_back(
        {epoch, epoch_loss / static_cast<double>(train.size()), val_loss, lr});
    result.epochs_run = epoch;

    if (val_loss < result.best_val_loss) {
      result.best_val_loss = val_loss;
      result.best_epoch = epoch;
      best = model.snapshot();
      stale = 0;
      cut_since_improvement = false;
    } else if (++stale >= cfg.patience) {
      if (cut_since_improvement) break;
      lr *= cfg.lr_factor;
      cut_since_improvement = true;
      stale = 0;
    }
  }
  model.restore(best);
  return result;
}

}  // namespace dlgnn::nn
