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
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <limits>
#include <memory>
#include <mutex>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "dlgnn/error.hpp"
#include "dlgnn/experiment/config.hpp"
#include "dlgnn/experiment/dataset.hpp"
#include "dlgnn/experiment/folds.hpp"
#include "dlgnn/experiment/io.hpp"
#include "dlgnn/nn/model.hpp"
#include "dlgnn/nn/train.hpp"
#include "dlgnn/rng.hpp"

namespace dlgnn::experiment {

inline constexpr const char* kBaselineName = "baseline";

// MSE of the constant train-mean predictor on `test`.
inline double baseline_mean(std::span<const double> train, std::span<const double> test) {
  if (train.empty()) throw InputError("baseline_mean needs a nonempty training set");
  if (test.empty()) throw InputError("baseline_mean needs a nonempty test set");
  const double mean = std::accumulate(train.begin(), train.end(), 0.0) /
                      static_cast<double>(train.size());
  double acc = 0.0;
  for (double y : test) acc += (y - mean) * (y - mean);
  return acc / static_cast<double>(test.size());
}

struct FoldResult {
  std::size_t fold = 0;
  double train_mse = std::numeric_limits<double>::quiet_NaN();
  double val_mse = std::numeric_limits<double>::quiet_NaN();
  double test_mse = std::numeric_limits<double>::quiet_NaN();
  bool failed = false;
  std::string error;
  std::size_t epochs = 0;
  std::size_t best_epoch = 0;
};

struct ModelReport {
  std::string name;
  std::vector<FoldResult> folds;
  double mean_test_mse = 0.0;
  double std_test_mse = 0.0;
};

struct ExperimentReport {
  std::vector<ModelReport> models;  // configured models, then the baseline
  double baseline_mean_mse = 0.0;
  ExperimentConfig config;
  double wall_clock_seconds = 0.0;

  const ModelReport& model(const std::string& name) const {
    for (const auto& m : models) {
      if (m.name == name) return m;
    }
    throw InputError("report has no model '" + name + "'");
  }
};

// Mean and population standard deviation over the folds that did not fail.
inline void summarize(ModelReport& r) {
  std::vector<double> ok;
  for (const auto& f : r.folds) {
    if (!f.failed) ok.push_back(f.test_mse);
  }
  if (ok.empty()) {
    r.mean_test_mse = r.std_test_mse = std::numeric_limits<double>::quiet_NaN();
    return;
  }
  const double mean = std::accumulate(ok.begin(), ok.end(), 0.0) / static_cast<double>(ok.size());
  double var = 0.0;
  for (double x : ok) var += (x - mean) * (x - mean);
  r.mean_test_mse = mean;
  r.std_test_mse = std::sqrt(var / static_cast<double>(ok.size()));
}

namespace detail {

inline std::vector<nn::Sample> gather(const std::vector<nn::Sample>& all,
                                      const std::vector<std::size_t>& idx) {
  std::vector<nn::Sample> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(all[i]);
  return out;
}

inline std::vector<double> gather_targets(const std::vector<nn::Sample>& all,
                                          const std::vector<std::size_t>& idx) {
  std::vector<double> out;
  for (std::size_t i : idx) out.push_back(all[i].target);
  return out;
}

inline nn::ModelSpec configured_spec(const ExperimentConfig& cfg, const std::string& name) {
  nn::ModelSpec spec = nn::model_spec_by_name(name);
  for (auto& l : spec.layers) {
    l.combine = cfg.combine;
    l.degree_normalize = cfg.degree_normalize;
  }
  return spec;
}

}  // namespace detail

// Trains every configured model on every cross-validation round. Each
// (model, fold) job owns its model, optimizer and seeds, so jobs may run on
// any number of threads without changing the results.
inline ExperimentReport run_experiment(const ExperimentConfig& cfg, const Dataset& ds) {
  const auto started = std::chrono::steady_clock::now();
  if (ds.items.size() < cfg.folds) {
    throw ConfigError("dataset has fewer graphs than folds");
  }
  std::set<std::size_t> diag_lengths;
  for (const auto& name : cfg.models) {
    const auto lengths = nn::required_diag_lengths(detail::configured_spec(cfg, name));
    diag_lengths.insert(lengths.begin(), lengths.end());
  }
  std::vector<nn::Sample> samples;
  samples.reserve(ds.items.size());
  for (const auto& item : ds.items) {
    auto ctx = std::make_shared<const nn::GraphContext>(item.graph, diag_lengths);
    samples.push_back({ctx, nn::constant_features(item.graph.node_count()), item.target});
  }

  const FoldPlan plan = kfold_split(ds.items.size(), cfg.folds, derive_seed(cfg.seed, {0}));
  ExperimentReport report;
  report.config = cfg;
  report.models.resize(cfg.models.size() + 1);

  struct Job {
    std::size_t model;
    std::size_t fold;
  };
  std::vector<Job> jobs;
  for (std::size_t m = 0; m < cfg.models.size(); ++m) {
    report.models[m].name = cfg.models[m];
    report.models[m].folds.resize(cfg.folds);
    for (std::size_t f = 0; f < cfg.folds; ++f) jobs.push_back({m, f});
  }

  auto run_job = [&](const Job& job) {
    const auto round = plan.round(job.fold);
    FoldResult& out = report.models[job.model].folds[job.fold];
    out.fold = job.fold;
    const auto train = detail::gather(samples, round.train);
    const auto val = detail::gather(samples, round.val);
    const auto test = detail::gather(samples, round.test);
    try {
      nn::Model model = nn::build_model(detail::configured_spec(cfg, cfg.models[job.model]), 1,
                                        cfg.hidden, derive_seed(cfg.seed, {1, job.model, job.fold}));
      nn::TrainConfig tc = cfg.train;
      tc.seed = derive_seed(cfg.seed, {2, job.model, job.fold});
      const auto fit = nn::fit(model, train, val, tc);
      out.epochs = fit.epochs_run;
      out.best_epoch = fit.best_epoch;
      out.train_mse = nn::evaluate_mse(model, train);
      out.val_mse = nn::evaluate_mse(model, val);
      out.test_mse = nn::evaluate_mse(model, test);
    } catch (const TrainingError& e) {
      out.failed = true;
      out.error = e.what();
    } catch (const NumericError& e) {
      out.failed = true;
      out.error = e.what();
    }
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) run_job(jobs[i]);
  };
  const std::size_t workers = std::min(cfg.threads, jobs.size());
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  ModelReport& base = report.models.back();
  base.name = kBaselineName;
  for (std::size_t f = 0; f < cfg.folds; ++f) {
    const auto round = plan.round(f);
    const auto train = detail::gather_targets(samples, round.train);
    FoldResult r;
    r.fold = f;
    r.train_mse = baseline_mean(train, train);
    r.val_mse = baseline_mean(train, detail::gather_targets(samples, round.val));
    r.test_mse = baseline_mean(train, detail::gather_targets(samples, round.test));
    base.folds.push_back(r);
  }
  for (auto& m : report.models) summarize(m);
  report.baseline_mean_mse = base.mean_test_mse;
  report.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

inline std::string results_csv(const ExperimentReport& report) {
  std::string out = "model,fold,train_mse,val_mse,test_mse\n";
  for (const auto& m : report.models) {
    for (const auto& f : m.folds) {
      out += m.name + ',' + std::to_string(f.fold) + ',' + format_double(f.train_mse) + ',' +
             format_double(f.val_mse) + ',' + format_double(f.test_mse) + '\n';
    }
  }
  return out;
}

inline nlohmann::json summary_json(const ExperimentReport& report) {
  auto number = [](double x) -> nlohmann::json {
    return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
  };
  nlohmann::json models = nlohmann::json::object();
  for (const auto& m : report.models) {
    nlohmann::json failed = nlohmann::json::array();
    nlohmann::json per_fold = nlohmann::json::array();
    for (const auto& f : m.folds) {
      if (f.failed) failed.push_back({{"fold", f.fold}, {"error", f.error}});
      per_fold.push_back(number(f.test_mse));
    }
    models[m.name] = {{"mean_test_mse", number(m.mean_test_mse)},
                      {"std_test_mse", number(m.std_test_mse)},
                      {"ratio_to_baseline", number(m.mean_test_mse / report.baseline_mean_mse)},
                      {"test_mse_per_fold", per_fold},
                      {"failed_folds", failed}};
  }
  return {{"models", models},
          {"baseline_mean_mse", number(report.baseline_mean_mse)},
          {"split", "per round: 1 test fold, next fold validation, rest train"},
          {"std", "population standard deviation over non-failed folds"},
          {"config", report.config.to_json()},
          {"wall_clock_seconds", report.wall_clock_seconds}};
}

inline void write_report(const ExperimentReport& report, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw FileError("cannot create output directory '" + dir + "': " + ec.message());
  const std::filesystem::path base(dir);
  write_file_atomic((base / "results.csv").string(), results_csv(report));
  write_file_atomic((base / "summary.json").string(), summary_json(report).dump(2) + "\n");
}

inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  return run_experiment(cfg, read_dataset(cfg.dataset));
}

}  // namespace dlgnn::experiment
