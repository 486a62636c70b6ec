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
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dlgnn/error.hpp"
#include "dlgnn/graph.hpp"
#include "dlgnn/matrix.hpp"
#include "dlgnn/nn/tape.hpp"
#include "dlgnn/rng.hpp"
#include "dlgnn/walks.hpp"

namespace dlgnn::nn {

enum class OperatorKind {
  SelfLoopAdjacency,  // (A + I) H
  Power,              // A^k H, loop-free
  DiagPower,          // diag(A^m) H, loop-free
};

enum class Gate {
  Sigmoid,  // weight sigmoid(theta_i), theta_i learnable
  Fixed,    // constant fixed_weight
};

struct AggregationTerm {
  OperatorKind op = OperatorKind::SelfLoopAdjacency;
  std::size_t exponent = 1;
  Gate gate = Gate::Sigmoid;
  double fixed_weight = 1.0;

  static AggregationTerm self_loop_adjacency(Gate gate = Gate::Sigmoid) {
    return {OperatorKind::SelfLoopAdjacency, 1, gate, 1.0};
  }
  static AggregationTerm power(std::size_t k, Gate gate = Gate::Sigmoid) {
    return {OperatorKind::Power, k, gate, 1.0};
  }
  static AggregationTerm diag_power(std::size_t m, Gate gate = Gate::Sigmoid) {
    return {OperatorKind::DiagPower, m, gate, 1.0};
  }
  AggregationTerm with_fixed_weight(double w) const {
    AggregationTerm t = *this;
    t.gate = Gate::Fixed;
    t.fixed_weight = w;
    return t;
  }
};

enum class Combine {
  Identity,  // a passes through unchanged
  Linear,    // a W + b
  Mlp2,      // LeakyReLU(a W0 + b0) W1 + b1, dropout on the hidden layer
};

struct LayerSpec {
  std::vector<AggregationTerm> terms;
  Combine combine = Combine::Mlp2;
  std::size_t mlp_hidden = 0;  // 0: use the model hidden width
  double leaky_slope = 0.01;
  bool degree_normalize = false;  // divide row v by d_v + 1
  bool train_mixing = true;       // false freezes every theta at its init
};

enum class Readout { Sum, NodeLevel };

struct ModelSpec {
  std::string name;
  std::vector<LayerSpec> layers;
  Readout readout = Readout::Sum;
  std::size_t output_dim = 1;
  double dropout = 0.0;
  double leaky_slope = 0.01;  // between layers
};

// a = (A + I) H, the plain GCN aggregation; mixing ungated.
inline ModelSpec gcn_spec(std::size_t layers) {
  ModelSpec spec;
  spec.name = "GCN-" + std::to_string(layers) + "L";
  for (std::size_t i = 0; i < layers; ++i) {
    LayerSpec l;
    l.terms = {AggregationTerm::self_loop_adjacency().with_fixed_weight(1.0)};
    spec.layers.push_back(l);
  }
  return spec;
}

// w1 (A + I) H + w2 diag(A^3) H
inline ModelSpec gcn_l1_spec(std::size_t layers = 1) {
  ModelSpec spec;
  spec.name = "GCN-L1-" + std::to_string(layers) + "L";
  for (std::size_t i = 0; i < layers; ++i) {
    LayerSpec l;
    l.terms = {AggregationTerm::self_loop_adjacency(), AggregationTerm::diag_power(3)};
    spec.layers.push_back(l);
  }
  return spec;
}

// GCN-L1 plus w3 A^2 H
inline ModelSpec gcn_d2_spec(std::size_t layers = 1) {
  ModelSpec spec = gcn_l1_spec(layers);
  spec.name = "GCN-D2-" + std::to_string(layers) + "L";
  for (auto& l : spec.layers) l.terms.push_back(AggregationTerm::power(2));
  return spec;
}

inline ModelSpec model_spec_by_name(const std::string& name) {
  if (name == "GCN-1L") return gcn_spec(1);
  if (name == "GCN-2L") return gcn_spec(2);
  if (name == "GCN-3L") return gcn_spec(3);
  for (std::size_t k = 1; k <= 3; ++k) {
    if (name == "GCN-L1-" + std::to_string(k) + "L") return gcn_l1_spec(k);
    if (name == "GCN-D2-" + std::to_string(k) + "L") return gcn_d2_spec(k);
  }
  throw ConfigError("unknown model '" + name + "'");
}

// Structure data for one graph, computed once and shared read-only across
// forward passes and threads. Gradients never flow into it.
class GraphContext {
 public:
  explicit GraphContext(Graph g, const std::set<std::size_t>& diag_lengths = {3})
      : graph_(std::move(g)) {
    const std::size_t n = graph_.node_count();
    inv_degree_plus_one_.resize(n);
    for (NodeId v = 0; v < n; ++v) {
      inv_degree_plus_one_[v] = 1.0 / static_cast<double>(graph_.degree(v) + 1);
    }
    for (std::size_t m : diag_lengths) {
      const auto walks = diag_closed_walks(graph_, m);
      closed_walks_[m].assign(walks.begin(), walks.end());
    }
  }

  const Graph& graph() const { return graph_; }
  std::size_t node_count() const { return graph_.node_count(); }
  const std::vector<double>& inv_degree_plus_one() const { return inv_degree_plus_one_; }

  const std::vector<double>& closed_walks(std::size_t m) const {
    auto it = closed_walks_.find(m);
    if (it == closed_walks_.end()) {
      throw InputError("closed walks of length " + std::to_string(m) +
                       " were not precomputed for this graph");
    }
    return it->second;
  }

  FeatureMatrix apply(const AggregationTerm& term, const FeatureMatrix& h) const {
    switch (term.op) {
      case OperatorKind::SelfLoopAdjacency: {
        FeatureMatrix out = power_apply(graph_, 1, h);
        for (std::size_t i = 0; i < out.size(); ++i) out.values()[i] += h.values()[i];
        return out;
      }
      case OperatorKind::Power:
        return power_apply(graph_, term.exponent, h);
      case OperatorKind::DiagPower: {
        const auto& w = closed_walks(term.exponent);
        FeatureMatrix out = h;
        for (std::size_t r = 0; r < out.rows(); ++r) {
          for (double& e : out.row(r)) e *= w[r];
        }
        return out;
      }
    }
    throw InputError("unknown operator");
  }

 private:
  Graph graph_;
  std::vector<double> inv_degree_plus_one_;
  std::map<std::size_t, std::vector<double>> closed_walks_;
};

inline std::set<std::size_t> required_diag_lengths(const ModelSpec& spec) {
  std::set<std::size_t> out;
  for (const auto& l : spec.layers) {
    for (const auto& t : l.terms) {
      if (t.op == OperatorKind::DiagPower) out.insert(t.exponent);
    }
  }
  return out;
}

class Model {
 public:
  struct LayerParams {
    std::size_t in = 0;
    std::size_t out = 0;
    std::optional<std::size_t> theta;  // 1 x #terms
    std::vector<std::size_t> weights;  // parameter indices
    std::vector<std::size_t> biases;
  };

  const ModelSpec& spec() const { return spec_; }
  std::vector<Parameter>& params() { return params_; }
  const std::vector<Parameter>& params() const { return params_; }
  const std::vector<LayerParams>& layers() const { return layers_; }
  std::size_t input_dim() const { return input_dim_; }

  std::size_t trainable_count() const {
    std::size_t total = 0;
    for (const auto& p : params_) {
      if (p.trainable) total += p.value.size();
    }
    return total;
  }

  // Current weights of layer i's terms, fixed or sigmoid(theta).
  std::vector<double> mixing_weights(std::size_t layer) const {
    const auto& lp = layers_.at(layer);
    const auto& terms = spec_.layers.at(layer).terms;
    std::vector<double> out;
    for (std::size_t t = 0; t < terms.size(); ++t) {
      out.push_back(terms[t].gate == Gate::Fixed
                        ? terms[t].fixed_weight
                        : sigmoid(params_[*lp.theta].value(0, t)));
    }
    return out;
  }

  void set_dropout(double p) {
    if (!(p >= 0.0 && p < 1.0)) throw InputError("dropout must lie in [0,1)");
    spec_.dropout = p;
  }

  void zero_grad() {
    for (auto& p : params_) p.grad = FeatureMatrix(p.value.rows(), p.value.cols(), 0.0);
  }

  std::vector<FeatureMatrix> snapshot() const {
    std::vector<FeatureMatrix> out;
    for (const auto& p : params_) out.push_back(p.value);
    return out;
  }

  void restore(const std::vector<FeatureMatrix>& values) {
    for (std::size_t i = 0; i < params_.size(); ++i) params_[i].value = values.at(i);
  }

  Parameter* find(const std::string& name) {
    for (auto& p : params_) {
      if (p.name == name) return &p;
    }
    return nullptr;
  }
  const Parameter* find(const std::string& name) const {
    return const_cast<Model*>(this)->find(name);
  }

 private:
  friend Model build_model(const ModelSpec&, std::size_t, std::size_t, std::uint64_t);

  ModelSpec spec_;
  std::size_t input_dim_ = 0;
  std::vector<Parameter> params_;
  std::vector<LayerParams> layers_;
};

// Weights and biases uniform in ±1/sqrt(fan_in); every theta starts at 0,
// i.e. mixing weight 1/2. Non-final layers emit hidden_dim features, the last
// one output_dim.
inline Model build_model(const ModelSpec& spec, std::size_t input_dim,
                         std::size_t hidden_dim, std::uint64_t seed) {
  if (input_dim < 1 || hidden_dim < 1 || spec.output_dim < 1) {
    throw InputError("model dimensions must be >= 1");
  }
  if (spec.layers.empty()) throw InputError("model needs at least one layer");
  if (!(spec.dropout >= 0.0 && spec.dropout < 1.0)) {
    throw InputError("dropout must lie in [0,1)");
  }
  Model m;
  m.spec_ = spec;
  m.input_dim_ = input_dim;
  Rng rng(seed);

  auto add_param = [&](std::string name, std::size_t rows, std::size_t cols,
                       double bound, bool decay) {
    Parameter p;
    p.name = std::move(name);
    p.value = FeatureMatrix(rows, cols, 0.0);
    for (double& e : p.value.values()) e = rng.uniform(-bound, bound);
    p.grad = FeatureMatrix(rows, cols, 0.0);
    p.weight_decay = decay;
    m.params_.push_back(std::move(p));
    return m.params_.size() - 1;
  };

  std::size_t in = input_dim;
  for (std::size_t li = 0; li < spec.layers.size(); ++li) {
    const LayerSpec& ls = spec.layers[li];
    if (ls.terms.empty()) {
      throw InputError("layer " + std::to_string(li) + " has no aggregation terms");
    }
    for (const auto& t : ls.terms) {
      if (t.op != OperatorKind::SelfLoopAdjacency && t.exponent < 1) {
        throw InputError("aggregation exponent must be >= 1");
      }
    }
    const bool last = li + 1 == spec.layers.size();
    const std::size_t out = last ? spec.output_dim : hidden_dim;
    const std::string prefix = "layer" + std::to_string(li) + ".";
    Model::LayerParams lp;
    lp.in = in;
    lp.out = out;

    const bool any_gated = std::any_of(ls.terms.begin(), ls.terms.end(), [](const auto& t) {
      return t.gate == Gate::Sigmoid;
    });
    if (any_gated) {
      lp.theta = add_param(prefix + "theta", 1, ls.terms.size(), 0.0, false);
      m.params_[*lp.theta].trainable = ls.train_mixing;
    }

    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    switch (ls.combine) {
      case Combine::Identity:
        if (out != in) {
          throw InputError("identity combine in layer " + std::to_string(li) + " maps " +
                           std::to_string(in) + " features to " + std::to_string(out));
        }
        break;
      case Combine::Linear:
        lp.weights.push_back(add_param(prefix + "w0", in, out, bound, true));
        lp.biases.push_back(add_param(prefix + "b0", 1, out, bound, false));
        break;
      case Combine::Mlp2: {
        const std::size_t width = ls.mlp_hidden ? ls.mlp_hidden : hidden_dim;
        lp.weights.push_back(add_param(prefix + "w0", in, width, bound, true));
        lp.biases.push_back(add_param(prefix + "b0", 1, width, bound, false));
        const double bound1 = 1.0 / std::sqrt(static_cast<double>(width));
        lp.weights.push_back(add_param(prefix + "w1", width, out, bound1, true));
        lp.biases.push_back(add_param(prefix + "b1", 1, out, bound1, false));
        break;
      }
    }
    m.layers_.push_back(lp);
    in = out;
  }
  return m;
}

struct ForwardPass {
  std::unique_ptr<Tape> recording;
  Tape::Var output = 0;

  Tape& tape() { return *recording; }
  const FeatureMatrix& prediction() const { return recording->value(output); }
};

// Records one forward pass. With training set, dropout masks are drawn from
// dropout_rng; otherwise the pass is deterministic and dropout-free.
inline ForwardPass forward(Model& model, const GraphContext& ctx, const FeatureMatrix& x,
                           bool training, Rng* dropout_rng = nullptr) {
  const ModelSpec& spec = model.spec();
  if (x.rows() != ctx.node_count()) {
    throw InputError("features have " + std::to_string(x.rows()) + " rows for " +
                     std::to_string(ctx.node_count()) + " nodes");
  }
  if (x.cols() != model.input_dim()) {
    throw InputError("features have " + std::to_string(x.cols()) + " columns, model expects " +
                     std::to_string(model.input_dim()));
  }
  if (training && spec.dropout > 0.0 && dropout_rng == nullptr) {
    throw InputError("training forward with dropout needs an rng");
  }
  ForwardPass pass{std::make_unique<Tape>(model.params()), 0};
  Tape& t = pass.tape();
  Tape::Var h = t.constant(x);

  for (std::size_t li = 0; li < spec.layers.size(); ++li) {
    const LayerSpec& ls = spec.layers[li];
    const auto& lp = model.layers()[li];
    std::optional<Tape::Var> theta;
    if (lp.theta) theta = t.parameter(*lp.theta);

    std::optional<Tape::Var> a;
    for (std::size_t ti = 0; ti < ls.terms.size(); ++ti) {
      const AggregationTerm term = ls.terms[ti];
      Tape::Var op_out =
          t.apply_symmetric(h, [&ctx, term](const FeatureMatrix& in) { return ctx.apply(term, in); });
      Tape::Var weighted = term.gate == Gate::Sigmoid ? t.sigmoid_gate(op_out, *theta, ti)
                                                      : t.scale(op_out, term.fixed_weight);
      a = a ? t.add(*a, weighted) : weighted;
    }
    if (ls.degree_normalize) a = t.scale_rows(*a, ctx.inv_degree_plus_one());
    if (!all_finite(t.value(*a))) {
      throw NumericError("non-finite aggregation in layer " + std::to_string(li));
    }

    Tape::Var out = *a;
    switch (ls.combine) {
      case Combine::Identity:
        break;
      case Combine::Linear:
        out = t.add_row(t.matmul(out, t.parameter(lp.weights[0])), t.parameter(lp.biases[0]));
        break;
      case Combine::Mlp2: {
        Tape::Var z = t.add_row(t.matmul(out, t.parameter(lp.weights[0])),
                                t.parameter(lp.biases[0]));
        z = t.leaky_relu(z, ls.leaky_slope);
        if (training && spec.dropout > 0.0) {
          const double keep = 1.0 - spec.dropout;
          FeatureMatrix m(t.value(z).rows(), t.value(z).cols(), 0.0);
          for (double& e : m.values()) e = dropout_rng->uniform() < keep ? 1.0 / keep : 0.0;
          z = t.mask(z, std::move(m));
        }
        out = t.add_row(t.matmul(z, t.parameter(lp.weights[1])), t.parameter(lp.biases[1]));
        break;
      }
    }
    if (li + 1 < spec.layers.size() && ls.combine != Combine::Identity) {
      out = t.leaky_relu(out, spec.leaky_slope);
    }
    if (!all_finite(t.value(out))) {
      throw NumericError("non-finite activation in layer " + std::to_string(li));
    }
    h = out;
  }
  pass.output = spec.readout == Readout::Sum ? t.sum_rows(h) : h;
  return pass;
}

// lambda * sum of squared entries over every decayed, trainable matrix.
inline Tape::Var add_l2_penalty(Tape& t, const Model& model, double lambda) {
  std::optional<Tape::Var> total;
  for (std::size_t i = 0; i < model.params().size(); ++i) {
    const auto& p = model.params()[i];
    if (!p.weight_decay || !p.trainable) continue;
    Tape::Var sq = t.sum_squares(t.parameter(i));
    total = total ? t.add(*total, sq) : sq;
  }
  if (!total) return t.constant(FeatureMatrix(1, 1, 0.0));
  return t.scale(*total, lambda);
}

inline double mse_loss(std::span<const double> pred, std::span<const double> target) {
  if (pred.size() != target.size()) {
    throw InputError("mse: " + std::to_string(pred.size()) + " predictions for " +
                     std::to_string(target.size()) + " targets");
  }
  if (pred.empty()) throw InputError("mse of an empty set");
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - target[i];
    acc += d * d;
  }
  return acc / static_cast<double>(pred.size());
}

// All-ones single column: the synthetic graphs carry no attributes.
inline FeatureMatrix constant_features(std::size_t n, std::size_t cols = 1) {
  return FeatureMatrix(n, cols, 1.0);
}

}  // namespace dlgnn::nn
