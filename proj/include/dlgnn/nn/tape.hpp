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
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dlgnn/error.hpp"
#include "dlgnn/matrix.hpp"

namespace dlgnn::nn {

// A named learnable matrix with its gradient accumulator.
struct Parameter {
  std::string name;
  FeatureMatrix value;
  FeatureMatrix grad;
  bool trainable = true;
  bool weight_decay = false;  // included in the L2 penalty
};

inline double sigmoid(double x) {
  return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

// Reverse-mode recorder over a fixed set of matrix operations. Each op
// appends a node holding its value and a closure that pushes the node's
// gradient to its inputs. Parameters are leaves whose gradients accumulate
// into the owning Parameter.
class Tape {
 public:
  using Var = std::size_t;
  // Applies a symmetric linear operator, in -> out (same shape).
  using LinearOp = std::function<FeatureMatrix(const FeatureMatrix&)>;

  explicit Tape(std::span<Parameter> params) : params_(params) {}
  // Recorded closures hold `this`.
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  const FeatureMatrix& value(Var v) const { return nodes_[v].value; }
  const FeatureMatrix& grad(Var v) const { return nodes_[v].grad; }
  std::size_t size() const { return nodes_.size(); }

  Var constant(FeatureMatrix m) { return push(std::move(m), nullptr); }

  Var parameter(std::size_t index) {
    Parameter& p = params_[index];
    return push(p.value, [this, index](Var self) {
      if (!params_[index].trainable) return;
      add_into(params_[index].grad, nodes_[self].grad);
    });
  }

  // x (r x a) times w (a x c).
  Var matmul(Var x, Var w) {
    const auto& xv = value(x);
    const auto& wv = value(w);
    if (xv.cols() != wv.rows()) {
      throw InputError("matmul shape mismatch " + shape_string(xv.rows(), xv.cols()) +
                       " * " + shape_string(wv.rows(), wv.cols()));
    }
    FeatureMatrix out(xv.rows(), wv.cols(), 0.0);
    gemm(xv, wv, out);
    return push(std::move(out), [this, x, w](Var self) {
      const auto& g = nodes_[self].grad;
      const auto& xv = value(x);
      const auto& wv = value(w);
      // dx += g w^T, dw += x^T g
      auto& gx = grad_of(x);
      auto& gw = grad_of(w);
      for (std::size_t r = 0; r < g.rows(); ++r) {
        for (std::size_t a = 0; a < wv.rows(); ++a) {
          double acc = 0.0;
          for (std::size_t c = 0; c < g.cols(); ++c) acc += g(r, c) * wv(a, c);
          gx(r, a) += acc;
          const double xa = xv(r, a);
          if (xa == 0.0) continue;
          for (std::size_t c = 0; c < g.cols(); ++c) gw(a, c) += xa * g(r, c);
        }
      }
    });
  }

  // Adds a 1 x c row to every row of x.
  Var add_row(Var x, Var bias) {
    FeatureMatrix out = value(x);
    const auto& b = value(bias);
    if (b.rows() != 1 || b.cols() != out.cols()) throw InputError("bias shape mismatch");
    for (std::size_t r = 0; r < out.rows(); ++r) {
      for (std::size_t c = 0; c < out.cols(); ++c) out(r, c) += b(0, c);
    }
    return push(std::move(out), [this, x, bias](Var self) {
      const auto& g = nodes_[self].grad;
      add_into(grad_of(x), g);
      auto& gb = grad_of(bias);
      for (std::size_t r = 0; r < g.rows(); ++r) {
        for (std::size_t c = 0; c < g.cols(); ++c) gb(0, c) += g(r, c);
      }
    });
  }

  Var add(Var a, Var b) {
    if (!value(a).same_shape(value(b))) throw InputError("add shape mismatch");
    FeatureMatrix out = value(a);
    add_into(out, value(b));
    return push(std::move(out), [this, a, b](Var self) {
      add_into(grad_of(a), nodes_[self].grad);
      add_into(grad_of(b), nodes_[self].grad);
    });
  }

  // sigmoid(theta[0, index]) * x
  Var sigmoid_gate(Var x, Var theta, std::size_t index) {
    const double w = sigmoid(value(theta)(0, index));
    FeatureMatrix out = value(x);
    for (double& e : out.values()) e *= w;
    return push(std::move(out), [this, x, theta, index, w](Var self) {
      const auto& g = nodes_[self].grad;
      const auto& xv = value(x);
      auto& gx = grad_of(x);
      double dw = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        gx.values()[i] += w * g.values()[i];
        dw += xv.values()[i] * g.values()[i];
      }
      grad_of(theta)(0, index) += dw * w * (1.0 - w);
    });
  }

  Var scale(Var x, double s) {
    FeatureMatrix out = value(x);
    for (double& e : out.values()) e *= s;
    return push(std::move(out), [this, x, s](Var self) {
      const auto& g = nodes_[self].grad;
      auto& gx = grad_of(x);
      for (std::size_t i = 0; i < g.size(); ++i) gx.values()[i] += s * g.values()[i];
    });
  }

  // Row r multiplied by factors[r].
  Var scale_rows(Var x, std::span<const double> factors) {
    FeatureMatrix out = value(x);
    if (factors.size() != out.rows()) throw InputError("row scale size mismatch");
    for (std::size_t r = 0; r < out.rows(); ++r) {
      for (double& e : out.row(r)) e *= factors[r];
    }
    return push(std::move(out), [this, x, f = std::vector<double>(factors.begin(), factors.end())](Var self) {
      const auto& g = nodes_[self].grad;
      auto& gx = grad_of(x);
      for (std::size_t r = 0; r < g.rows(); ++r) {
        for (std::size_t c = 0; c < g.cols(); ++c) gx(r, c) += f[r] * g(r, c);
      }
    });
  }

  // op must be linear and symmetric, so its adjoint is op itself.
  Var apply_symmetric(Var x, LinearOp op) {
    FeatureMatrix out = op(value(x));
    return push(std::move(out), [this, x, op = std::move(op)](Var self) {
      add_into(grad_of(x), op(nodes_[self].grad));
    });
  }

  Var leaky_relu(Var x, double slope) {
    FeatureMatrix out = value(x);
    for (double& e : out.values()) {
      if (e < 0) e *= slope;
    }
    return push(std::move(out), [this, x, slope](Var self) {
      const auto& g = nodes_[self].grad;
      const auto& xv = value(x);
      auto& gx = grad_of(x);
      for (std::size_t i = 0; i < g.size(); ++i) {
        gx.values()[i] += (xv.values()[i] < 0 ? slope : 1.0) * g.values()[i];
      }
    });
  }

  // Elementwise product with a fixed mask (already scaled by 1 / keep).
  Var mask(Var x, FeatureMatrix m) {
    if (!m.same_shape(value(x))) throw InputError("mask shape mismatch");
    FeatureMatrix out = value(x);
    for (std::size_t i = 0; i < out.size(); ++i) out.values()[i] *= m.values()[i];
    return push(std::move(out), [this, x, m = std::move(m)](Var self) {
      const auto& g = nodes_[self].grad;
      auto& gx = grad_of(x);
      for (std::size_t i = 0; i < g.size(); ++i) gx.values()[i] += m.values()[i] * g.values()[i];
    });
  }

  // Column sums, r x c -> 1 x c.
  Var sum_rows(Var x) {
    const auto& xv = value(x);
    FeatureMatrix out(1, xv.cols(), 0.0);
    for (std::size_t r = 0; r < xv.rows(); ++r) {
      for (std::size_t c = 0; c < xv.cols(); ++c) out(0, c) += xv(r, c);
    }
    return push(std::move(out), [this, x](Var self) {
      const auto& g = nodes_[self].grad;
      auto& gx = grad_of(x);
      for (std::size_t r = 0; r < gx.rows(); ++r) {
        for (std::size_t c = 0; c < gx.cols(); ++c) gx(r, c) += g(0, c);
      }
    });
  }

  // Mean over all entries of (pred - target)^2, as a 1 x 1 node.
  Var mse(Var pred, FeatureMatrix target) {
    const auto& p = value(pred);
    if (!p.same_shape(target)) {
      throw InputError("mse shape mismatch " + shape_string(p.rows(), p.cols()) + " vs " +
                       shape_string(target.rows(), target.cols()));
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double d = p.values()[i] - target.values()[i];
      acc += d * d;
    }
    const double count = static_cast<double>(p.size());
    return push(FeatureMatrix(1, 1, acc / count),
                [this, pred, target = std::move(target), count](Var self) {
                  const double g = nodes_[self].grad(0, 0);
                  const auto& p = value(pred);
                  auto& gp = grad_of(pred);
                  for (std::size_t i = 0; i < p.size(); ++i) {
                    gp.values()[i] += g * 2.0 * (p.values()[i] - target.values()[i]) / count;
                  }
                });
  }

  // Sum of squared entries, 1 x 1.
  Var sum_squares(Var x) {
    double acc = 0.0;
    for (double e : value(x).values()) acc += e * e;
    return push(FeatureMatrix(1, 1, acc), [this, x](Var self) {
      const double g = nodes_[self].grad(0, 0);
      const auto& xv = value(x);
      auto& gx = grad_of(x);
      for (std::size_t i = 0; i < xv.size(); ++i) gx.values()[i] += 2.0 * g * xv.values()[i];
    });
  }

  // Seeds d(root) = seed (root must be 1 x 1) and runs all closures in
  // reverse order of recording.
  void backward(Var root, double seed = 1.0) {
    if (value(root).size() != 1) throw InputError("backward root must be a scalar");
    for (auto& node : nodes_) node.grad = FeatureMatrix(node.value.rows(), node.value.cols(), 0.0);
    nodes_[root].grad(0, 0) = seed;
    for (Var v = root + 1; v-- > 0;) {
      if (nodes_[v].backward) nodes_[v].backward(v);
    }
  }

 private:
  struct Node {
    FeatureMatrix value;
    FeatureMatrix grad;
    std::function<void(Var)> backward;
  };

  Var push(FeatureMatrix value, std::function<void(Var)> backward) {
    nodes_.push_back(Node{std::move(value), {}, std::move(backward)});
    return nodes_.size() - 1;
  }

  FeatureMatrix& grad_of(Var v) { return nodes_[v].grad; }

  static void add_into(FeatureMatrix& dst, const FeatureMatrix& src) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst.values()[i] += src.values()[i];
  }

  static void gemm(const FeatureMatrix& x, const FeatureMatrix& w, FeatureMatrix& out) {
    for (std::size_t r = 0; r < x.rows(); ++r) {
      auto o = out.row(r);
      for (std::size_t a = 0; a < x.cols(); ++a) {
        const double xa = x(r, a);
        if (xa == 0.0) continue;
        auto wr = w.row(a);
        for (std::size_t c = 0; c < o.size(); ++c) o[c] += xa * wr[c];
      }
    }
  }

  std::span<Parameter> params_;
  std::vector<Node> nodes_;
};

}  // namespace dlgnn::nn
