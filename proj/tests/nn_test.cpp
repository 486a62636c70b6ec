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

#include <cmath>
#include <vector>

#include "gtest/gtest.h"

#include "dlgnn/nn/adam.hpp"
#include "dlgnn/nn/checkpoint.hpp"
#include "dlgnn/nn/model.hpp"
#include "dlgnn/nn/train.hpp"

namespace dlgnn::nn {
namespace {

ModelSpec fixed_spec(std::vector<AggregationTerm> terms, Readout readout = Readout::NodeLevel) {
  ModelSpec spec;
  spec.name = "fixed";
  LayerSpec l;
  l.terms = std::move(terms);
  l.combine = Combine::Identity;
  spec.layers.push_back(l);
  spec.readout = readout;
  return spec;
}

FeatureMatrix random_features(std::size_t n, std::size_t cols, Rng& rng) {
  FeatureMatrix x(n, cols);
  for (double& e : x.values()) e = rng.uniform(-1.0, 1.0);
  return x;
}

TEST(BuildModelTest, SpecFactories) {
  const auto l1 = gcn_l1_spec(1);
  ASSERT_EQ(l1.layers[0].terms.size(), 2u);
  EXPECT_EQ(l1.layers[0].terms[0].op, OperatorKind::SelfLoopAdjacency);
  EXPECT_EQ(l1.layers[0].terms[1].op, OperatorKind::DiagPower);
  EXPECT_EQ(l1.layers[0].terms[1].exponent, 3u);
  const auto d2 = gcn_d2_spec(1);
  ASSERT_EQ(d2.layers[0].terms.size(), 3u);
  EXPECT_EQ(d2.layers[0].terms[2].op, OperatorKind::Power);
  EXPECT_EQ(d2.layers[0].terms[2].exponent, 2u);
  EXPECT_EQ(gcn_spec(3).layers.size(), 3u);
  EXPECT_EQ(model_spec_by_name("GCN-D2-1L").name, "GCN-D2-1L");
  EXPECT_THROW(model_spec_by_name("GAT"), ConfigError);
  EXPECT_EQ(required_diag_lengths(d2), (std::set<std::size_t>{3}));
}

TEST(BuildModelTest, DeterministicAndThetaAtZero) {
  const Model a = build_model(gcn_d2_spec(2), 1, 16, 99);
  const Model b = build_model(gcn_d2_spec(2), 1, 16, 99);
  const Model c = build_model(gcn_d2_spec(2), 1, 16, 100);
  ASSERT_EQ(a.params().size(), b.params().size());
  bool differs = false;
  for (std::size_t i = 0; i < a.params().size(); ++i) {
    EXPECT_EQ(a.params()[i].value, b.params()[i].value);
    differs |= a.params()[i].value != c.params()[i].value;
  }
  EXPECT_TRUE(differs);
  for (double w : a.mixing_weights(0)) EXPECT_DOUBLE_EQ(w, 0.5);
  for (double e : a.find("layer0.w0")->value.values()) EXPECT_LE(std::abs(e), 1.0);
  for (double e : a.find("layer1.w0")->value.values()) EXPECT_LE(std::abs(e), 0.25);
}

TEST(BuildModelTest, RejectsBadDimensions) {
  EXPECT_THROW(build_model(gcn_spec(1), 0, 16, 1), InputError);
  EXPECT_THROW(build_model(gcn_spec(1), 1, 0, 1), InputError);
  ModelSpec empty;
  EXPECT_THROW(build_model(empty, 1, 16, 1), InputError);
  auto identity = fixed_spec({AggregationTerm::self_loop_adjacency()});
  EXPECT_THROW(build_model(identity, 2, 16, 1), InputError);
  ModelSpec no_terms = gcn_spec(1);
  no_terms.layers[0].terms.clear();
  EXPECT_THROW(build_model(no_terms, 1, 16, 1), InputError);
}

TEST(ForwardTest, TriangleFixedWeights) {
  const auto spec = fixed_spec({AggregationTerm::self_loop_adjacency().with_fixed_weight(1.0),
                                AggregationTerm::diag_power(3).with_fixed_weight(1.0)});
  Model m = build_model(spec, 1, 1, 0);
  const GraphContext ctx(complete_graph(3));
  const auto pass = forward(m, ctx, constant_features(3), false);
  ASSERT_EQ(pass.prediction().rows(), 3u);
  for (std::size_t v = 0; v < 3; ++v) EXPECT_DOUBLE_EQ(pass.prediction()(v, 0), 5.0);
}

TEST(ForwardTest, IsolatedNodeWithZeroWeightsGivesZero) {
  Model m = build_model(gcn_l1_spec(1), 1, 4, 3);
  for (auto& p : m.params()) p.value.fill(0.0);
  const GraphContext ctx(Graph::from_edge_list(1, {}));
  EXPECT_DOUBLE_EQ(forward(m, ctx, constant_features(1), false).prediction()(0, 0), 0.0);
}

TEST(ForwardTest, DegreeNormalization) {
  auto spec = fixed_spec({AggregationTerm::self_loop_adjacency().with_fixed_weight(1.0)});
  spec.layers[0].degree_normalize = true;
  Model m = build_model(spec, 1, 1, 0);
  const GraphContext ctx(path_graph(3));
  const FeatureMatrix out = forward(m, ctx, constant_features(3), false).prediction();
  for (std::size_t v = 0; v < 3; ++v) EXPECT_DOUBLE_EQ(out(v, 0), 1.0);
}

TEST(ForwardTest, ReproducesClosedTriangleWalks) {
  const auto spec = fixed_spec({AggregationTerm::self_loop_adjacency().with_fixed_weight(0.0),
                                AggregationTerm::diag_power(3).with_fixed_weight(1.0)});
  Model m = build_model(spec, 1, 1, 0);
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Graph g = erdos_renyi(15, 0.3, rng.next_u64());
    const GraphContext ctx(g);
    const FeatureMatrix out = forward(m, ctx, constant_features(15), false).prediction();
    const auto tri = triangle_counts_per_node(g);
    for (std::size_t v = 0; v < 15; ++v) EXPECT_EQ(out(v, 0), 2.0 * static_cast<double>(tri[v]));
  }
}

TEST(ForwardTest, EvalIsDeterministicAndTrainingUsesDropout) {
  ModelSpec spec = gcn_l1_spec(2);
  spec.dropout = 0.5;
  Model m = build_model(spec, 1, 16, 4);
  const GraphContext ctx(erdos_renyi(12, 0.3, 8));
  const auto x = constant_features(12);
  const double a = forward(m, ctx, x, false).prediction()(0, 0);
  const double b = forward(m, ctx, x, false).prediction()(0, 0);
  EXPECT_EQ(a, b);
  Rng rng(1);
  const double c = forward(m, ctx, x, true, &rng).prediction()(0, 0);
  const double d = forward(m, ctx, x, true, &rng).prediction()(0, 0);
  EXPECT_NE(c, d);
  EXPECT_THROW(forward(m, ctx, x, true), InputError);
}

TEST(ForwardTest, RejectsMismatchedFeatures) {
  Model m = build_model(gcn_spec(1), 1, 4, 0);
  const GraphContext ctx(path_graph(3));
  EXPECT_THROW(forward(m, ctx, constant_features(4), false), InputError);
  EXPECT_THROW(forward(m, ctx, constant_features(3, 2), false), InputError);
}

TEST(ForwardTest, NonFiniteActivationIsReported) {
  Model m = build_model(gcn_spec(2), 1, 4, 0);
  m.params()[0].value(0, 0) = INFINITY;
  const GraphContext ctx(path_graph(3));
  try {
    forward(m, ctx, constant_features(3), false);
    FAIL() << "expected a numeric error";
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("layer 0"), std::string::npos);
  }
}

TEST(ForwardTest, PermutationEquivariance) {
  Rng rng(21);
  for (const auto& spec : {gcn_spec(2), gcn_l1_spec(2), gcn_d2_spec(1)}) {
    ModelSpec node_level = spec;
    node_level.readout = Readout::NodeLevel;
    node_level.output_dim = 3;
    Model m = build_model(node_level, 2, 8, rng.next_u64());
    Model summed = build_model(spec, 2, 8, 7);
    const Graph g = erdos_renyi(10, 0.35, rng.next_u64());
    const auto perm = random_permutation(10, rng);
    const FeatureMatrix x = random_features(10, 2, rng);
    FeatureMatrix px(10, 2);
    for (std::size_t v = 0; v < 10; ++v) {
      for (std::size_t c = 0; c < 2; ++c) px(perm[v], c) = x(v, c);
    }
    const GraphContext cg(g), ch(relabel(g, perm));
    const FeatureMatrix out = forward(m, cg, x, false).prediction();
    const FeatureMatrix pout = forward(m, ch, px, false).prediction();
    for (std::size_t v = 0; v < 10; ++v) {
      for (std::size_t c = 0; c < 3; ++c) EXPECT_NEAR(pout(perm[v], c), out(v, c), 1e-9);
    }
    EXPECT_NEAR(forward(summed, cg, x, false).prediction()(0, 0),
                forward(summed, ch, px, false).prediction()(0, 0), 1e-9);
  }
}

TEST(SigmoidTest, StaysInOpenUnitInterval) {
  for (double t : {-30.0, -5.0, -1e-3, 0.0, 2.0, 30.0}) {
    EXPECT_GT(sigmoid(t), 0.0);
    EXPECT_LT(sigmoid(t), 1.0);
  }
  EXPECT_DOUBLE_EQ(sigmoid(0.0), 0.5);
  Model m = build_model(gcn_d2_spec(1), 1, 4, 0);
  m.find("layer0.theta")->value.values()[0] = 25.0;
  m.find("layer0.theta")->value.values()[1] = -25.0;
  for (double w : m.mixing_weights(0)) {
    EXPECT_GT(w, 0.0);
    EXPECT_LT(w, 1.0);
  }
}

TEST(MseLossTest, Examples) {
  EXPECT_DOUBLE_EQ(mse_loss(std::vector<double>{1, 2}, std::vector<double>{1, 2}), 0.0);
  EXPECT_DOUBLE_EQ(mse_loss(std::vector<double>{0}, std::vector<double>{2}), 4.0);
  EXPECT_DOUBLE_EQ(mse_loss(std::vector<double>{1, 3}, std::vector<double>{2, 2}), 1.0);
  EXPECT_THROW(mse_loss(std::vector<double>{1}, std::vector<double>{1, 2}), InputError);
}

TEST(TapeTest, MseGradientWithRespectToPrediction) {
  std::vector<Parameter> params(1);
  params[0].value = FeatureMatrix(1, 1, 0.0);
  params[0].grad = FeatureMatrix(1, 1, 0.0);
  Tape t(params);
  const auto pred = t.parameter(0);
  const auto loss = t.mse(pred, FeatureMatrix(1, 1, 2.0));
  t.backward(loss);
  EXPECT_DOUBLE_EQ(t.value(loss)(0, 0), 4.0);
  EXPECT_DOUBLE_EQ(params[0].grad(0, 0), -4.0);
}

TEST(TapeTest, MatmulAndSumSquares) {
  std::vector<Parameter> params(1);
  params[0].value = FeatureMatrix{{3.0}, {4.0}};
  params[0].grad = FeatureMatrix(2, 1, 0.0);
  Tape t(params);
  const auto w = t.parameter(0);
  const auto y = t.matmul(t.constant(FeatureMatrix{{1.0, 2.0}}), w);
  EXPECT_DOUBLE_EQ(t.value(y)(0, 0), 11.0);
  const auto loss = t.add(t.mse(y, FeatureMatrix(1, 1, 10.0)), t.sum_squares(w));
  t.backward(loss);
  EXPECT_DOUBLE_EQ(params[0].grad(0, 0), 2.0 + 6.0);
  EXPECT_DOUBLE_EQ(params[0].grad(1, 0), 4.0 + 8.0);
}

TEST(TapeTest, ZeroUpstreamGivesZeroGradients) {
  Model m = build_model(gcn_d2_spec(2), 1, 8, 2);
  const GraphContext ctx(erdos_renyi(8, 0.4, 2));
  m.zero_grad();
  auto pass = forward(m, ctx, constant_features(8), false);
  Tape& t = pass.tape();
  backward(pass, t.mse(pass.output, FeatureMatrix(1, 1, 1.0)), 0.0);
  for (const auto& p : m.params()) {
    for (double g : p.grad.values()) EXPECT_EQ(g, 0.0);
  }
  EXPECT_THROW(t.backward(t.constant(FeatureMatrix(2, 2))), InputError);
}

TEST(GradientCheckTest, SpecExamples) {
  Rng rng(31);
  {
    Model m = build_model(gcn_l1_spec(1), 1, 8, 1);
    const GraphContext ctx(complete_graph(3));
    const auto x = random_features(3, 1, rng);
    EXPECT_LE(gradient_check(m, ctx, x, FeatureMatrix(1, 1, rng.uniform(-2, 2))), 1e-4);
  }
  {
    Model m = build_model(gcn_d2_spec(1), 1, 8, 2);
    const GraphContext ctx(erdos_renyi(10, 0.3, 77));
    const auto x = random_features(10, 1, rng);
    EXPECT_LE(gradient_check(m, ctx, x, FeatureMatrix(1, 1, 3.0)), 1e-4);
  }
}

TEST(GradientCheckTest, AllFamiliesAndDepths) {
  Rng rng(37);
  for (std::size_t layers = 1; layers <= 3; ++layers) {
    for (auto spec : {gcn_spec(layers), gcn_l1_spec(layers), gcn_d2_spec(layers)}) {
      for (bool normalize : {false, true}) {
        for (auto& l : spec.layers) l.degree_normalize = normalize;
        Model m = build_model(spec, 2, 6, rng.next_u64());
        const std::size_t n = 4 + rng.below(5);
        const GraphContext ctx(erdos_renyi(n, 0.4, rng.next_u64()));
        const auto x = random_features(n, 2, rng);
        EXPECT_LE(gradient_check(m, ctx, x, FeatureMatrix(1, 1, 1.5), 1e-5, 0.01), 1e-4)
            << spec.name << " normalize=" << normalize;
      }
    }
  }
}

TEST(GradientCheckTest, NoTrainableParametersGivesZero) {
  auto spec = fixed_spec({AggregationTerm::self_loop_adjacency(), AggregationTerm::diag_power(3)});
  spec.layers[0].train_mixing = false;
  Model m = build_model(spec, 1, 1, 0);
  EXPECT_EQ(m.trainable_count(), 0u);
  const GraphContext ctx(complete_graph(4));
  EXPECT_EQ(gradient_check(m, ctx, constant_features(4), FeatureMatrix(4, 1, 1.0)), 0.0);
}

TEST(AdamTest, FirstStepExample) {
  std::vector<Parameter> params(2);
  params[0].value = FeatureMatrix(1, 1, 0.5);
  params[0].grad = FeatureMatrix(1, 1, 1.0);
  params[1].value = FeatureMatrix(1, 2, 0.25);
  params[1].grad = FeatureMatrix(1, 2, 0.0);
  AdamState state;
  adam_step(state, params, 0.001);
  EXPECT_NEAR(params[0].value(0, 0), 0.5 - 0.001 / (1.0 + 1e-8), 1e-15);
  EXPECT_EQ(params[1].value(0, 0), 0.25);
  EXPECT_EQ(params[1].value(0, 1), 0.25);
  EXPECT_EQ(state.step, 1u);
}

TEST(AdamTest, FrozenParametersAndDeterminism) {
  auto run = [] {
    std::vector<Parameter> params(2);
    params[0].value = FeatureMatrix(2, 2, 1.0);
    params[1].value = FeatureMatrix(1, 1, 3.0);
    params[1].trainable = false;
    AdamState state;
    for (int i = 0; i < 5; ++i) {
      params[0].grad = FeatureMatrix{{0.1 * i, -0.2}, {0.3, 1.0 / (i + 1)}};
      params[1].grad = FeatureMatrix(1, 1, 9.0);
      adam_step(state, params, 0.01);
    }
    return params;
  };
  const auto a = run();
  const auto b = run();
  EXPECT_EQ(a[0].value, b[0].value);
  EXPECT_EQ(a[1].value(0, 0), 3.0);
}

TEST(CheckpointTest, ExactRoundTrip) {
  Model a = build_model(gcn_d2_spec(2), 1, 16, 5);
  a.params()[0].value(0, 0) = 0.1 + 0.2;
  a.params()[1].value(0, 0) = -1.0 / 3.0;
  Model b = build_model(gcn_d2_spec(2), 1, 16, 6);
  load_checkpoint_json(b, nlohmann::json::parse(checkpoint_json(a).dump()));
  for (std::size_t i = 0; i < a.params().size(); ++i) {
    EXPECT_EQ(a.params()[i].value, b.params()[i].value) << a.params()[i].name;
  }
  const std::string path = ::testing::TempDir() + "ckpt.json";
  save_checkpoint(a, path);
  Model c = build_model(gcn_d2_spec(2), 1, 16, 7);
  load_checkpoint(c, path);
  for (std::size_t i = 0; i < a.params().size(); ++i) EXPECT_EQ(a.params()[i].value, c.params()[i].value);
}

TEST(CheckpointTest, RejectsMismatches) {
  const Model a = build_model(gcn_d2_spec(1), 1, 16, 5);
  Model wider = build_model(gcn_d2_spec(1), 1, 8, 5);
  EXPECT_THROW(load_checkpoint_json(wider, checkpoint_json(a)), InputError);
  Model other = build_model(gcn_spec(1), 1, 16, 5);
  EXPECT_THROW(load_checkpoint_json(other, checkpoint_json(a)), InputError);
  auto j = checkpoint_json(a);
  j["version"] = 2;
  Model same = build_model(gcn_d2_spec(1), 1, 16, 5);
  EXPECT_THROW(load_checkpoint_json(same, j), InputError);
  EXPECT_THROW(load_checkpoint(same, "/nonexistent/ckpt.json"), FileError);
}

}  // namespace
}  // namespace dlgnn::nn
