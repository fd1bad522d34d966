// Copyright 2026 The RAW Authors.
//
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

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "raw/agent.hpp"
#include "raw/error.hpp"
#include "test_util.hpp"

namespace raw {
namespace {

using testing::make_graph;

Vector random_vector(Eigen::Index n, Rng& rng) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.normal();
  return v;
}

void fill_random(ParamGroup& g, Rng& rng, double scale = 0.5) {
  for (Param& p : g) {
    for (Eigen::Index i = 0; i < p.value.size(); ++i) {
      p.value.data()[i] = scale * rng.normal();
    }
  }
}

// Scalar-loop scorer over [h ++ x_v ++ x_e ++ x_n].
double score_oracle(const ScoreNetParams& p, const Vector& h, const Vector& x_v,
                    const Vector& x_e, const Vector& x_n) {
  std::vector<double> in;
  for (const Vector* part : {&h, &x_v, &x_e, &x_n}) {
    for (Eigen::Index i = 0; i < part->size(); ++i) in.push_back((*part)(i));
  }
  const Matrix& W1 = p.group[ScoreNetParams::kW1].value;
  const Matrix& b1 = p.group[ScoreNetParams::kB1].value;
  const Matrix& W2 = p.group[ScoreNetParams::kW2].value;
  const Matrix& b2 = p.group[ScoreNetParams::kB2].value;
  double z = b2(0, 0);
  for (Eigen::Index r = 0; r < W1.rows(); ++r) {
    double a = b1(r, 0);
    for (std::size_t c = 0; c < in.size(); ++c) {
      a += W1(r, static_cast<Eigen::Index>(c)) * in[c];
    }
    z += W2(0, r) * std::tanh(a);
  }
  return 1.0 / (1.0 + std::exp(-z));
}

TEST(ScoreNet, ZeroParamsGiveOneHalf) {
  const ModelDims dims{3, 2, 4, 2};
  ScoreNetParams p(dims);
  Rng rng(1);
  std::vector<NeighborObservation> nb(5, {random_vector(3, rng), random_vector(2, rng)});
  const Vector phi = score_neighbors(p, random_vector(4, rng), random_vector(3, rng), nb);
  for (Eigen::Index i = 0; i < phi.size(); ++i) EXPECT_EQ(phi(i), 0.5);
}

TEST(ScoreNet, MatchesScalarOracle) {
  const ModelDims dims{3, 2, 4, 2};
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(seed);
    ScoreNetParams p(dims);
    fill_random(p.group, rng);
    const Vector h = random_vector(4, rng);
    const Vector x_v = random_vector(3, rng);
    std::vector<NeighborObservation> nb;
    for (int k = 0; k < 3; ++k) nb.push_back({random_vector(3, rng), random_vector(2, rng)});
    const Vector phi = score_neighbors(p, h, x_v, nb);
    for (int k = 0; k < 3; ++k) {
      EXPECT_NEAR(phi(k), score_oracle(p, h, x_v, nb[k].x_e, nb[k].x_n), 1e-12);
      EXPECT_GT(phi(k), 0.0);
      EXPECT_LT(phi(k), 1.0);
    }
  }
}

TEST(ScoreNet, PermutationEquivariant) {
  const ModelDims dims{2, 1, 3, 2};
  Rng rng(9);
  ScoreNetParams p(dims);
  fill_random(p.group, rng);
  const Vector h = random_vector(3, rng);
  const Vector x_v = random_vector(2, rng);
  std::vector<NeighborObservation> nb;
  for (int k = 0; k < 4; ++k) nb.push_back({random_vector(2, rng), random_vector(1, rng)});
  const Vector phi = score_neighbors(p, h, x_v, nb);
  const std::vector<int> perm = {2, 0, 3, 1};
  std::vector<NeighborObservation> shuffled;
  for (int i : perm) shuffled.push_back(nb[i]);
  const Vector phi2 = score_neighbors(p, h, x_v, shuffled);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(phi2(i), phi(perm[i]));
}

TEST(Categorical, Normalization) {
  Vector a(3);
  a << 0.2, 0.3, 0.5;
  const Vector pa = action_probabilities(a);
  EXPECT_NEAR(pa(0), 0.2, 1e-15);
  EXPECT_NEAR(pa(1), 0.3, 1e-15);
  EXPECT_NEAR(pa(2), 0.5, 1e-15);
  Vector b(2);
  b << 0.4, 0.4;
  EXPECT_EQ(action_probabilities(b), Vector::Constant(2, 0.5));
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    const Vector phi = sigmoid(random_vector(1 + static_cast<int>(rng.below(9)), rng));
    EXPECT_NEAR(action_probabilities(phi).sum(), 1.0, 1e-9);
  }
}

TEST(Categorical, SampleFrequency) {
  Vector phi(2);
  phi << 0.1, 0.9;
  Rng rng(2024);
  int ones = 0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) ones += sample_next(phi, rng).index == 1;
  EXPECT_NEAR(static_cast<double>(ones) / draws, 0.9, 0.01);
}

TEST(Categorical, LogProbMatchesDistribution) {
  Vector phi(3);
  phi << 0.2, 0.7, 0.4;
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const Sample s = sample_next(phi, rng);
    EXPECT_NEAR(std::exp(s.logprob), phi(s.index) / phi.sum(), 1e-15);
    EXPECT_FALSE(s.uniform_fallback);
  }
}

TEST(Categorical, UnderflowFallsBackToUniform) {
  const Vector phi = Vector::Zero(4);
  Rng rng(5);
  std::set<std::size_t> seen;
  for (int i = 0; i < 200; ++i) {
    const Sample s = sample_next(phi, rng);
    EXPECT_TRUE(s.uniform_fallback);
    EXPECT_NEAR(s.logprob, -std::log(4.0), 1e-15);
    seen.insert(s.index);
  }
  EXPECT_EQ(seen.size(), 4u);
  EXPECT_EQ(action_probabilities(phi), Vector::Constant(4, 0.25));
}

TEST(Categorical, ZeroScoreNeverChosen) {
  Vector phi(3);
  phi << 0.0, 0.5, 0.0;
  Rng rng(6);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(sample_next(phi, rng).index, 1u);
}

TEST(Aggregate, DirectExample) {
  Vector phi(3);
  phi << 0.9, 0.3, 0.6;
  Matrix attrs(2, 3);
  attrs << 1, 0, 2, 0, 1, 2;
  const Vector c = aggregate_relevant(phi, attrs);
  EXPECT_EQ(c(0), 3.0);
  EXPECT_EQ(c(1), 2.0);
}

TEST(Aggregate, ExactlyHalfExcluded) {
  Vector phi(2);
  phi << 0.5, std::nextafter(0.5, 1.0);
  Matrix attrs(1, 2);
  attrs << 1, 10;
  EXPECT_EQ(aggregate_relevant(phi, attrs)(0), 10.0);
}

TEST(Aggregate, AllBelowHalfIsZero) {
  Vector phi(3);
  phi << 0.1, 0.49, 0.3;
  EXPECT_TRUE(aggregate_relevant(phi, Matrix::Ones(4, 3)).isZero());
}

TEST(Classifier, ZeroParamsUniform) {
  const ModelDims dims{2, 1, 3, 4};
  ClassifierParams p(dims);
  Rng rng(1);
  const Vector probs = classify(p, random_vector(3, rng));
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(probs(i), 0.25, 1e-15);
}

TEST(Classifier, SumsToOneAndArgmaxShiftInvariant) {
  const ModelDims dims{2, 1, 5, 3};
  Rng rng(2);
  ClassifierParams p(dims);
  fill_random(p.group, rng, 1.0);
  for (int i = 0; i < 50; ++i) {
    const auto c = classifier_forward(p, random_vector(5, rng));
    EXPECT_NEAR(c.probs.sum(), 1.0, 1e-12);
    const Vector shifted = (c.logits.array() + 42.0).matrix();
    EXPECT_EQ(argmax(c.logits), argmax(shifted));
    EXPECT_EQ(argmax(c.logits), argmax(c.probs));
  }
}

TEST(Argmax, TiesGoToLowestIndex) {
  Vector v(3);
  v << 0.2, 0.4, 0.4;
  EXPECT_EQ(argmax(v), 1);
}

class WalkTest : public ::testing::Test {
 protected:
  WalkTest()
      : graph(make_graph(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}, {0, 3}})),
        view(graph),
        model(ModelDims{2, 1, 4, 2}) {
    model.init(3);
  }
  AttributedGraph graph;
  GraphView view;
  Model model;
};

TEST_F(WalkTest, LengthTwo) {
  Rng rng(1);
  const Trajectory t = walk(view, 0, 2, model, rng);
  EXPECT_EQ(t.nodes.size(), 2u);
  EXPECT_EQ(t.chosen_logprobs.size(), 1u);
  EXPECT_EQ(t.chosen_scores.size(), 1u);
  EXPECT_EQ(t.score_records.size(), 2u);
  EXPECT_EQ(t.start(), 0);
}

TEST_F(WalkTest, StepsFollowEdges) {
  Rng rng(2);
  for (NodeId s = 0; s < 6; ++s) {
    const Trajectory t = walk(view, s, 10, model, rng);
    ASSERT_EQ(t.nodes.size(), 10u);
    for (std::size_t i = 0; i + 1 < t.nodes.size(); ++i) {
      const auto nb = graph.neighbors(t.nodes[i]);
      EXPECT_TRUE(std::any_of(nb.begin(), nb.end(), [&](const Neighbor& n) {
        return n.node == t.nodes[i + 1];
      }));
      EXPECT_NEAR(std::exp(t.chosen_logprobs[i]),
                  t.chosen_scores[i] / t.score_records[i].sum(), 1e-14);
    }
  }
}

TEST_F(WalkTest, Deterministic) {
  Rng a(99);
  Rng b(99);
  const Trajectory x = walk(view, 2, 8, model, a);
  const Trajectory y = walk(view, 2, 8, model, b);
  EXPECT_EQ(x.nodes, y.nodes);
  EXPECT_EQ(x.chosen_logprobs, y.chosen_logprobs);
  EXPECT_EQ(x.h_T, y.h_T);
}

TEST_F(WalkTest, ReplayReproducesWalk) {
  Rng rng(5);
  const Trajectory x = walk(view, 1, 6, model, rng);
  std::vector<std::int64_t> choices;
  for (std::size_t t = 0; t + 1 < x.steps.size(); ++t) choices.push_back(x.steps[t].chosen);
  const Trajectory y = replay_walk(view, 1, model, choices);
  EXPECT_EQ(x.nodes, y.nodes);
  EXPECT_EQ(x.h_T, y.h_T);
  for (std::size_t i = 0; i < x.chosen_logprobs.size(); ++i) {
    EXPECT_NEAR(x.chosen_logprobs[i], y.chosen_logprobs[i], 1e-15);
  }
}

TEST_F(WalkTest, HistoryStaysInOpenInterval) {
  Rng rng(6);
  for (int i = 0; i < 30; ++i) {
    const Trajectory t = walk(view, i % 6, 12, model, rng);
    for (const auto& s : t.steps) EXPECT_LT(s.gru.h.cwiseAbs().maxCoeff(), 1.0);
  }
}

TEST_F(WalkTest, Errors) {
  Rng rng(1);
  EXPECT_THROW(walk(view, 0, 1, model, rng), UsageError);
  EXPECT_THROW(walk(view, 6, 3, model, rng), RangeError);
  Model wrong(ModelDims{3, 1, 4, 2});
  EXPECT_THROW(walk(view, 0, 3, wrong, rng), DimensionError);
  const std::int64_t bad[] = {7};
  EXPECT_THROW(replay_walk(view, 0, model, bad), RangeError);
}

TEST(Walk, PathWithSelfLoopsStaysInComponent) {
  GraphInput in;
  in.num_nodes = 4;
  in.edges = {{0, 1}, {0, 0}, {1, 1}, {2, 3}};
  in.node_attrs = RowMatrix::Ones(4, 2);
  const auto g = AttributedGraph::build(in);
  Model model(ModelDims{2, 0, 3, 2});
  model.init(1);
  Rng rng(7);
  std::set<NodeId> visited;
  for (int i = 0; i < 50; ++i) {
    const Trajectory t = walk(GraphView(g), 0, 10, model, rng);
    visited.insert(t.nodes.begin(), t.nodes.end());
  }
  EXPECT_EQ(visited, (std::set<NodeId>{0, 1}));
}

TEST(Walk, CurrentVersionContract) {
  const auto g = make_graph(3, {{0, 1}, {1, 2}});
  Model model(ModelDims{2, 1, 3, 2});
  model.init(2);
  Rng rng(1);
  const Trajectory t = walk(GraphView(g), 0, 3, model, rng);
  EXPECT_NO_THROW(require_current(model, t));
  model.score.group[0].grad.setOnes();
  adam_step(model.score.group, 0.01);
  EXPECT_THROW(require_current(model, t), ContractError);
  Model other = model;
  const Trajectory u = walk(GraphView(g), 0, 3, model, rng);
  EXPECT_THROW(require_current(other, u), ContractError);
}

TEST(Ensemble, MeanAndArgmax) {
  Vector a(2);
  a << 0.6, 0.4;
  Vector b(2);
  b << 0.2, 0.8;
  const std::vector<Vector> probs = {a, b};
  const Prediction p = ensemble_prediction(probs);
  EXPECT_NEAR(p.mean_probs(0), 0.4, 1e-15);
  EXPECT_NEAR(p.mean_probs(1), 0.6, 1e-15);
  EXPECT_EQ(p.label, 1);

  const std::vector<Vector> same(5, a);
  EXPECT_EQ(ensemble_prediction(same).label, argmax(a));
}

TEST(Predict, SingleWalkIsThatWalksArgmax) {
  const auto g = make_graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  Model model(ModelDims{2, 1, 4, 3});
  model.init(8);
  const Prediction p = predict(GraphView(g), 2, model, 1, 5, 11);
  Rng rng(predict_walk_seed(11, 2, 0));
  const Trajectory t = walk(GraphView(g), 2, 5, model, rng);
  const Vector probs = classify(model.classifier, t.h_T);
  EXPECT_EQ(p.mean_probs, probs);
  EXPECT_EQ(p.label, argmax(probs));
}

TEST(Predict, ThreadCountDoesNotChangeResult) {
  const auto g = make_graph(8, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 0}});
  Model model(ModelDims{2, 1, 6, 2});
  model.init(4);
  const Prediction a = predict(GraphView(g), 3, model, 10, 6, 2, 1);
  const Prediction b = predict(GraphView(g), 3, model, 10, 6, 2, 4);
  EXPECT_EQ(a.mean_probs, b.mean_probs);
}

TEST(Workspace, CounterRecordsEveryStep) {
  const auto g = make_graph(4, {{0, 1}, {1, 2}, {2, 3}});
  Model model(ModelDims{2, 1, 3, 2});
  model.init(1);
  WorkspaceCounter counter;
  Rng rng(1);
  walk(GraphView(g), 0, 5, model, rng, &counter);
  ASSERT_EQ(counter.per_step.size(), 5u);
  EXPECT_EQ(counter.peak(),
            *std::max_element(counter.per_step.begin(), counter.per_step.end()));
}

}  // namespace
}  // namespace raw
