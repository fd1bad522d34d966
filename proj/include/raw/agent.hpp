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

// The walking agent: a score network rates each neighbor of the current
// node, the next node is drawn in proportion to those scores, neighbors
// scoring above one half are summed into an aggregate, and a GRU folds the
// current node attribute and that aggregate into the walk history. After T
// steps a classifier maps the history to class probabilities for the start
// node.

#ifndef RAW_AGENT_HPP_
#define RAW_AGENT_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "raw/graph.hpp"
#include "raw/nn.hpp"
#include "raw/rng.hpp"

namespace raw {

struct ModelDims {
  Eigen::Index node_dim = 0;
  Eigen::Index edge_dim = 0;
  Eigen::Index hidden = 0;
  Eigen::Index num_classes = 0;

  friend bool operator==(const ModelDims&, const ModelDims&) = default;
};

// Per-neighbor scorer on [h_prev ++ x_v ++ x_e ++ x_n]: one tanh hidden
// layer of width `hidden`, then a scalar sigmoid.
class ScoreNetParams {
 public:
  enum Index : std::size_t { kW1, kB1, kW2, kB2 };
  explicit ScoreNetParams(const ModelDims& dims);

  ParamGroup group{"score"};
  const ModelDims& dims() const { return dims_; }

 private:
  ModelDims dims_;
};

// Two-layer classifier: tanh hidden layer of width `hidden`, then logits.
class ClassifierParams {
 public:
  enum Index : std::size_t { kW1, kB1, kW2, kB2 };
  explicit ClassifierParams(const ModelDims& dims);

  ParamGroup group{"classifier"};

 private:
  ModelDims dims_;
};

struct Model {
  explicit Model(const ModelDims& dims);

  // Scaled-uniform weights and zero biases from `seed`.
  void init(std::uint64_t seed);
  std::array<ParamGroup*, 3> groups() {
    return {&score.group, &core.group, &classifier.group};
  }
  std::array<const ParamGroup*, 3> groups() const {
    return {&score.group, &core.group, &classifier.group};
  }
  void zero_grads();

  ModelDims dims;
  ScoreNetParams score;
  GruParams core;
  ClassifierParams classifier;
};

// ---- score network ----

// Neighbor inputs are stored column-wise: rows [0, D_e) hold x_e, rows
// [D_e, D_e + D_v) hold x_n.
struct ScoreCache {
  Vector h_prev;
  Vector x_v;
  Matrix neighbor_inputs;
  Matrix hidden;  // hidden x degree
  Vector phi;
};

ScoreCache score_forward(const ScoreNetParams& p, const Vector& h_prev,
                         const Vector& x_v, Matrix neighbor_inputs);

// Accumulates score-net gradients for dL/dphi and returns dL/dh_prev.
Vector score_backward(ScoreNetParams& p, const ScoreCache& cache,
                      const Vector& dphi);

struct NeighborObservation {
  Vector x_n;
  Vector x_e;
};

Vector score_neighbors(const ScoreNetParams& p, const Vector& h_prev,
                       const Vector& x_v,
                       std::span<const NeighborObservation> neighborhood);

// ---- action and aggregation ----

struct Sample {
  std::size_t index = 0;
  double logprob = 0.0;
  bool uniform_fallback = false;
};

// phi / sum(phi), or uniform when the sum underflows.
Vector action_probabilities(const Vector& phi);

// Draws from Cat(phi / sum(phi)). Falls back to uniform if the sum underflows.
Sample sample_next(const Vector& phi, Rng& rng);

// Sum of the columns of `neighbor_attrs` whose score is strictly above 0.5.
Vector aggregate_relevant(const Vector& phi,
                          const Eigen::Ref<const Matrix>& neighbor_attrs);

// ---- classifier ----

struct ClassifierCache {
  Vector h;
  Vector hidden;
  Vector logits;
  Vector probs;
};

ClassifierCache classifier_forward(const ClassifierParams& p, const Vector& h);
// Accumulates classifier gradients for dL/dlogits and returns dL/dh.
Vector classifier_backward(ClassifierParams& p, const ClassifierCache& cache,
                           const Vector& dlogits);

Vector classify(const ClassifierParams& p, const Vector& h_T);

// ---- walk ----

struct WalkStep {
  NodeId node = 0;
  ScoreCache score;
  GruCache gru;
  std::int64_t chosen = -1;  // neighbor position; -1 on the last step
  double logprob = 0.0;
  bool uniform_fallback = false;
};

// Counts values materialized by each walk step.
struct WorkspaceCounter {
  std::vector<std::int64_t> per_step;
  std::int64_t peak() const;
};

struct Trajectory {
  std::vector<NodeId> nodes;           // length T, nodes[0] = start
  std::vector<double> chosen_logprobs;  // length T - 1
  std::vector<double> chosen_scores;    // phi of the chosen neighbor
  std::vector<Vector> score_records;    // phi per step, length T
  Vector h_T;
  Vector terminal_probs;  // empty until classified
  int uniform_fallbacks = 0;

  // Intermediates for backpropagation. Empty for baseline walks.
  std::vector<WalkStep> steps;
  const Model* model = nullptr;
  std::array<std::uint64_t, 3> versions{};

  NodeId start() const { return nodes.front(); }
  std::size_t length() const { return nodes.size(); }
};

// Runs T steps from `start`. Steps 1..T-1 score, sample and move; step T
// scores and aggregates only. The history starts at zero.
Trajectory walk(const GraphView& view, NodeId start, int T, const Model& model,
                Rng& rng, WorkspaceCounter* counter = nullptr);

// Re-runs a walk with the neighbor choices fixed (`choices[t]` is the
// neighbor position taken at step t + 1). Gives a deterministic function of
// the parameters for gradient checking.
Trajectory replay_walk(const GraphView& view, NodeId start, const Model& model,
                       std::span<const std::int64_t> choices);

// Fills traj.terminal_probs and returns the classifier intermediates.
ClassifierCache classify_trajectory(const Model& model, Trajectory& traj);

// Throws ContractError unless `traj` was produced by `model` at its current
// parameter versions.
void require_current(const Model& model, const Trajectory& traj);

struct Prediction {
  ClassId label = 0;
  Vector mean_probs;
};

// Argmax with ties broken toward the lowest index.
ClassId argmax(const Vector& v);

// Mean of per-walk class distributions and its argmax.
Prediction ensemble_prediction(std::span<const Vector> walk_probs);

Prediction predict(const GraphView& view, NodeId start, const Model& model,
                   int m_test, int T, std::uint64_t seed, int threads = 1);

// Seed of the i-th prediction walk from `start`.
std::uint64_t predict_walk_seed(std::uint64_t seed, NodeId start,
                                std::int64_t walk_index);

}  // namespace raw

#endif  // RAW_AGENT_HPP_
