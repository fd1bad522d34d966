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

// Semi-supervised training. The score network and the GRU are trained with
// REINFORCE on a terminal +1/-1 reward, discounted by gamma^(T-t) for the
// action taken at step t. The classifier is trained with cross-entropy plus
// L2, and that loss also flows back through the GRU chain.
//
// Gradient accumulators always hold the gradient of a loss to be minimized,
// so the policy term contributes -grad J.

#ifndef RAW_TRAINER_HPP_
#define RAW_TRAINER_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "raw/agent.hpp"
#include "raw/graph.hpp"

namespace raw {

struct TrainConfig {
  int T = 10;
  int m_train = 5;
  int m_test = 10;
  double gamma = 0.99;
  double lr = 1e-4;
  int hidden_dim = 128;
  int epochs = 30;
  double l2 = 5e-4;
  std::uint64_t seed = 0;
  int threads = 1;

  // Off switches for the ambiguous parts of the training rule.
  bool supervised_to_core = true;     // classifier loss reaches the GRU
  bool reward_from_ensemble = false;  // reward from the M-walk mean prediction
  bool reward_baseline = false;       // subtract the batch mean reward

  void validate() const;
};

struct EpochStats {
  int epoch = 0;
  double mean_reward = 0.0;
  double train_accuracy = 0.0;  // per-walk predictions
  double mean_loss = 0.0;       // mean cross-entropy
  double seconds = 0.0;
};

// Label access used during training. Walks never see labels; the trainer
// reads the start node's label through this interface only.
class LabelReader {
 public:
  virtual ~LabelReader() = default;
  virtual ClassId label(NodeId v) const = 0;
};

class GraphLabels : public LabelReader {
 public:
  explicit GraphLabels(const AttributedGraph& g) : g_(&g) {}
  ClassId label(NodeId v) const override { return g_->label(v); }

 private:
  const AttributedGraph* g_;
};

double terminal_reward(ClassId predicted, ClassId truth);

// Adds weight * R * sum_t gamma^(T-t) * (-grad log pi(a_t)) for t = 1..T-1
// into the score network and GRU accumulators. The classifier is untouched.
void episode_policy_gradient(const Trajectory& traj, double reward,
                             double gamma, Model& model, double weight = 1.0);

// Cross-entropy of the classifier on h_T plus l2 * ||theta_c||^2. Adds
// weight * gradient into the classifier and, unless to_core is false, the
// GRU. The score network is untouched. Returns the unweighted loss.
double supervised_step(const Trajectory& traj, ClassId truth, Model& model,
                       double l2, double weight = 1.0, bool to_core = true);

// Both passes with a single reverse sweep through the GRU chain. Equal to
// calling episode_policy_gradient and supervised_step in turn.
double accumulate_episode(const Trajectory& traj, ClassId truth, double reward,
                          const TrainConfig& cfg, Model& model, double weight);

EpochStats train_epoch(const GraphView& view, const LabelReader& labels,
                       std::span<const NodeId> train_ids, Model& model,
                       const TrainConfig& cfg, int epoch);

struct TrainHooks {
  std::function<void(const EpochStats&)> on_epoch;
  // Receives the parameters at the point a numeric failure aborted training.
  std::function<void(const Model&)> on_numeric_failure;
};

struct TrainResult {
  Model final_model;
  Model best_model;  // highest mean training reward; initial params if none
  int best_epoch = -1;
  std::vector<EpochStats> history;
};

ModelDims model_dims(const AttributedGraph& g, const TrainConfig& cfg);

TrainResult train(const AttributedGraph& g, const LabelSplit& split,
                  const TrainConfig& cfg, const TrainHooks& hooks = {});

// Same, with an explicit label source (e.g. a counting wrapper in tests).
TrainResult train(const AttributedGraph& g, const LabelReader& labels,
                  const LabelSplit& split, const TrainConfig& cfg,
                  const TrainHooks& hooks = {});

struct EvalReport {
  double accuracy = 0.0;
  std::vector<double> class_accuracy;  // NaN for classes without test nodes
  std::vector<std::int64_t> class_count;
  std::vector<ClassId> predictions;
};

EvalReport evaluate(const AttributedGraph& g, std::span<const NodeId> ids,
                    const Model& model, const TrainConfig& cfg);

}  // namespace raw

#endif  // RAW_TRAINER_HPP_
