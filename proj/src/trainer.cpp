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

#include "raw/trainer.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "raw/error.hpp"
#include "raw/parallel.hpp"

namespace raw {

namespace {

constexpr std::uint64_t kTrainWalkStream = 0x747261696e;  // "train"
constexpr std::uint64_t kOrderStream = 0x6f72646572;      // "order"
constexpr std::uint64_t kInitStream = 0x696e6974;         // "init"

// Reverse sweep over one trajectory. `dh_T` (may be null) is dL/dh_T from
// the classifier; `policy_weight` scales -sum_t gamma^(T-t) log pi(a_t).
void backprop_walk(const Trajectory& traj, Model& model, const Vector* dh_T,
                   double policy_weight, double gamma) {
  const std::size_t T = traj.steps.size();
  const Eigen::Index d = model.dims.hidden;
  // dh[t] = dL/dh_t, t = 0..T
  std::vector<Vector> dh(T + 1, Vector::Zero(d));
  std::vector<bool> live(T + 1, false);
  if (dh_T) {
    dh[T] += *dh_T;
    live[T] = true;
  }

  if (policy_weight != 0.0) {
    for (std::size_t t = 1; t < T; ++t) {
      const WalkStep& step = traj.steps[t - 1];
      if (step.uniform_fallback) continue;  // log-prob independent of theta
      const double coeff =
          -policy_weight * std::pow(gamma, static_cast<double>(T - t));
      const Vector& phi = step.score.phi;
      // d log(phi_i / sum phi) / d phi_j = [i == j] / phi_i - 1 / sum phi
      Vector dphi = Vector::Constant(phi.size(), -coeff / phi.sum());
      dphi(step.chosen) += coeff / phi(step.chosen);
      dh[t - 1] += score_backward(model.score, step.score, dphi);
      live[t - 1] = true;
    }
  }

  // h_t is produced by GRU step t from h_{t-1}; h_0 is a constant.
  bool carry = false;
  for (std::size_t t = T; t >= 1; --t) {
    carry = carry || live[t];
    if (!carry) continue;
    const GruInputGrads g = gru_backward(model.core, traj.steps[t - 1].gru, dh[t]);
    dh[t - 1] += g.dh_prev;
  }
}

double classifier_l2(const Model& model) {
  return model.classifier.group.squared_norm();
}

void add_l2_grad(Model& model, double l2, double weight) {
  for (Param& p : model.classifier.group) {
    p.grad += (2.0 * l2 * weight) * p.value;
  }
}

}  // namespace

void TrainConfig::validate() const {
  if (T < 2) throw UsageError("T must be >= 2");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw UsageError("gamma must lie in (0, 1]");
  if (m_train < 1) throw UsageError("m_train must be >= 1");
  if (m_test < 1) throw UsageError("m_test must be >= 1");
  if (!(lr > 0.0)) throw UsageError("lr must be positive");
  if (hidden_dim < 1) throw UsageError("hidden_dim must be >= 1");
  if (epochs < 0) throw UsageError("epochs must be >= 0");
  if (!(l2 >= 0.0)) throw UsageError("l2 must be >= 0");
  if (threads < 1) throw UsageError("threads must be >= 1");
}

double terminal_reward(ClassId predicted, ClassId truth) {
  return predicted == truth ? 1.0 : -1.0;
}

void episode_policy_gradient(const Trajectory& traj, double reward,
                             double gamma, Model& model, double weight) {
  require_current(model, traj);
  if (traj.chosen_logprobs.size() + 1 != traj.nodes.size()) {
    throw ContractError("trajectory must carry T - 1 log-probabilities");
  }
  backprop_walk(traj, model, nullptr, weight * reward, gamma);
}

double supervised_step(const Trajectory& traj, ClassId truth, Model& model,
                       double l2, double weight, bool to_core) {
  require_current(model, traj);
  const ClassifierCache cache = classifier_forward(model.classifier, traj.h_T);
  const SoftmaxCrossEntropy ce = softmax_cross_entropy(cache.logits, truth);
  const double loss = ce.loss + l2 * classifier_l2(model);
  const Vector dh_T =
      classifier_backward(model.classifier, cache, weight * ce.grad);
  add_l2_grad(model, l2, weight);
  if (to_core) backprop_walk(traj, model, &dh_T, 0.0, 1.0);
  return loss;
}

double accumulate_episode(const Trajectory& traj, ClassId truth, double reward,
                          const TrainConfig& cfg, Model& model, double weight) {
  require_current(model, traj);
  const ClassifierCache cache = classifier_forward(model.classifier, traj.h_T);
  const SoftmaxCrossEntropy ce = softmax_cross_entropy(cache.logits, truth);
  const Vector dh_T =
      classifier_backward(model.classifier, cache, weight * ce.grad);
  add_l2_grad(model, cfg.l2, weight);
  backprop_walk(traj, model, cfg.supervised_to_core ? &dh_T : nullptr,
                weight * reward, cfg.gamma);
  return ce.loss;
}

EpochStats train_epoch(const GraphView& view, const LabelReader& labels,
                       std::span<const NodeId> train_ids, Model& model,
                       const TrainConfig& cfg, int epoch) {
  if (train_ids.empty()) throw UsageError("no training nodes");
  const auto started = std::chrono::steady_clock::now();

  std::vector<NodeId> order(train_ids.begin(), train_ids.end());
  Rng order_rng(derive_seed(cfg.seed, {kOrderStream,
                                       static_cast<std::uint64_t>(epoch)}));
  order_rng.shuffle(order);

  const auto m = static_cast<std::size_t>(cfg.m_train);
  const double weight = 1.0 / static_cast<double>(m);
  double reward_sum = 0.0;
  double loss_sum = 0.0;
  std::int64_t correct = 0;
  std::int64_t episodes = 0;

  std::vector<Trajectory> trajs(m);
  for (NodeId start : order) {
    parallel_for(static_cast<std::int64_t>(m), cfg.threads, [&](std::int64_t i) {
      Rng rng(derive_seed(cfg.seed, {kTrainWalkStream,
                                     static_cast<std::uint64_t>(epoch),
                                     static_cast<std::uint64_t>(start),
                                     static_cast<std::uint64_t>(i)}));
      trajs[static_cast<std::size_t>(i)] = walk(view, start, cfg.T, model, rng);
      classify_trajectory(model, trajs[static_cast<std::size_t>(i)]);
    });

    const ClassId truth = labels.label(start);
    std::vector<double> rewards(m);
    Vector mean_probs = Vector::Zero(model.dims.num_classes);
    for (const auto& tr : trajs) mean_probs += tr.terminal_probs;
    const ClassId ensemble = argmax(mean_probs);
    double batch_mean = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const ClassId own = argmax(trajs[i].terminal_probs);
      if (own == truth) ++correct;
      rewards[i] = terminal_reward(cfg.reward_from_ensemble ? ensemble : own, truth);
      reward_sum += rewards[i];
      batch_mean += rewards[i] * weight;
    }

    // Fixed walk-index order keeps accumulation deterministic.
    for (std::size_t i = 0; i < m; ++i) {
      const double r = cfg.reward_baseline ? rewards[i] - batch_mean : rewards[i];
      loss_sum += accumulate_episode(trajs[i], truth, r, cfg, model, weight);
      ++episodes;
    }
    for (ParamGroup* g : model.groups()) adam_step(*g, cfg.lr);
  }

  EpochStats stats;
  stats.epoch = epoch;
  stats.mean_reward = reward_sum / static_cast<double>(episodes);
  stats.train_accuracy =
      static_cast<double>(correct) / static_cast<double>(episodes);
  stats.mean_loss = loss_sum / static_cast<double>(episodes);
  stats.seconds = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - started)
                      .count();
  if (!std::isfinite(stats.mean_loss)) {
    throw NumericError("non-finite training loss in epoch " +
                       std::to_string(epoch));
  }
  return stats;
}

ModelDims model_dims(const AttributedGraph& g, const TrainConfig& cfg) {
  ModelDims d;
  d.node_dim = g.node_attr_dim();
  d.edge_dim = g.edge_attr_dim();
  d.hidden = cfg.hidden_dim;
  d.num_classes = g.num_classes();
  return d;
}

TrainResult train(const AttributedGraph& g, const LabelSplit& split,
                  const TrainConfig& cfg, const TrainHooks& hooks) {
  return train(g, GraphLabels(g), split, cfg, hooks);
}

TrainResult train(const AttributedGraph& g, const LabelReader& labels,
                  const LabelSplit& split, const TrainConfig& cfg,
                  const TrainHooks& hooks) {
  cfg.validate();
  Model model(model_dims(g, cfg));
  model.init(derive_seed(cfg.seed, {kInitStream}));
  TrainResult result{model, model, -1, {}};

  const GraphView view(g);
  double best_reward = -std::numeric_limits<double>::infinity();
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    EpochStats stats;
    try {
      stats = train_epoch(view, labels, split.train_ids, model, cfg, epoch);
    } catch (const NumericError&) {
      if (hooks.on_numeric_failure) hooks.on_numeric_failure(model);
      throw;
    }
    result.history.push_back(stats);
    if (hooks.on_epoch) hooks.on_epoch(stats);
    if (stats.mean_reward > best_reward) {
      best_reward = stats.mean_reward;
      result.best_model = model;
      result.best_epoch = epoch;
    }
  }
  result.final_model = std::move(model);
  return result;
}

EvalReport evaluate(const AttributedGraph& g, std::span<const NodeId> ids,
                    const Model& model, const TrainConfig& cfg) {
  const GraphView view(g);
  const auto k = static_cast<std::size_t>(model.dims.num_classes);
  EvalReport report;
  report.class_count.assign(k, 0);
  std::vector<std::int64_t> class_correct(k, 0);
  std::int64_t correct = 0;
  for (NodeId v : ids) {
    const Prediction p =
        predict(view, v, model, cfg.m_test, cfg.T, cfg.seed, cfg.threads);
    report.predictions.push_back(p.label);
    const ClassId truth = g.label(v);
    if (truth == kUnlabeled) throw UsageError("evaluation node is unlabeled");
    ++report.class_count[static_cast<std::size_t>(truth)];
    if (p.label == truth) {
      ++correct;
      ++class_correct[static_cast<std::size_t>(truth)];
    }
  }
  report.accuracy = ids.empty() ? 0.0
                                : static_cast<double>(correct) /
                                      static_cast<double>(ids.size());
  for (std::size_t c = 0; c < k; ++c) {
    report.class_accuracy.push_back(
        report.class_count[c] == 0
            ? std::numeric_limits<double>::quiet_NaN()
            : static_cast<double>(class_correct[c]) /
                  static_cast<double>(report.class_count[c]));
  }
  return report;
}

}  // namespace raw
