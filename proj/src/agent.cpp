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

#include "raw/agent.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "raw/error.hpp"
#include "raw/parallel.hpp"

namespace raw {

namespace {

constexpr std::uint64_t kPredictStream = 0x70726564;  // "pred"

Eigen::Index score_input_dim(const ModelDims& d) {
  return d.hidden + 2 * d.node_dim + d.edge_dim;
}

std::int64_t values_in(const ScoreCache& c) {
  return c.h_prev.size() + c.x_v.size() + c.neighbor_inputs.size() +
         c.hidden.size() + c.phi.size();
}

std::int64_t values_in(const GruCache& c) {
  return c.x.size() + c.h_prev.size() + c.z.size() + c.r.size() +
         c.uh.size() + c.cand.size() + c.h.size();
}

}  // namespace

ScoreNetParams::ScoreNetParams(const ModelDims& dims) : dims_(dims) {
  group.add_weight("W1", dims.hidden, score_input_dim(dims));
  group.add_bias("b1", dims.hidden);
  group.add_weight("W2", 1, dims.hidden);
  group.add_bias("b2", 1);
}

ClassifierParams::ClassifierParams(const ModelDims& dims) : dims_(dims) {
  group.add_weight("W1", dims.hidden, dims.hidden);
  group.add_bias("b1", dims.hidden);
  group.add_weight("W2", dims.num_classes, dims.hidden);
  group.add_bias("b2", dims.num_classes);
}

Model::Model(const ModelDims& d)
    : dims(d), score(d), core(2 * d.node_dim, d.hidden), classifier(d) {
  if (d.hidden < 1 || d.node_dim < 1 || d.num_classes < 2 || d.edge_dim < 0) {
    throw DimensionError("invalid model dimensions");
  }
}

void Model::init(std::uint64_t seed) {
  Rng rng(derive_seed(seed, {0x1417}));
  score.group.init_uniform(rng);
  core.group.init_uniform(rng);
  classifier.group.init_uniform(rng);
}

void Model::zero_grads() {
  for (ParamGroup* g : groups()) g->zero_grads();
}

ScoreCache score_forward(const ScoreNetParams& p, const Vector& h_prev,
                         const Vector& x_v, Matrix neighbor_inputs) {
  const ModelDims& d = p.dims();
  if (h_prev.size() != d.hidden || x_v.size() != d.node_dim ||
      neighbor_inputs.rows() != d.edge_dim + d.node_dim) {
    throw DimensionError("score network input dimension mismatch");
  }
  const Matrix& w1 = p.group[ScoreNetParams::kW1].value;
  ScoreCache c;
  c.h_prev = h_prev;
  c.x_v = x_v;
  c.neighbor_inputs = std::move(neighbor_inputs);

  const Vector shared = w1.leftCols(d.hidden) * h_prev +
                        w1.middleCols(d.hidden, d.node_dim) * x_v +
                        p.group[ScoreNetParams::kB1].value.col(0);
  Matrix pre = w1.rightCols(d.edge_dim + d.node_dim) * c.neighbor_inputs;
  pre.colwise() += shared;
  c.hidden = pre.array().tanh();
  const Eigen::RowVectorXd out =
      p.group[ScoreNetParams::kW2].value * c.hidden;
  const double b2 = p.group[ScoreNetParams::kB2].value(0, 0);
  c.phi.resize(out.size());
  for (Eigen::Index k = 0; k < out.size(); ++k) c.phi(k) = sigmoid(out(k) + b2);
  return c;
}

Vector score_backward(ScoreNetParams& p, const ScoreCache& c,
                      const Vector& dphi) {
  const ModelDims& d = p.dims();
  ParamGroup& g = p.group;
  const Eigen::RowVectorXd dout =
      (dphi.array() * c.phi.array() * (1.0 - c.phi.array())).matrix().transpose();
  g[ScoreNetParams::kW2].grad.noalias() += dout * c.hidden.transpose();
  g[ScoreNetParams::kB2].grad(0, 0) += dout.sum();

  const Matrix dpre =
      ((g[ScoreNetParams::kW2].value.transpose() * dout).array() *
       (1.0 - c.hidden.array().square()))
          .matrix();
  Param& w1 = g[ScoreNetParams::kW1];
  w1.grad.rightCols(d.edge_dim + d.node_dim).noalias() +=
      dpre * c.neighbor_inputs.transpose();
  const Vector dshared = dpre.rowwise().sum();
  w1.grad.leftCols(d.hidden).noalias() += dshared * c.h_prev.transpose();
  w1.grad.middleCols(d.hidden, d.node_dim).noalias() +=
      dshared * c.x_v.transpose();
  g[ScoreNetParams::kB1].grad.col(0) += dshared;
  return w1.value.leftCols(d.hidden).transpose() * dshared;
}

Vector score_neighbors(const ScoreNetParams& p, const Vector& h_prev,
                       const Vector& x_v,
                       std::span<const NeighborObservation> neighborhood) {
  const ModelDims& d = p.dims();
  Matrix inputs(d.edge_dim + d.node_dim,
                static_cast<Eigen::Index>(neighborhood.size()));
  for (std::size_t k = 0; k < neighborhood.size(); ++k) {
    const auto& obs = neighborhood[k];
    if (obs.x_e.size() != d.edge_dim || obs.x_n.size() != d.node_dim) {
      throw DimensionError("neighbor observation dimension mismatch");
    }
    const auto col = static_cast<Eigen::Index>(k);
    inputs.col(col).head(d.edge_dim) = obs.x_e;
    inputs.col(col).tail(d.node_dim) = obs.x_n;
  }
  return score_forward(p, h_prev, x_v, std::move(inputs)).phi;
}

Vector action_probabilities(const Vector& phi) {
  if (phi.size() == 0) throw DimensionError("empty neighborhood");
  const double total = phi.sum();
  if (!(total > 0.0) || !std::isfinite(total)) {
    return Vector::Constant(phi.size(), 1.0 / static_cast<double>(phi.size()));
  }
  return phi / total;
}

Sample sample_next(const Vector& phi, Rng& rng) {
  if (phi.size() == 0) throw DimensionError("empty neighborhood");
  const double total = phi.sum();
  Sample s;
  const auto n = static_cast<std::size_t>(phi.size());
  if (!(total > 0.0) || !std::isfinite(total)) {
    s.index = static_cast<std::size_t>(rng.below(n));
    s.logprob = -std::log(static_cast<double>(n));
    s.uniform_fallback = true;
    return s;
  }
  const double u = rng.uniform() * total;
  double acc = 0.0;
  s.index = n - 1;
  for (std::size_t i = 0; i < n; ++i) {
    acc += phi(static_cast<Eigen::Index>(i));
    if (u < acc) {
      s.index = i;
      break;
    }
  }
  // Guard against the draw landing on a zero-score tail through rounding.
  while (phi(static_cast<Eigen::Index>(s.index)) <= 0.0 && s.index > 0) --s.index;
  while (phi(static_cast<Eigen::Index>(s.index)) <= 0.0) ++s.index;
  s.logprob = std::log(phi(static_cast<Eigen::Index>(s.index))) - std::log(total);
  return s;
}

Vector aggregate_relevant(const Vector& phi,
                          const Eigen::Ref<const Matrix>& neighbor_attrs) {
  if (phi.size() != neighbor_attrs.cols()) {
    throw DimensionError("score count != neighbor count");
  }
  Vector c = Vector::Zero(neighbor_attrs.rows());
  for (Eigen::Index k = 0; k < phi.size(); ++k) {
    if (phi(k) - 0.5 > 0.0) c += neighbor_attrs.col(k);
  }
  return c;
}

ClassifierCache classifier_forward(const ClassifierParams& p, const Vector& h) {
  const ParamGroup& g = p.group;
  ClassifierCache c;
  c.h = h;
  c.hidden = tanh(Vector(g[ClassifierParams::kW1].value * h +
                         g[ClassifierParams::kB1].value.col(0)));
  c.logits = g[ClassifierParams::kW2].value * c.hidden +
             g[ClassifierParams::kB2].value.col(0);
  c.probs = softmax(c.logits);
  return c;
}

Vector classifier_backward(ClassifierParams& p, const ClassifierCache& c,
                           const Vector& dlogits) {
  ParamGroup& g = p.group;
  const Vector dhidden = linear_backward(g[ClassifierParams::kW2],
                                         g[ClassifierParams::kB2], c.hidden,
                                         dlogits);
  const Vector dpre = dhidden.cwiseProduct(tanh_grad_from_output(c.hidden));
  return linear_backward(g[ClassifierParams::kW1], g[ClassifierParams::kB1],
                         c.h, dpre);
}

Vector classify(const ClassifierParams& p, const Vector& h_T) {
  if (!h_T.allFinite()) throw NumericError("non-finite history vector");
  return classifier_forward(p, h_T).probs;
}

std::int64_t WorkspaceCounter::peak() const {
  std::int64_t best = 0;
  for (auto v : per_step) best = std::max(best, v);
  return best;
}

namespace {

template <typename Choose>
Trajectory run_walk(const GraphView& view, NodeId start, int T,
                    const Model& model, Choose&& choose,
                    WorkspaceCounter* counter) {
  if (T < 2) throw UsageError("walk length T must be >= 2");
  if (start < 0 || start >= view.num_nodes()) {
    throw RangeError("start node " + std::to_string(start) + " out of range");
  }
  const ModelDims& d = model.dims;
  if (view.node_attr_dim() != d.node_dim || view.edge_attr_dim() != d.edge_dim) {
    throw DimensionError("graph attribute dimensions do not match the model");
  }

  Trajectory traj;
  traj.model = &model;
  const auto groups = model.groups();
  for (std::size_t i = 0; i < groups.size(); ++i) {
    traj.versions[i] = groups[i]->version();
  }
  traj.steps.reserve(static_cast<std::size_t>(T));

  NodeId current = start;
  Vector h = Vector::Zero(d.hidden);
  for (int t = 1; t <= T; ++t) {
    const auto nbrs = view.neighbors(current);
    const auto deg = static_cast<Eigen::Index>(nbrs.size());
    Matrix inputs(d.edge_dim + d.node_dim, deg);
    for (Eigen::Index k = 0; k < deg; ++k) {
      inputs.col(k).head(d.edge_dim) = view.edge_attr(nbrs[k].edge).transpose();
      inputs.col(k).tail(d.node_dim) = view.node_attr(nbrs[k].node).transpose();
    }

    WalkStep step;
    step.node = current;
    const Vector x_v = view.node_attr(current).transpose();
    step.score = score_forward(model.score, h, x_v, std::move(inputs));
    const Vector& phi = step.score.phi;

    if (t < T) {
      const Sample s = choose(t, phi);
      step.chosen = static_cast<std::int64_t>(s.index);
      step.logprob = s.logprob;
      step.uniform_fallback = s.uniform_fallback;
      if (s.uniform_fallback) ++traj.uniform_fallbacks;
    }

    const Vector c_n = aggregate_relevant(
        phi, step.score.neighbor_inputs.bottomRows(d.node_dim));
    Vector x_cat(2 * d.node_dim);
    x_cat << x_v, c_n;
    step.gru = gru_forward(model.core, x_cat, h);
    h = step.gru.h;

    if (counter) {
      // shared pre-activation, x_v, c_n, x_cat plus everything cached
      counter->per_step.push_back(d.hidden + x_v.size() + c_n.size() +
                                  x_cat.size() + values_in(step.score) +
                                  values_in(step.gru));
    }

    traj.nodes.push_back(current);
    traj.score_records.push_back(phi);
    if (t < T) {
      traj.chosen_logprobs.push_back(step.logprob);
      traj.chosen_scores.push_back(phi(step.chosen));
      current = nbrs[static_cast<std::size_t>(step.chosen)].node;
    }
    traj.steps.push_back(std::move(step));
  }
  traj.h_T = h;
  return traj;
}

}  // namespace

Trajectory walk(const GraphView& view, NodeId start, int T, const Model& model,
                Rng& rng, WorkspaceCounter* counter) {
  return run_walk(
      view, start, T, model,
      [&rng](int, const Vector& phi) { return sample_next(phi, rng); },
      counter);
}

Trajectory replay_walk(const GraphView& view, NodeId start, const Model& model,
                       std::span<const std::int64_t> choices) {
  const int T = static_cast<int>(choices.size()) + 1;
  return run_walk(
      view, start, T, model,
      [&](int t, const Vector& phi) {
        const std::int64_t i = choices[static_cast<std::size_t>(t - 1)];
        if (i < 0 || i >= phi.size()) {
          throw RangeError("replayed choice outside the neighborhood");
        }
        Sample s;
        s.index = static_cast<std::size_t>(i);
        s.logprob = std::log(phi(i)) - std::log(phi.sum());
        return s;
      },
      nullptr);
}

ClassifierCache classify_trajectory(const Model& model, Trajectory& traj) {
  if (!traj.h_T.allFinite()) throw NumericError("non-finite history vector");
  ClassifierCache c = classifier_forward(model.classifier, traj.h_T);
  traj.terminal_probs = c.probs;
  return c;
}

void require_current(const Model& model, const Trajectory& traj) {
  if (traj.model != &model) {
    throw ContractError("trajectory was produced by a different model");
  }
  const auto groups = model.groups();
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (traj.versions[i] != groups[i]->version()) {
      throw ContractError("trajectory is stale: parameters changed since walk");
    }
  }
  if (traj.steps.size() != traj.nodes.size()) {
    throw ContractError("trajectory has no backpropagation record");
  }
}

ClassId argmax(const Vector& v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (v(i) > v(best)) best = i;
  }
  return static_cast<ClassId>(best);
}

std::uint64_t predict_walk_seed(std::uint64_t seed, NodeId start,
                                std::int64_t walk_index) {
  return derive_seed(seed, {kPredictStream, static_cast<std::uint64_t>(start),
                            static_cast<std::uint64_t>(walk_index)});
}

Prediction predict(const GraphView& view, NodeId start, const Model& model,
                   int m_test, int T, std::uint64_t seed, int threads) {
  if (m_test < 1) throw UsageError("M_test must be >= 1");
  std::vector<Vector> probs(static_cast<std::size_t>(m_test));
  parallel_for(m_test, threads, [&](std::int64_t i) {
    Rng rng(predict_walk_seed(seed, start, i));
    Trajectory traj = walk(view, start, T, model, rng);
    probs[static_cast<std::size_t>(i)] = classify(model.classifier, traj.h_T);
  });
  return ensemble_prediction(probs);
}

Prediction ensemble_prediction(std::span<const Vector> walk_probs) {
  if (walk_probs.empty()) throw UsageError("no walks to ensemble");
  Prediction out;
  out.mean_probs = Vector::Zero(walk_probs.front().size());
  for (const auto& p : walk_probs) {
    if (p.size() != out.mean_probs.size()) {
      throw DimensionError("walk class distributions differ in length");
    }
    out.mean_probs += p;
  }
  out.mean_probs /= static_cast<double>(walk_probs.size());
  out.label = argmax(out.mean_probs);
  return out;
}

}  // namespace raw
