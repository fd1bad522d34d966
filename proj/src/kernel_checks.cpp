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

#include "raw/kernel_checks.hpp"

#include <array>
#include <cmath>
#include <functional>

#include "raw/agent.hpp"
#include "raw/graph.hpp"
#include "raw/rng.hpp"
#include "raw/trainer.hpp"

namespace raw {

namespace {

Vector random_vector(Eigen::Index n, Rng& rng, double scale = 1.0) {
  Vector v(n);
  for (auto& x : v) x = rng.uniform(-scale, scale);
  return v;
}

void randomize(ParamGroup& g, Rng& rng, double scale = 1.0) {
  for (Param& p : g) {
    for (Eigen::Index i = 0; i < p.value.size(); ++i) {
      p.value.data()[i] = rng.uniform(-scale, scale);
    }
  }
  g.bump_version();
}

int random_dim(Rng& rng, int lo, int hi) {
  return lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
}

GradCheckResult check(const std::function<double()>& loss,
                      const std::function<void()>& backward,
                      std::vector<ParamGroup*> groups, double eps) {
  return grad_check(loss, backward, groups, eps);
}

GradCheckResult check_linear(int max_dim, std::uint64_t seed, double eps) {
  Rng rng(seed);
  const int in = random_dim(rng, 1, max_dim);
  const int out = random_dim(rng, 1, max_dim);
  ParamGroup layer("linear");
  layer.add_weight("W", out, in);
  layer.add_bias("b", out);
  randomize(layer, rng);
  ParamGroup inputs("inputs");
  inputs.add_weight("x", in, 1);
  randomize(inputs, rng);
  const Vector w = random_vector(out, rng);
  auto x = [&] { return Vector(inputs[0].value.col(0)); };
  return check(
      [&] { return w.dot(linear_forward(layer[0], layer[1], x())); },
      [&] { inputs[0].grad.col(0) += linear_backward(layer[0], layer[1], x(), w); },
      {&layer, &inputs}, eps);
}

GradCheckResult check_elementwise(bool use_tanh, int max_dim,
                                  std::uint64_t seed, double eps) {
  Rng rng(seed);
  const int n = random_dim(rng, 1, max_dim);
  ParamGroup inputs("inputs");
  inputs.add_weight("x", n, 1);
  randomize(inputs, rng, 3.0);
  const Vector w = random_vector(n, rng);
  auto forward = [&] {
    const Vector x = inputs[0].value.col(0);
    return use_tanh ? tanh(x) : sigmoid(x);
  };
  return check([&] { return w.dot(forward()); },
               [&] {
                 const Vector y = forward();
                 const Vector dy = use_tanh ? tanh_grad_from_output(y)
                                            : sigmoid_grad_from_output(y);
                 inputs[0].grad.col(0) += w.cwiseProduct(dy);
               },
               {&inputs}, eps);
}

GradCheckResult check_softmax(int max_dim, std::uint64_t seed, double eps) {
  Rng rng(seed);
  const int k = random_dim(rng, 2, std::max(2, max_dim));
  const int label = static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
  ParamGroup inputs("inputs");
  inputs.add_weight("logits", k, 1);
  randomize(inputs, rng, 3.0);
  auto logits = [&] { return Vector(inputs[0].value.col(0)); };
  return check([&] { return softmax_cross_entropy(logits(), label).loss; },
               [&] {
                 inputs[0].grad.col(0) +=
                     softmax_cross_entropy(logits(), label).grad;
               },
               {&inputs}, eps);
}

ModelDims random_dims(Rng& rng, int max_dim) {
  ModelDims d;
  d.node_dim = random_dim(rng, 1, std::max(1, max_dim / 2));
  d.edge_dim = random_dim(rng, 1, std::max(1, max_dim / 2));
  d.hidden = random_dim(rng, 1, max_dim);
  d.num_classes = random_dim(rng, 2, std::max(2, max_dim));
  return d;
}

GradCheckResult check_score_net(int max_dim, std::uint64_t seed, double eps) {
  Rng rng(seed);
  const ModelDims d = random_dims(rng, max_dim);
  ScoreNetParams p(d);
  randomize(p.group, rng);
  const int deg = random_dim(rng, 1, 5);
  const Vector x_v = random_vector(d.node_dim, rng);
  Matrix nbr(d.edge_dim + d.node_dim, deg);
  for (Eigen::Index i = 0; i < nbr.size(); ++i) nbr.data()[i] = rng.uniform(-1, 1);
  ParamGroup inputs("inputs");
  inputs.add_weight("h_prev", d.hidden, 1);
  randomize(inputs, rng);
  const Vector w = random_vector(deg, rng);
  auto forward = [&] {
    return score_forward(p, inputs[0].value.col(0), x_v, nbr);
  };
  return check([&] { return w.dot(forward().phi); },
               [&] { inputs[0].grad.col(0) += score_backward(p, forward(), w); },
               {&p.group, &inputs}, eps);
}

GradCheckResult check_classifier(int max_dim, std::uint64_t seed, double eps) {
  Rng rng(seed);
  const ModelDims d = random_dims(rng, max_dim);
  ClassifierParams p(d);
  randomize(p.group, rng);
  const int label =
      static_cast<int>(rng.below(static_cast<std::uint64_t>(d.num_classes)));
  ParamGroup inputs("inputs");
  inputs.add_weight("h", d.hidden, 1);
  randomize(inputs, rng);
  auto forward = [&] { return classifier_forward(p, inputs[0].value.col(0)); };
  return check(
      [&] { return softmax_cross_entropy(forward().logits, label).loss; },
      [&] {
        const ClassifierCache c = forward();
        inputs[0].grad.col(0) += classifier_backward(
            p, c, softmax_cross_entropy(c.logits, label).grad);
      },
      {&p.group, &inputs}, eps);
}

AttributedGraph random_small_graph(int num_nodes, Eigen::Index node_dim,
                                   Eigen::Index edge_dim, Rng& rng) {
  GraphInput input;
  input.num_nodes = num_nodes;
  input.node_attrs.resize(num_nodes, node_dim);
  for (Eigen::Index i = 0; i < input.node_attrs.size(); ++i) {
    input.node_attrs.data()[i] = rng.uniform(-1, 1);
  }
  input.edge_attr_dim = edge_dim;
  for (int u = 0; u < num_nodes; ++u) {
    for (int v = u + 1; v < num_nodes; ++v) {
      if (v == u + 1 || rng.bernoulli(0.4)) {
        input.edges.emplace_back(u, v);
        input.edge_attr_rows.emplace_back(random_vector(edge_dim, rng));
      }
    }
  }
  input.num_classes = 2;
  input.labels.assign(num_nodes, 0);
  return AttributedGraph::build(std::move(input)).normalized();
}

}  // namespace

GradCheckResult check_gru_instance(int d, std::uint64_t seed, bool corrupt) {
  Rng rng(seed);
  const int in = random_dim(rng, 1, 8);
  GruParams p(in, d);
  randomize(p.group, rng);
  ParamGroup inputs("inputs");
  inputs.add_weight("x", in, 1);
  inputs.add_weight("h_prev", d, 1);
  randomize(inputs, rng);
  const Vector w = random_vector(d, rng);
  auto forward = [&] {
    return gru_forward(p, inputs[0].value.col(0), inputs[1].value.col(0));
  };
  return grad_check(
      [&] { return w.dot(forward().h); },
      [&] {
        const GruInputGrads g = gru_backward(p, forward(), w);
        inputs[0].grad.col(0) += g.dx;
        inputs[1].grad.col(0) += g.dh_prev;
        if (corrupt) p.group[GruParams::kU].grad *= 1.1;
      },
      std::vector<ParamGroup*>{&p.group, &inputs});
}

GradCheckResult check_full_model_instance(int num_nodes, int d, int T,
                                          std::uint64_t seed, bool corrupt) {
  Rng rng(seed);
  ModelDims dims;
  dims.node_dim = random_dim(rng, 1, 4);
  dims.edge_dim = random_dim(rng, 1, 4);
  dims.hidden = d;
  dims.num_classes = random_dim(rng, 2, 4);
  const AttributedGraph g =
      random_small_graph(num_nodes, dims.node_dim, dims.edge_dim, rng);
  const GraphView view(g);

  Model model(dims);
  for (ParamGroup* group : model.groups()) randomize(*group, rng);

  const NodeId start = static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(num_nodes)));
  const ClassId truth =
      static_cast<ClassId>(rng.below(static_cast<std::uint64_t>(dims.num_classes)));
  const double reward = rng.bernoulli(0.5) ? 1.0 : -1.0;
  TrainConfig cfg;
  cfg.T = T;
  cfg.gamma = 0.9;
  cfg.l2 = 0.01;

  Rng walk_rng(derive_seed(seed, {7}));
  const Trajectory sampled = walk(view, start, T, model, walk_rng);
  std::vector<std::int64_t> choices;
  for (std::size_t t = 0; t + 1 < sampled.steps.size(); ++t) {
    choices.push_back(sampled.steps[t].chosen);
  }

  auto loss = [&] {
    const Trajectory tr = replay_walk(view, start, model, choices);
    const auto ce = softmax_cross_entropy(
        classifier_forward(model.classifier, tr.h_T).logits, truth);
    double surrogate = 0.0;
    for (std::size_t t = 1; t < static_cast<std::size_t>(T); ++t) {
      surrogate += std::pow(cfg.gamma, static_cast<double>(T - static_cast<int>(t))) *
                   tr.chosen_logprobs[t - 1];
    }
    return ce.loss + cfg.l2 * model.classifier.group.squared_norm() -
           reward * surrogate;
  };
  auto backward = [&] {
    const Trajectory tr = replay_walk(view, start, model, choices);
    accumulate_episode(tr, truth, reward, cfg, model, 1.0);
    if (corrupt) model.core.group[GruParams::kU].grad *= 1.1;
  };
  const auto groups = model.groups();
  return grad_check(loss, backward,
                    std::vector<ParamGroup*>(groups.begin(), groups.end()));
}

std::vector<KernelReport> run_kernel_checks(const KernelCheckOptions& opts) {
  using Check = std::function<GradCheckResult(std::uint64_t)>;
  const int max_dim = opts.max_dim;
  const double eps = opts.eps;
  const std::vector<std::pair<std::string, Check>> kernels = {
      {"linear", [&](std::uint64_t s) { return check_linear(max_dim, s, eps); }},
      {"sigmoid",
       [&](std::uint64_t s) { return check_elementwise(false, max_dim, s, eps); }},
      {"tanh",
       [&](std::uint64_t s) { return check_elementwise(true, max_dim, s, eps); }},
      {"softmax_cross_entropy",
       [&](std::uint64_t s) { return check_softmax(max_dim, s, eps); }},
      {"gru_cell",
       [&](std::uint64_t s) {
         Rng pick(s);
         return check_gru_instance(random_dim(pick, 1, max_dim),
                                   derive_seed(s, {1}), opts.corrupt_gru_backward);
       }},
      {"score_network",
       [&](std::uint64_t s) { return check_score_net(max_dim, s, eps); }},
      {"classifier",
       [&](std::uint64_t s) { return check_classifier(max_dim, s, eps); }},
      {"full_model_frozen_actions",
       [&](std::uint64_t s) {
         Rng pick(s);
         const int n = random_dim(pick, 3, 6);
         const int d = random_dim(pick, 1, max_dim);
         const int T = random_dim(pick, 2, 4);
         return check_full_model_instance(n, d, T, derive_seed(s, {2}),
                                          opts.corrupt_gru_backward);
       }},
  };

  std::vector<KernelReport> reports;
  for (std::size_t k = 0; k < kernels.size(); ++k) {
    KernelReport rep;
    rep.kernel = kernels[k].first;
    for (int i = 0; i < opts.instances; ++i) {
      const auto res = kernels[k].second(
          derive_seed(opts.seed, {k, static_cast<std::uint64_t>(i)}));
      ++rep.instances;
      if (res.max_rel_error >= rep.max_rel_error) {
        rep.max_rel_error = res.max_rel_error;
        rep.worst = res.worst;
      }
    }
    rep.passed = rep.max_rel_error < opts.tolerance;
    reports.push_back(rep);
  }
  return reports;
}

}  // namespace raw
