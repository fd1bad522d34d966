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

#include "raw/nn.hpp"

#include <cmath>
#include <string>

#include "raw/error.hpp"

namespace raw {

namespace {

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) throw NumericError(std::string("non-finite ") + what);
}

void require_size(Eigen::Index got, Eigen::Index want, const char* what) {
  if (got != want) {
    throw DimensionError(std::string(what) + ": expected dimension " +
                         std::to_string(want) + ", got " +
                         std::to_string(got));
  }
}

}  // namespace

std::size_t ParamGroup::add_weight(std::string name, Eigen::Index rows,
                                   Eigen::Index cols) {
  Param p;
  p.name = std::move(name);
  p.value = Matrix::Zero(rows, cols);
  p.grad = Matrix::Zero(rows, cols);
  p.adam_m = Matrix::Zero(rows, cols);
  p.adam_v = Matrix::Zero(rows, cols);
  params_.push_back(std::move(p));
  return params_.size() - 1;
}

std::size_t ParamGroup::add_bias(std::string name, Eigen::Index rows) {
  const std::size_t i = add_weight(std::move(name), rows, 1);
  params_[i].is_bias = true;
  return i;
}

void ParamGroup::zero_grads() {
  for (auto& p : params_) p.grad.setZero();
}

void ParamGroup::init_uniform(Rng& rng) {
  for (auto& p : params_) {
    if (p.is_bias) {
      p.value.setZero();
      continue;
    }
    const double limit =
        std::sqrt(6.0 / static_cast<double>(p.value.rows() + p.value.cols()));
    // Column-major fill order is part of the checkpoint reproducibility.
    for (Eigen::Index i = 0; i < p.value.size(); ++i) {
      p.value.data()[i] = rng.uniform(-limit, limit);
    }
  }
  bump_version();
}

void ParamGroup::set_zero() {
  for (auto& p : params_) p.value.setZero();
  bump_version();
}

std::int64_t ParamGroup::num_values() const {
  std::int64_t n = 0;
  for (const auto& p : params_) n += p.value.size();
  return n;
}

double ParamGroup::squared_norm() const {
  double s = 0.0;
  for (const auto& p : params_) s += p.value.squaredNorm();
  return s;
}

bool ParamGroup::grads_all_zero() const {
  for (const auto& p : params_) {
    if ((p.grad.array() != 0.0).any()) return false;
  }
  return true;
}

Vector sigmoid(const Vector& x) {
  return x.unaryExpr([](double v) { return sigmoid(v); });
}

Vector sigmoid_grad_from_output(const Vector& y) {
  return y.array() * (1.0 - y.array());
}

Vector tanh(const Vector& x) {
  return x.unaryExpr([](double v) { return std::tanh(v); });
}

Vector tanh_grad_from_output(const Vector& y) {
  return 1.0 - y.array().square();
}

Vector linear_forward(const Param& weight, const Param& bias, const Vector& x) {
  require_size(x.size(), weight.value.cols(), "linear input");
  return weight.value * x + bias.value.col(0);
}

Vector linear_backward(Param& weight, Param& bias, const Vector& x,
                       const Vector& dy) {
  require_size(dy.size(), weight.value.rows(), "linear output gradient");
  weight.grad.noalias() += dy * x.transpose();
  bias.grad.col(0) += dy;
  return weight.value.transpose() * dy;
}

Vector softmax(const Vector& logits) {
  const double top = logits.maxCoeff();
  Vector e = (logits.array() - top).exp();
  return e / e.sum();
}

SoftmaxCrossEntropy softmax_cross_entropy(const Vector& logits, int label) {
  if (logits.size() < 2) throw DimensionError("softmax needs >= 2 classes");
  if (label < 0 || label >= logits.size()) {
    throw RangeError("label " + std::to_string(label) + " outside [0, " +
                     std::to_string(logits.size()) + ")");
  }
  const double top = logits.maxCoeff();
  const Vector shifted = logits.array() - top;
  const double log_sum = std::log(shifted.array().exp().sum());
  SoftmaxCrossEntropy out;
  out.loss = log_sum - shifted(label);
  out.probs = (shifted.array() - log_sum).exp();
  out.grad = out.probs;
  out.grad(label) -= 1.0;
  return out;
}

GruParams::GruParams(Eigen::Index input_dim, Eigen::Index hidden_dim)
    : input_dim_(input_dim), hidden_dim_(hidden_dim) {
  group.add_weight("W_z", hidden_dim, input_dim);
  group.add_weight("U_z", hidden_dim, hidden_dim);
  group.add_bias("b_z", hidden_dim);
  group.add_weight("W_r", hidden_dim, input_dim);
  group.add_weight("U_r", hidden_dim, hidden_dim);
  group.add_bias("b_r", hidden_dim);
  group.add_weight("W", hidden_dim, input_dim);
  group.add_weight("U", hidden_dim, hidden_dim);
  group.add_bias("b", hidden_dim);
}

GruCache gru_forward(const GruParams& p, const Vector& x, const Vector& h_prev) {
  require_size(x.size(), p.input_dim(), "GRU input");
  require_size(h_prev.size(), p.hidden_dim(), "GRU state");
  require_finite(x, "GRU input");
  require_finite(h_prev, "GRU state");
  using I = GruParams;

  GruCache c;
  c.x = x;
  c.h_prev = h_prev;
  c.owner = &p;
  c.version = p.group.version();
  c.z = sigmoid(Vector(p.value(I::kWz) * x + p.value(I::kUz) * h_prev +
                       p.value(I::kBz).col(0)));
  c.r = sigmoid(Vector(p.value(I::kWr) * x + p.value(I::kUr) * h_prev +
                       p.value(I::kBr).col(0)));
  c.uh = p.value(I::kU) * h_prev;
  c.cand = tanh(Vector(p.value(I::kW) * x + c.r.cwiseProduct(c.uh) +
                       p.value(I::kB).col(0)));
  c.h = c.z.cwiseProduct(c.cand) +
        (1.0 - c.z.array()).matrix().cwiseProduct(h_prev);
  return c;
}

GruInputGrads gru_backward(GruParams& p, const GruCache& c, const Vector& dh) {
  if (c.owner != &p) {
    throw ContractError("GRU cache belongs to different parameters");
  }
  if (c.version != p.group.version()) {
    throw ContractError("stale GRU cache: parameters changed since forward");
  }
  require_size(dh.size(), p.hidden_dim(), "GRU output gradient");
  using I = GruParams;
  ParamGroup& g = p.group;

  GruInputGrads out;
  const Vector dz = dh.cwiseProduct(c.cand - c.h_prev);
  const Vector dcand = dh.cwiseProduct(c.z);
  out.dh_prev = dh.cwiseProduct((1.0 - c.z.array()).matrix());

  const Vector da_cand = dcand.cwiseProduct(tanh_grad_from_output(c.cand));
  g[I::kW].grad.noalias() += da_cand * c.x.transpose();
  g[I::kB].grad.col(0) += da_cand;
  out.dx = g[I::kW].value.transpose() * da_cand;
  const Vector dr = da_cand.cwiseProduct(c.uh);
  const Vector duh = da_cand.cwiseProduct(c.r);
  g[I::kU].grad.noalias() += duh * c.h_prev.transpose();
  out.dh_prev.noalias() += g[I::kU].value.transpose() * duh;

  const Vector da_r = dr.cwiseProduct(sigmoid_grad_from_output(c.r));
  g[I::kWr].grad.noalias() += da_r * c.x.transpose();
  g[I::kUr].grad.noalias() += da_r * c.h_prev.transpose();
  g[I::kBr].grad.col(0) += da_r;
  out.dx.noalias() += g[I::kWr].value.transpose() * da_r;
  out.dh_prev.noalias() += g[I::kUr].value.transpose() * da_r;

  const Vector da_z = dz.cwiseProduct(sigmoid_grad_from_output(c.z));
  g[I::kWz].grad.noalias() += da_z * c.x.transpose();
  g[I::kUz].grad.noalias() += da_z * c.h_prev.transpose();
  g[I::kBz].grad.col(0) += da_z;
  out.dx.noalias() += g[I::kWz].value.transpose() * da_z;
  out.dh_prev.noalias() += g[I::kUz].value.transpose() * da_z;
  return out;
}

void adam_step(ParamGroup& group, double lr, double beta1, double beta2,
               double eps) {
  for (const auto& p : group) {
    if (!p.grad.allFinite()) {
      throw NumericError("non-finite gradient in " + group.name() + "/" +
                         p.name);
    }
  }
  ++group.adam_steps_;
  const double t = static_cast<double>(group.adam_steps_);
  const double correction1 = 1.0 - std::pow(beta1, t);
  const double correction2 = 1.0 - std::pow(beta2, t);
  for (auto& p : group) {
    p.adam_m = beta1 * p.adam_m + (1.0 - beta1) * p.grad;
    p.adam_v = beta2 * p.adam_v + (1.0 - beta2) * p.grad.cwiseProduct(p.grad);
    p.value.array() -= lr * (p.adam_m.array() / correction1) /
                       ((p.adam_v.array() / correction2).sqrt() + eps);
  }
  group.zero_grads();
  group.bump_version();
}

}  // namespace raw
