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

// Differentiable kernels with hand-written backward passes. Every backward
// adds into gradient accumulators; nothing is overwritten until zero_grads.

#ifndef RAW_NN_HPP_
#define RAW_NN_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "raw/rng.hpp"

namespace raw {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct Param {
  std::string name;
  Matrix value;
  Matrix grad;
  Matrix adam_m;
  Matrix adam_v;
  bool is_bias = false;
};

class ParamGroup {
 public:
  explicit ParamGroup(std::string name = {}) : name_(std::move(name)) {}

  std::size_t add_weight(std::string name, Eigen::Index rows,
                         Eigen::Index cols);
  std::size_t add_bias(std::string name, Eigen::Index rows);

  const std::string& name() const { return name_; }
  std::size_t size() const { return params_.size(); }
  Param& operator[](std::size_t i) { return params_[i]; }
  const Param& operator[](std::size_t i) const { return params_[i]; }
  auto begin() { return params_.begin(); }
  auto end() { return params_.end(); }
  auto begin() const { return params_.begin(); }
  auto end() const { return params_.end(); }

  void zero_grads();
  // Scaled-uniform init in +-sqrt(6 / (fan_in + fan_out)); biases zero.
  void init_uniform(Rng& rng);
  void set_zero();

  std::int64_t num_values() const;
  double squared_norm() const;
  bool grads_all_zero() const;

  // Incremented whenever values change; caches remember the version they
  // were computed against.
  std::uint64_t version() const { return version_; }
  void bump_version() { ++version_; }

  std::uint64_t adam_steps() const { return adam_steps_; }

 private:
  friend void adam_step(ParamGroup&, double, double, double, double);

  std::string name_;
  std::vector<Param> params_;
  std::uint64_t version_ = 0;
  std::uint64_t adam_steps_ = 0;
};

// ---- elementwise ----

Vector sigmoid(const Vector& x);
// Derivative expressed through the sigmoid output y.
Vector sigmoid_grad_from_output(const Vector& y);
Vector tanh(const Vector& x);
Vector tanh_grad_from_output(const Vector& y);

inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// ---- dense linear map y = W x + b ----

Vector linear_forward(const Param& weight, const Param& bias, const Vector& x);
// Accumulates dW += dy x^T, db += dy and returns dx = W^T dy.
Vector linear_backward(Param& weight, Param& bias, const Vector& x,
                       const Vector& dy);

// ---- softmax cross-entropy ----

Vector softmax(const Vector& logits);

struct SoftmaxCrossEntropy {
  double loss;
  Vector probs;
  Vector grad;  // dL/dlogits = probs - onehot(label)
};

SoftmaxCrossEntropy softmax_cross_entropy(const Vector& logits, int label);

// ---- GRU cell ----
//
//   z  = sigmoid(W_z x + U_z h + b_z)
//   r  = sigmoid(W_r x + U_r h + b_r)
//   h' = tanh(W x + r o (U h) + b)
//   h_t = z o h' + (1 - z) o h

class GruParams {
 public:
  enum Index : std::size_t { kWz, kUz, kBz, kWr, kUr, kBr, kW, kU, kB };

  GruParams(Eigen::Index input_dim, Eigen::Index hidden_dim);

  Eigen::Index input_dim() const { return input_dim_; }
  Eigen::Index hidden_dim() const { return hidden_dim_; }

  ParamGroup group{"core"};

  const Matrix& value(Index i) const { return group[i].value; }

 private:
  Eigen::Index input_dim_;
  Eigen::Index hidden_dim_;
};

struct GruCache {
  Vector x;
  Vector h_prev;
  Vector z;
  Vector r;
  Vector uh;
  Vector cand;
  Vector h;
  const GruParams* owner = nullptr;
  std::uint64_t version = 0;
};

GruCache gru_forward(const GruParams& p, const Vector& x, const Vector& h_prev);

struct GruInputGrads {
  Vector dx;
  Vector dh_prev;
};

// Throws ContractError when `cache` was produced by other parameters or
// before the last update of `p`.
GruInputGrads gru_backward(GruParams& p, const GruCache& cache,
                           const Vector& dh);

// ---- optimizer ----

struct AdamConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// One bias-corrected adaptive-moment update, then zero_grads and a version
// bump. Throws NumericError on a non-finite gradient (values untouched).
void adam_step(ParamGroup& p, double lr, double beta1 = 0.9,
               double beta2 = 0.999, double eps = 1e-8);

inline void adam_step(ParamGroup& p, const AdamConfig& c) {
  adam_step(p, c.lr, c.beta1, c.beta2, c.eps);
}

}  // namespace raw

#endif  // RAW_NN_HPP_
