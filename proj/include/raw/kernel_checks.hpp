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

// Finite-difference checks of every backward pass, over seeded random
// instances of small dimension.

#ifndef RAW_KERNEL_CHECKS_HPP_
#define RAW_KERNEL_CHECKS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "raw/gradcheck.hpp"

namespace raw {

struct KernelCheckOptions {
  int instances = 100;
  int max_dim = 8;
  double eps = 1e-5;
  double tolerance = 1e-6;
  std::uint64_t seed = 2024;
  // Test fixture: scales the GRU recurrent-weight gradient by 1.1 after the
  // analytic backward, which the checks must detect.
  bool corrupt_gru_backward = false;
};

struct KernelReport {
  std::string kernel;
  double max_rel_error = 0.0;
  int instances = 0;
  std::string worst;
  bool passed = false;
};

std::vector<KernelReport> run_kernel_checks(const KernelCheckOptions& opts = {});

// Single random GRU-cell instance (parameters and inputs) at hidden size d.
GradCheckResult check_gru_instance(int d, std::uint64_t seed,
                                   bool corrupt = false);

// Frozen-action check of the full model on a small random graph: classifier
// cross-entropy + L2 + discounted REINFORCE surrogate, all parameter groups.
GradCheckResult check_full_model_instance(int num_nodes, int d, int T,
                                          std::uint64_t seed,
                                          bool corrupt = false);

}  // namespace raw

#endif  // RAW_KERNEL_CHECKS_HPP_
