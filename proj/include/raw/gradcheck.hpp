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

#ifndef RAW_GRADCHECK_HPP_
#define RAW_GRADCHECK_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "raw/nn.hpp"

namespace raw {

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::int64_t coordinates = 0;
  std::string worst;  // "group/param[index]"
};

// Relative error with an absolute floor so coordinates whose true gradient
// is ~0 are compared absolutely.
inline constexpr double kGradCheckFloor = 1e-4;

double relative_error(double analytic, double numeric);

// Compares the gradients that `backward` accumulates into `groups` against
// central differences of `loss`. Above `max_coordinates` total coordinates a
// seeded random subset is checked. Parameter values are restored on return.
GradCheckResult grad_check(const std::function<double()>& loss,
                           const std::function<void()>& backward,
                           std::span<ParamGroup* const> groups,
                           double eps = 1e-5,
                           std::int64_t max_coordinates = 1000,
                           std::uint64_t seed = 0);

}  // namespace raw

#endif  // RAW_GRADCHECK_HPP_
