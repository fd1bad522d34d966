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

#include "raw/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "raw/rng.hpp"

namespace raw {

double relative_error(double analytic, double numeric) {
  const double denom =
      std::max({std::abs(analytic), std::abs(numeric), kGradCheckFloor});
  return std::abs(analytic - numeric) / denom;
}

GradCheckResult grad_check(const std::function<double()>& loss,
                           const std::function<void()>& backward,
                           std::span<ParamGroup* const> groups, double eps,
                           std::int64_t max_coordinates, std::uint64_t seed) {
  for (ParamGroup* g : groups) g->zero_grads();
  backward();

  // (group, param, flat index)
  std::vector<std::tuple<std::size_t, std::size_t, Eigen::Index>> coords;
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    for (std::size_t pi = 0; pi < groups[gi]->size(); ++pi) {
      const auto n = (*groups[gi])[pi].value.size();
      for (Eigen::Index i = 0; i < n; ++i) coords.emplace_back(gi, pi, i);
    }
  }
  if (static_cast<std::int64_t>(coords.size()) > max_coordinates) {
    Rng rng(derive_seed(seed, {0x9c}));
    rng.shuffle(coords);
    coords.resize(static_cast<std::size_t>(max_coordinates));
  }

  GradCheckResult result;
  for (const auto& [gi, pi, i] : coords) {
    Param& p = (*groups[gi])[pi];
    double& x = p.value.data()[i];
    const double saved = x;
    x = saved + eps;
    groups[gi]->bump_version();
    const double up = loss();
    x = saved - eps;
    groups[gi]->bump_version();
    const double down = loss();
    x = saved;
    groups[gi]->bump_version();

    const double numeric = (up - down) / (2.0 * eps);
    const double err = relative_error(p.grad.data()[i], numeric);
    ++result.coordinates;
    if (err > result.max_rel_error || result.worst.empty()) {
      result.max_rel_error = std::max(result.max_rel_error, err);
      if (err >= result.max_rel_error) {
        result.worst = groups[gi]->name() + "/" + p.name + "[" +
                       std::to_string(i) + "]";
      }
    }
  }
  for (ParamGroup* g : groups) g->zero_grads();
  return result;
}

}  // namespace raw
