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

// Trajectory analytics. Unlike the agent, these functions may read labels.

#ifndef RAW_ANALYSIS_HPP_
#define RAW_ANALYSIS_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "raw/agent.hpp"
#include "raw/graph.hpp"

namespace raw {

// delta_t = 1 - (sum_{i=0..t} [l_i == l_0]) / t. The i = 0 term always
// matches, so an all-same-label path gives a negative value. With
// exclude_start the sum runs over i = 1..t and the result lies in [0, 1].
double path_label_diversity(std::span<const ClassId> labels_on_path, int t,
                            bool exclude_start = false);

struct DiversityPoint {
  int t = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased; 0 for a single trajectory
};

// Per-step mean and variance of delta_t for t = 1..T-1 over label paths of
// equal length T.
std::vector<DiversityPoint> diversity_curves(
    std::span<const std::vector<ClassId>> label_paths, bool exclude_start = false);

// Labels along each trajectory (kUnlabeled where unknown).
std::vector<std::vector<ClassId>> label_paths(
    const AttributedGraph& g, std::span<const Trajectory> trajs);

// k x k matrix; entry (r, c) is the share of visits (steps 1..T-1) to
// class-r nodes by walks that start at class-c nodes. Unlabeled visits are
// ignored and columns without visits stay zero.
Eigen::MatrixXd class_visit_matrix(std::span<const Trajectory> trajs,
                                   std::span<const ClassId> node_labels, int k);

// Uniform next-neighbor walk with the same record format (no scores).
Trajectory random_walk_baseline(const GraphView& view, NodeId start, int T,
                                Rng& rng);

// Trained-agent and uniform-random walks from the same start nodes, for
// side-by-side analysis. Trained walks are classified and carry no
// backprop intermediates.
struct PolicyComparison {
  std::vector<Trajectory> trained;
  std::vector<Trajectory> random;
};

PolicyComparison sample_policies(const GraphView& view, const Model& model,
                                 std::span<const NodeId> starts,
                                 int walks_per_start, int T, std::uint64_t seed);

struct WorkspaceReport {
  std::vector<std::int64_t> per_step;
  std::int64_t peak = 0;
};

WorkspaceReport workspace_probe(const GraphView& view, const Model& model,
                                int T, NodeId start, std::uint64_t seed);

// ---- text outputs ----

// One walk per line: start, node sequence, chosen scores and terminal class
// distribution, tab-separated with comma-separated lists. Empty lists are
// written as "-".
struct TrajectoryRecord {
  NodeId start = 0;
  std::vector<NodeId> nodes;
  std::vector<double> chosen_scores;
  std::vector<double> terminal_probs;

  friend bool operator==(const TrajectoryRecord&,
                         const TrajectoryRecord&) = default;
};

TrajectoryRecord to_record(const Trajectory& traj);
std::string format_trajectory_line(const TrajectoryRecord& rec);
TrajectoryRecord parse_trajectory_line(const std::string& line);

void write_trajectory_dump(const std::filesystem::path& path,
                           std::span<const Trajectory> trajs);
std::vector<TrajectoryRecord> read_trajectory_dump(
    const std::filesystem::path& path);

void write_visit_matrix(const std::filesystem::path& path,
                        const Eigen::MatrixXd& m);
Eigen::MatrixXd read_visit_matrix(const std::filesystem::path& path);

void write_diversity_curve(const std::filesystem::path& path,
                           std::span<const DiversityPoint> curve);
std::vector<DiversityPoint> read_diversity_curve(
    const std::filesystem::path& path);

// Multinomial logistic regression on node attributes alone. Serves as the
// feature-only reference for the walk model.
struct LogisticBaseline {
  Eigen::MatrixXd weights;  // k x D
  Eigen::VectorXd bias;

  ClassId predict(const Eigen::VectorXd& x) const;
};

LogisticBaseline fit_logistic_baseline(const AttributedGraph& g,
                                       std::span<const NodeId> train_ids,
                                       double l2 = 1e-4, int iterations = 2000,
                                       double step = 0.5);

double baseline_accuracy(const LogisticBaseline& model, const AttributedGraph& g,
                         std::span<const NodeId> ids);

}  // namespace raw

#endif  // RAW_ANALYSIS_HPP_
