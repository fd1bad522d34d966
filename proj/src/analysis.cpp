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

#include "raw/analysis.hpp"

#include <cmath>
#include <fstream>

#include "raw/error.hpp"
#include "raw/text.hpp"

namespace raw {

namespace {

constexpr std::uint64_t kAgentStream = 0x6167656e74;    // "agent"
constexpr std::uint64_t kRandomStream = 0x72616e646f6d;  // "random"

template <typename T, typename Format>
std::string join_list(const std::vector<T>& items, Format format) {
  if (items.empty()) return "-";
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ',';
    out += format(items[i]);
  }
  return out;
}

std::vector<double> parse_double_list(std::string_view field,
                                      const std::string& line) {
  std::vector<double> out;
  if (field == "-") return out;
  for (auto part : split_char(field, ',')) {
    const auto v = parse_double(part);
    if (!v) throw ParseError("trajectory dump", 0, "bad number in: " + line);
    out.push_back(*v);
  }
  return out;
}

}  // namespace

double path_label_diversity(std::span<const ClassId> labels, int t,
                            bool exclude_start) {
  if (t < 1 || static_cast<std::size_t>(t) >= labels.size()) {
    throw RangeError("diversity step t must satisfy 1 <= t < path length");
  }
  const ClassId origin = labels[0];
  int same = 0;
  for (int i = exclude_start ? 1 : 0; i <= t; ++i) {
    if (labels[static_cast<std::size_t>(i)] == origin) ++same;
  }
  return 1.0 - static_cast<double>(same) / static_cast<double>(t);
}

std::vector<DiversityPoint> diversity_curves(
    std::span<const std::vector<ClassId>> paths, bool exclude_start) {
  std::vector<DiversityPoint> out;
  if (paths.empty()) return out;
  const std::size_t T = paths.front().size();
  for (const auto& p : paths) {
    if (p.size() != T) throw DimensionError("trajectories differ in length");
  }
  const auto n = static_cast<double>(paths.size());
  for (std::size_t t = 1; t < T; ++t) {
    double sum = 0.0;
    std::vector<double> values;
    values.reserve(paths.size());
    for (const auto& p : paths) {
      values.push_back(
          path_label_diversity(p, static_cast<int>(t), exclude_start));
      sum += values.back();
    }
    DiversityPoint point;
    point.t = static_cast<int>(t);
    point.mean = sum / n;
    if (paths.size() > 1) {
      double sq = 0.0;
      for (double v : values) sq += (v - point.mean) * (v - point.mean);
      point.variance = sq / (n - 1.0);
    }
    out.push_back(point);
  }
  return out;
}

std::vector<std::vector<ClassId>> label_paths(
    const AttributedGraph& g, std::span<const Trajectory> trajs) {
  std::vector<std::vector<ClassId>> out;
  out.reserve(trajs.size());
  for (const auto& tr : trajs) {
    std::vector<ClassId> path;
    path.reserve(tr.nodes.size());
    for (NodeId v : tr.nodes) path.push_back(g.label(v));
    out.push_back(std::move(path));
  }
  return out;
}

Eigen::MatrixXd class_visit_matrix(std::span<const Trajectory> trajs,
                                   std::span<const ClassId> node_labels, int k) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(k, k);
  for (const auto& tr : trajs) {
    const ClassId origin = node_labels[static_cast<std::size_t>(tr.start())];
    if (origin == kUnlabeled) throw UsageError("start node is unlabeled");
    for (std::size_t i = 1; i < tr.nodes.size(); ++i) {
      const ClassId c = node_labels[static_cast<std::size_t>(tr.nodes[i])];
      if (c == kUnlabeled) continue;
      m(c, origin) += 1.0;
    }
  }
  for (int c = 0; c < k; ++c) {
    const double total = m.col(c).sum();
    if (total > 0.0) m.col(c) /= total;
  }
  return m;
}

Trajectory random_walk_baseline(const GraphView& view, NodeId start, int T,
                                Rng& rng) {
  if (T < 2) throw UsageError("walk length T must be >= 2");
  if (start < 0 || start >= view.num_nodes()) {
    throw RangeError("start node out of range");
  }
  Trajectory traj;
  NodeId current = start;
  for (int t = 1; t <= T; ++t) {
    traj.nodes.push_back(current);
    if (t == T) break;
    const auto nbrs = view.neighbors(current);
    const auto pick = static_cast<std::size_t>(rng.below(nbrs.size()));
    traj.chosen_logprobs.push_back(-std::log(static_cast<double>(nbrs.size())));
    current = nbrs[pick].node;
  }
  return traj;
}

PolicyComparison sample_policies(const GraphView& view, const Model& model,
                                 std::span<const NodeId> starts,
                                 int walks_per_start, int T, std::uint64_t seed) {
  if (walks_per_start < 1) throw UsageError("walks per start must be >= 1");
  PolicyComparison out;
  for (const NodeId start : starts) {
    for (int i = 0; i < walks_per_start; ++i) {
      const auto idx = static_cast<std::uint64_t>(i);
      Rng agent_rng(derive_seed(seed, {kAgentStream,
                                       static_cast<std::uint64_t>(start), idx}));
      Trajectory traj = walk(view, start, T, model, agent_rng);
      classify_trajectory(model, traj);
      traj.steps.clear();
      traj.steps.shrink_to_fit();
      traj.model = nullptr;
      out.trained.push_back(std::move(traj));

      Rng random_rng(derive_seed(seed, {kRandomStream,
                                        static_cast<std::uint64_t>(start), idx}));
      out.random.push_back(random_walk_baseline(view, start, T, random_rng));
    }
  }
  return out;
}

WorkspaceReport workspace_probe(const GraphView& view, const Model& model,
                                int T, NodeId start, std::uint64_t seed) {
  WorkspaceCounter counter;
  Rng rng(seed);
  walk(view, start, T, model, rng, &counter);
  return {counter.per_step, counter.peak()};
}

TrajectoryRecord to_record(const Trajectory& traj) {
  TrajectoryRecord rec;
  rec.start = traj.start();
  rec.nodes = traj.nodes;
  rec.chosen_scores = traj.chosen_scores;
  rec.terminal_probs.assign(traj.terminal_probs.data(),
                            traj.terminal_probs.data() +
                                traj.terminal_probs.size());
  return rec;
}

std::string format_trajectory_line(const TrajectoryRecord& rec) {
  const auto num = [](double v) { return format_double(v); };
  return std::to_string(rec.start) + '\t' +
         join_list(rec.nodes, [](NodeId v) { return std::to_string(v); }) +
         '\t' + join_list(rec.chosen_scores, num) + '\t' +
         join_list(rec.terminal_probs, num);
}

TrajectoryRecord parse_trajectory_line(const std::string& line) {
  const auto fields = split_tabs(line);
  if (fields.size() != 4) {
    throw ParseError("trajectory dump", 0, "expected 4 fields: " + line);
  }
  TrajectoryRecord rec;
  const auto start = parse_int(fields[0]);
  if (!start) throw ParseError("trajectory dump", 0, "bad start: " + line);
  rec.start = *start;
  if (fields[1] != "-") {
    for (auto part : split_char(fields[1], ',')) {
      const auto v = parse_int(part);
      if (!v) throw ParseError("trajectory dump", 0, "bad node: " + line);
      rec.nodes.push_back(*v);
    }
  }
  rec.chosen_scores = parse_double_list(fields[2], line);
  rec.terminal_probs = parse_double_list(fields[3], line);
  return rec;
}

void write_trajectory_dump(const std::filesystem::path& path,
                           std::span<const Trajectory> trajs) {
  std::ofstream out(path);
  for (const auto& tr : trajs) out << format_trajectory_line(to_record(tr)) << '\n';
}

std::vector<TrajectoryRecord> read_trajectory_dump(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  std::vector<TrajectoryRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    out.push_back(parse_trajectory_line(line));
  }
  return out;
}

void write_visit_matrix(const std::filesystem::path& path,
                        const Eigen::MatrixXd& m) {
  std::ofstream out(path);
  out << "visited\\start";
  for (Eigen::Index c = 0; c < m.cols(); ++c) out << '\t' << c;
  out << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out << r;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      out << '\t' << format_double(m(r, c));
    }
    out << '\n';
  }
}

Eigen::MatrixXd read_visit_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  std::string line;
  std::getline(in, line);
  const auto k = static_cast<Eigen::Index>(split_tabs(line).size()) - 1;
  Eigen::MatrixXd m(k, k);
  std::size_t line_no = 1;
  for (Eigen::Index r = 0; r < k; ++r) {
    ++line_no;
    if (!std::getline(in, line)) {
      throw ParseError(path.string(), line_no, "missing row");
    }
    const auto fields = split_tabs(line);
    if (static_cast<Eigen::Index>(fields.size()) != k + 1) {
      throw ParseError(path.string(), line_no, "wrong column count");
    }
    for (Eigen::Index c = 0; c < k; ++c) {
      const auto v = parse_double(fields[static_cast<std::size_t>(c) + 1]);
      if (!v) throw ParseError(path.string(), line_no, "bad number");
      m(r, c) = *v;
    }
  }
  return m;
}

void write_diversity_curve(const std::filesystem::path& path,
                           std::span<const DiversityPoint> curve) {
  std::ofstream out(path);
  out << "t\tmean\tvariance\n";
  for (const auto& p : curve) {
    out << p.t << '\t' << format_double(p.mean) << '\t'
        << format_double(p.variance) << '\n';
  }
}

std::vector<DiversityPoint> read_diversity_curve(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  std::vector<DiversityPoint> out;
  std::string line;
  std::getline(in, line);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_tabs(line);
    if (fields.empty()) continue;
    const auto t = fields.size() == 3 ? parse_int(fields[0]) : std::nullopt;
    const auto mean = fields.size() == 3 ? parse_double(fields[1]) : std::nullopt;
    const auto var = fields.size() == 3 ? parse_double(fields[2]) : std::nullopt;
    if (!t || !mean || !var) {
      throw ParseError(path.string(), line_no, "expected t, mean, variance");
    }
    out.push_back({static_cast<int>(*t), *mean, *var});
  }
  return out;
}

ClassId LogisticBaseline::predict(const Eigen::VectorXd& x) const {
  return argmax(Vector(weights * x + bias));
}

LogisticBaseline fit_logistic_baseline(const AttributedGraph& g,
                                       std::span<const NodeId> train_ids,
                                       double l2, int iterations, double step) {
  const int k = g.num_classes();
  const Eigen::Index dim = g.node_attr_dim();
  LogisticBaseline model;
  model.weights = Eigen::MatrixXd::Zero(k, dim);
  model.bias = Eigen::VectorXd::Zero(k);
  if (train_ids.empty()) return model;
  const double inv_n = 1.0 / static_cast<double>(train_ids.size());
  for (int it = 0; it < iterations; ++it) {
    Eigen::MatrixXd gw = 2.0 * l2 * model.weights;
    Eigen::VectorXd gb = Eigen::VectorXd::Zero(k);
    for (NodeId v : train_ids) {
      const Vector x = g.node_attrs().row(v).transpose();
      const auto ce =
          softmax_cross_entropy(model.weights * x + model.bias, g.label(v));
      gw.noalias() += inv_n * ce.grad * x.transpose();
      gb += inv_n * ce.grad;
    }
    model.weights -= step * gw;
    model.bias -= step * gb;
  }
  return model;
}

double baseline_accuracy(const LogisticBaseline& model, const AttributedGraph& g,
                         std::span<const NodeId> ids) {
  if (ids.empty()) return 0.0;
  std::int64_t correct = 0;
  for (NodeId v : ids) {
    if (model.predict(g.node_attrs().row(v).transpose()) == g.label(v)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(ids.size());
}

}  // namespace raw
