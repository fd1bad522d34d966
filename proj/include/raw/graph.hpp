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

#ifndef RAW_GRAPH_HPP_
#define RAW_GRAPH_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace raw {

using NodeId = std::int64_t;
using EdgeId = std::int64_t;
using ClassId = int;

inline constexpr ClassId kUnlabeled = -1;

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Neighbor {
  NodeId node;
  EdgeId edge;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

// Undirected edge record. `synthetic` marks the self-loops added for isolated
// nodes; they carry a zero attribute row.
struct EdgeRecord {
  NodeId u;
  NodeId v;
  bool synthetic = false;
};

// Raw ingredients for a graph. Edges may repeat in either orientation;
// `edge_attr_rows[i]` (if present) holds the attribute row of `edges[i]`.
struct GraphInput {
  std::int64_t num_nodes = 0;
  std::vector<std::pair<NodeId, NodeId>> edges;
  RowMatrix node_attrs;
  std::int64_t edge_attr_dim = 0;
  std::vector<std::optional<Eigen::VectorXd>> edge_attr_rows;
  std::vector<ClassId> labels;  // kUnlabeled where unknown; may be empty
  int num_classes = 0;          // 0 = infer from labels
};

// Attributed undirected graph in compressed sparse row form. Immutable after
// construction.
class AttributedGraph {
 public:
  AttributedGraph() = default;

  // Deduplicates undirected edges (first attribute row wins), attaches a
  // zero-attribute self-loop to every isolated node and builds sorted
  // neighbor lists.
  static AttributedGraph build(GraphInput input);

  std::int64_t num_nodes() const { return num_nodes_; }
  std::int64_t num_edges() const {
    return static_cast<std::int64_t>(edges_.size());
  }
  std::int64_t node_attr_dim() const { return node_attrs_.cols(); }
  std::int64_t edge_attr_dim() const { return edge_attrs_.cols(); }
  int num_classes() const { return num_classes_; }

  std::span<const Neighbor> neighbors(NodeId v) const {
    return {adjacency_.data() + offsets_[v],
            static_cast<std::size_t>(offsets_[v + 1] - offsets_[v])};
  }
  std::int64_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
  std::int64_t max_degree() const;

  const RowMatrix& node_attrs() const { return node_attrs_; }
  const RowMatrix& edge_attrs() const { return edge_attrs_; }
  const std::vector<EdgeRecord>& edges() const { return edges_; }
  const std::vector<ClassId>& labels() const { return labels_; }

  ClassId label(NodeId v) const { return labels_[v]; }
  bool is_labeled(NodeId v) const { return labels_[v] != kUnlabeled; }

  // Returns a copy with every nonzero node and edge attribute row scaled to
  // unit L2 norm.
  AttributedGraph normalized() const;

 private:
  std::int64_t num_nodes_ = 0;
  std::vector<std::int64_t> offsets_{0};
  std::vector<Neighbor> adjacency_;
  std::vector<EdgeRecord> edges_;
  RowMatrix node_attrs_;
  RowMatrix edge_attrs_;
  std::vector<ClassId> labels_;
  int num_classes_ = 0;
};

// Read-only view of a graph without access to labels. The walk agent only
// ever receives this type.
class GraphView {
 public:
  explicit GraphView(const AttributedGraph& g) : g_(&g) {}

  std::int64_t num_nodes() const { return g_->num_nodes(); }
  std::int64_t node_attr_dim() const { return g_->node_attr_dim(); }
  std::int64_t edge_attr_dim() const { return g_->edge_attr_dim(); }
  std::span<const Neighbor> neighbors(NodeId v) const {
    return g_->neighbors(v);
  }
  std::int64_t degree(NodeId v) const { return g_->degree(v); }
  auto node_attr(NodeId v) const { return g_->node_attrs().row(v); }
  auto edge_attr(EdgeId e) const { return g_->edge_attrs().row(e); }

 private:
  const AttributedGraph* g_;
};

AttributedGraph normalize_attributes(const AttributedGraph& g);

// Loads the text formats documented in the README. `missing_edge_attr_dim`
// sets D_e when no edge attribute file is given.
AttributedGraph load_graph(
    const std::filesystem::path& edge_file,
    const std::filesystem::path& node_attr_file,
    const std::optional<std::filesystem::path>& edge_attr_file,
    const std::filesystem::path& label_file,
    std::int64_t missing_edge_attr_dim = 0);

// Writes `g` in the same formats load_graph reads. Synthetic self-loops are
// not written; they are recreated on load.
void save_graph(const AttributedGraph& g, const std::filesystem::path& dir);

struct LabelSplit {
  std::vector<NodeId> train_ids;
  std::vector<NodeId> test_ids;
  std::vector<NodeId> unlabeled_ids;
};

LabelSplit split_labels(const AttributedGraph& g, double test_frac,
                        double train_frac, std::uint64_t seed);

// Training graph with some nodes removed, plus what is needed to put them
// back. Node ids in `graph` are compact; `to_original[i]` maps them back.
struct InductiveGraph {
  AttributedGraph graph;
  std::vector<NodeId> to_original;
  std::vector<NodeId> from_original;  // -1 for hidden nodes
  std::vector<NodeId> hidden;         // original ids, sorted

  // Original graph's real edges incident to a hidden node, with their
  // attribute rows.
  std::vector<std::pair<NodeId, NodeId>> hidden_edges;
  RowMatrix hidden_edge_attrs;
  RowMatrix hidden_node_attrs;
  std::vector<ClassId> hidden_labels;

  NodeId original_id(NodeId v) const { return to_original[v]; }
};

InductiveGraph prune_for_inductive(const AttributedGraph& g,
                                   std::span<const NodeId> hidden_ids);

// Rebuilds a graph in original node ids by re-inserting the hidden nodes and
// their edges into `pruned.graph`.
AttributedGraph reinsert_hidden(const InductiveGraph& pruned);

struct PlantedPartitionSpec {
  std::int64_t n = 200;
  int k = 2;
  double p_in = 0.05;
  double p_out = 0.005;
  std::int64_t attr_dim = 16;
  double noise_sigma = 0.1;
  // Weight of the class-specific direction in each class mean relative to a
  // direction shared by all classes. Large values make classes nearly
  // orthogonal; small values make node features weakly informative.
  double class_separation = 0.2;
  std::uint64_t seed = 0;
};

AttributedGraph synth_planted_partition(const PlantedPartitionSpec& spec);

// Circulant graph in which every node has exactly `degree` neighbors (degree
// must be even and < n). Attributes are seeded Gaussian, unit-normalized.
// Used to compare walk cost across graph sizes at fixed degree.
AttributedGraph synth_ring_lattice(std::int64_t n, std::int64_t degree,
                                   std::int64_t attr_dim, std::uint64_t seed);

}  // namespace raw

#endif  // RAW_GRAPH_HPP_
