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

#include "raw/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string>
#include <tuple>

#include "raw/error.hpp"
#include "raw/rng.hpp"
#include "raw/text.hpp"

namespace raw {

namespace {

using Eigen::VectorXd;

RowMatrix read_attribute_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  std::string line;
  std::size_t line_no = 0;
  std::int64_t dim = -1;
  std::vector<double> values;
  std::int64_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_whitespace(line);
    if (fields.empty()) continue;
    if (dim < 0) {
      if (fields.size() != 2 || fields[0] != "DIM") {
        throw ParseError(path.string(), line_no, "expected 'DIM <d>' header");
      }
      const auto d = parse_int(fields[1]);
      if (!d || *d < 0) {
        throw ParseError(path.string(), line_no, "invalid dimension");
      }
      dim = *d;
      continue;
    }
    if (static_cast<std::int64_t>(fields.size()) != dim) {
      throw DimensionError(path.string() + ":" + std::to_string(line_no) +
                           ": expected " + std::to_string(dim) +
                           " values, found " + std::to_string(fields.size()));
    }
    for (const auto& f : fields) {
      const auto v = parse_double(f);
      if (!v) {
        throw ParseError(path.string(), line_no,
                         "invalid number '" + std::string(f) + "'");
      }
      values.push_back(*v);
    }
    ++rows;
  }
  if (dim < 0) throw ParseError(path.string(), line_no, "missing DIM header");
  RowMatrix m(rows, dim);
  std::copy(values.begin(), values.end(), m.data());
  return m;
}

void write_attribute_file(const std::filesystem::path& path,
                          const RowMatrix& m) {
  std::ofstream out(path);
  out << "DIM " << m.cols() << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out << ' ';
      out << format_double(m(r, c));
    }
    out << '\n';
  }
}

void normalize_rows(RowMatrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const double norm = m.row(r).norm();
    if (norm > 0.0) m.row(r) /= norm;
  }
}

}  // namespace

AttributedGraph AttributedGraph::build(GraphInput input) {
  const std::int64_t n = input.num_nodes;
  if (n < 0) throw RangeError("negative node count");
  if (input.node_attrs.rows() != n) {
    throw DimensionError("node attribute rows (" +
                         std::to_string(input.node_attrs.rows()) +
                         ") != node count (" + std::to_string(n) + ")");
  }
  if (!input.edge_attr_rows.empty() &&
      input.edge_attr_rows.size() != input.edges.size()) {
    throw DimensionError("edge attribute list length != edge count");
  }
  if (input.labels.empty()) input.labels.assign(n, kUnlabeled);
  if (static_cast<std::int64_t>(input.labels.size()) != n) {
    throw DimensionError("label count != node count");
  }

  int num_classes = input.num_classes;
  if (num_classes == 0) {
    for (ClassId c : input.labels) num_classes = std::max(num_classes, c + 1);
  }
  for (ClassId c : input.labels) {
    if (c < kUnlabeled || c >= num_classes) {
      throw RangeError("class id " + std::to_string(c) + " out of range");
    }
  }

  // Canonical (min, max, input index); stable sort keeps the first
  // occurrence of a duplicate first.
  std::vector<std::tuple<NodeId, NodeId, std::size_t>> order;
  order.reserve(input.edges.size());
  for (std::size_t i = 0; i < input.edges.size(); ++i) {
    auto [u, v] = input.edges[i];
    if (u < 0 || u >= n || v < 0 || v >= n) {
      throw RangeError("edge (" + std::to_string(u) + ", " +
                       std::to_string(v) + ") references a node outside [0, " +
                       std::to_string(n) + ")");
    }
    order.emplace_back(std::min(u, v), std::max(u, v), i);
  }
  std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) <
           std::tie(std::get<0>(b), std::get<1>(b));
  });

  AttributedGraph g;
  g.num_nodes_ = n;
  g.num_classes_ = num_classes;
  g.labels_ = std::move(input.labels);
  g.node_attrs_ = std::move(input.node_attrs);

  std::vector<std::size_t> source_index;
  std::vector<std::int64_t> degree(n, 0);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& [u, v, src] = order[i];
    if (i > 0 && std::get<0>(order[i - 1]) == u &&
        std::get<1>(order[i - 1]) == v) {
      continue;
    }
    g.edges_.push_back({u, v, false});
    source_index.push_back(src);
    ++degree[u];
    if (u != v) ++degree[v];
  }
  for (NodeId v = 0; v < n; ++v) {
    if (degree[v] == 0) {
      g.edges_.push_back({v, v, true});
      source_index.push_back(static_cast<std::size_t>(-1));
      degree[v] = 1;
    }
  }

  g.edge_attrs_ = RowMatrix::Zero(static_cast<Eigen::Index>(g.edges_.size()),
                                  input.edge_attr_dim);
  for (std::size_t e = 0; e < g.edges_.size(); ++e) {
    const std::size_t src = source_index[e];
    if (src == static_cast<std::size_t>(-1) || input.edge_attr_rows.empty()) {
      continue;
    }
    const auto& row = input.edge_attr_rows[src];
    if (!row) continue;
    if (row->size() != input.edge_attr_dim) {
      throw DimensionError("edge attribute row of length " +
                           std::to_string(row->size()) + ", expected " +
                           std::to_string(input.edge_attr_dim));
    }
    g.edge_attrs_.row(static_cast<Eigen::Index>(e)) = row->transpose();
  }

  g.offsets_.assign(n + 1, 0);
  for (NodeId v = 0; v < n; ++v) g.offsets_[v + 1] = g.offsets_[v] + degree[v];
  g.adjacency_.resize(g.offsets_[n]);
  std::vector<std::int64_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  for (std::size_t e = 0; e < g.edges_.size(); ++e) {
    const auto [u, v, synthetic] = g.edges_[e];
    const auto eid = static_cast<EdgeId>(e);
    g.adjacency_[fill[u]++] = {v, eid};
    if (u != v) g.adjacency_[fill[v]++] = {u, eid};
  }
  for (NodeId v = 0; v < n; ++v) {
    std::sort(g.adjacency_.begin() + g.offsets_[v],
              g.adjacency_.begin() + g.offsets_[v + 1],
              [](const Neighbor& a, const Neighbor& b) {
                return std::tie(a.node, a.edge) < std::tie(b.node, b.edge);
              });
  }
  return g;
}

std::int64_t AttributedGraph::max_degree() const {
  std::int64_t best = 0;
  for (NodeId v = 0; v < num_nodes_; ++v) best = std::max(best, degree(v));
  return best;
}

AttributedGraph AttributedGraph::normalized() const {
  AttributedGraph g = *this;
  normalize_rows(g.node_attrs_);
  normalize_rows(g.edge_attrs_);
  return g;
}

AttributedGraph normalize_attributes(const AttributedGraph& g) {
  return g.normalized();
}

AttributedGraph load_graph(
    const std::filesystem::path& edge_file,
    const std::filesystem::path& node_attr_file,
    const std::optional<std::filesystem::path>& edge_attr_file,
    const std::filesystem::path& label_file,
    std::int64_t missing_edge_attr_dim) {
  GraphInput input;
  input.node_attrs = read_attribute_file(node_attr_file);
  input.num_nodes = input.node_attrs.rows();
  const std::int64_t n = input.num_nodes;

  RowMatrix edge_rows;
  if (edge_attr_file) {
    edge_rows = read_attribute_file(*edge_attr_file);
    input.edge_attr_dim = edge_rows.cols();
  } else {
    input.edge_attr_dim = missing_edge_attr_dim;
  }

  std::ifstream edges(edge_file);
  if (!edges) throw ParseError(edge_file.string(), 0, "cannot open file");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(edges, line)) {
    ++line_no;
    const auto fields = split_tabs(line);
    if (fields.empty()) continue;
    if (fields.size() != 2 && fields.size() != 3) {
      throw ParseError(edge_file.string(), line_no,
                       "expected 'src<TAB>dst[<TAB>row]'");
    }
    const auto u = parse_int(fields[0]);
    const auto v = parse_int(fields[1]);
    if (!u || !v) {
      throw ParseError(edge_file.string(), line_no, "invalid node id");
    }
    if (*u < 0 || *u >= n || *v < 0 || *v >= n) {
      throw RangeError(edge_file.string() + ":" + std::to_string(line_no) +
                       ": node id out of range [0, " + std::to_string(n) + ")");
    }
    input.edges.emplace_back(*u, *v);
    std::optional<VectorXd> attr;
    if (fields.size() == 3) {
      const auto row = parse_int(fields[2]);
      if (!row) {
        throw ParseError(edge_file.string(), line_no,
                         "invalid edge attribute row index");
      }
      if (!edge_attr_file) {
        throw ParseError(edge_file.string(), line_no,
                         "edge attribute row given but no edge attribute file");
      }
      if (*row < 0 || *row >= edge_rows.rows()) {
        throw RangeError(edge_file.string() + ":" + std::to_string(line_no) +
                         ": edge attribute row out of range");
      }
      attr = edge_rows.row(*row).transpose();
    }
    input.edge_attr_rows.push_back(std::move(attr));
  }

  input.labels.assign(n, kUnlabeled);
  std::ifstream labels(label_file);
  if (!labels) throw ParseError(label_file.string(), 0, "cannot open file");
  line_no = 0;
  while (std::getline(labels, line)) {
    ++line_no;
    const auto fields = split_tabs(line);
    if (fields.empty()) continue;
    if (fields.size() != 2) {
      throw ParseError(label_file.string(), line_no,
                       "expected 'node<TAB>class'");
    }
    const auto v = parse_int(fields[0]);
    const auto c = parse_int(fields[1]);
    if (!v || !c || *c < 0) {
      throw ParseError(label_file.string(), line_no, "invalid label line");
    }
    if (*v < 0 || *v >= n) {
      throw RangeError(label_file.string() + ":" + std::to_string(line_no) +
                       ": node id out of range");
    }
    input.labels[*v] = static_cast<ClassId>(*c);
  }
  return AttributedGraph::build(std::move(input));
}

void save_graph(const AttributedGraph& g, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_attribute_file(dir / "node_attrs.txt", g.node_attrs());

  std::vector<EdgeId> real;
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    if (!g.edges()[e].synthetic) real.push_back(static_cast<EdgeId>(e));
  }
  RowMatrix rows(static_cast<Eigen::Index>(real.size()), g.edge_attr_dim());
  std::ofstream edges(dir / "edges.tsv");
  for (std::size_t i = 0; i < real.size(); ++i) {
    const auto& rec = g.edges()[real[i]];
    rows.row(static_cast<Eigen::Index>(i)) = g.edge_attrs().row(real[i]);
    edges << rec.u << '\t' << rec.v << '\t' << i << '\n';
  }
  write_attribute_file(dir / "edge_attrs.txt", rows);

  std::ofstream labels(dir / "labels.tsv");
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    if (g.is_labeled(v)) labels << v << '\t' << g.label(v) << '\n';
  }
}

LabelSplit split_labels(const AttributedGraph& g, double test_frac,
                        double train_frac, std::uint64_t seed) {
  if (!(test_frac > 0.0 && test_frac < 1.0)) {
    throw UsageError("test_frac must lie in (0, 1)");
  }
  if (!(train_frac > 0.0 && train_frac <= 1.0)) {
    throw UsageError("train_frac must lie in (0, 1]");
  }
  std::vector<NodeId> labeled;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    if (g.is_labeled(v)) labeled.push_back(v);
  }
  if (static_cast<std::int64_t>(labeled.size()) < g.num_classes() ||
      labeled.empty()) {
    throw InsufficientLabelsError(
        std::to_string(labeled.size()) + " labeled nodes for " +
        std::to_string(g.num_classes()) + " classes");
  }

  Rng rng(derive_seed(seed, {0x5b11u}));
  rng.shuffle(labeled);
  const auto num_test = static_cast<std::size_t>(
      std::llround(test_frac * static_cast<double>(labeled.size())));
  const auto num_train = static_cast<std::size_t>(std::llround(
      train_frac * static_cast<double>(labeled.size() - num_test)));

  LabelSplit split;
  split.test_ids.assign(labeled.begin(), labeled.begin() + num_test);
  split.train_ids.assign(labeled.begin() + num_test,
                         labeled.begin() + num_test + num_train);
  std::sort(split.test_ids.begin(), split.test_ids.end());
  std::sort(split.train_ids.begin(), split.train_ids.end());

  std::vector<bool> taken(g.num_nodes(), false);
  for (NodeId v : split.test_ids) taken[v] = true;
  for (NodeId v : split.train_ids) taken[v] = true;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    if (!taken[v]) split.unlabeled_ids.push_back(v);
  }
  return split;
}

InductiveGraph prune_for_inductive(const AttributedGraph& g,
                                   std::span<const NodeId> hidden_ids) {
  const std::int64_t n = g.num_nodes();
  std::vector<bool> hidden(n, false);
  for (NodeId v : hidden_ids) {
    if (v < 0 || v >= n) throw RangeError("hidden node id out of range");
    hidden[v] = true;
  }

  InductiveGraph out;
  out.from_original.assign(n, -1);
  for (NodeId v = 0; v < n; ++v) {
    if (hidden[v]) {
      out.hidden.push_back(v);
    } else {
      out.from_original[v] = static_cast<NodeId>(out.to_original.size());
      out.to_original.push_back(v);
    }
  }

  const auto kept = static_cast<std::int64_t>(out.to_original.size());
  GraphInput input;
  input.num_nodes = kept;
  input.num_classes = g.num_classes();
  input.edge_attr_dim = g.edge_attr_dim();
  input.node_attrs.resize(kept, g.node_attr_dim());
  input.labels.resize(kept);
  for (NodeId i = 0; i < kept; ++i) {
    input.node_attrs.row(i) = g.node_attrs().row(out.to_original[i]);
    input.labels[i] = g.label(out.to_original[i]);
  }

  const auto num_hidden = static_cast<Eigen::Index>(out.hidden.size());
  out.hidden_node_attrs.resize(num_hidden, g.node_attr_dim());
  for (Eigen::Index i = 0; i < num_hidden; ++i) {
    out.hidden_node_attrs.row(i) = g.node_attrs().row(out.hidden[i]);
    out.hidden_labels.push_back(g.label(out.hidden[i]));
  }

  std::vector<EdgeId> hidden_edge_ids;
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    const auto& rec = g.edges()[e];
    if (rec.synthetic) continue;
    if (hidden[rec.u] || hidden[rec.v]) {
      hidden_edge_ids.push_back(static_cast<EdgeId>(e));
      out.hidden_edges.emplace_back(rec.u, rec.v);
      continue;
    }
    input.edges.emplace_back(out.from_original[rec.u],
                             out.from_original[rec.v]);
    input.edge_attr_rows.emplace_back(
        g.edge_attrs().row(static_cast<Eigen::Index>(e)).transpose());
  }
  out.hidden_edge_attrs.resize(
      static_cast<Eigen::Index>(hidden_edge_ids.size()), g.edge_attr_dim());
  for (std::size_t i = 0; i < hidden_edge_ids.size(); ++i) {
    out.hidden_edge_attrs.row(static_cast<Eigen::Index>(i)) =
        g.edge_attrs().row(hidden_edge_ids[i]);
  }

  out.graph = AttributedGraph::build(std::move(input));
  return out;
}

AttributedGraph reinsert_hidden(const InductiveGraph& pruned) {
  const AttributedGraph& tg = pruned.graph;
  const auto n = static_cast<std::int64_t>(pruned.from_original.size());
  GraphInput input;
  input.num_nodes = n;
  input.num_classes = tg.num_classes();
  input.edge_attr_dim = tg.edge_attr_dim();
  input.node_attrs.resize(n, tg.node_attr_dim());
  input.labels.assign(n, kUnlabeled);
  for (NodeId i = 0; i < tg.num_nodes(); ++i) {
    input.node_attrs.row(pruned.to_original[i]) = tg.node_attrs().row(i);
    input.labels[pruned.to_original[i]] = tg.label(i);
  }
  for (std::size_t i = 0; i < pruned.hidden.size(); ++i) {
    input.node_attrs.row(pruned.hidden[i]) =
        pruned.hidden_node_attrs.row(static_cast<Eigen::Index>(i));
    input.labels[pruned.hidden[i]] = pruned.hidden_labels[i];
  }
  for (std::size_t e = 0; e < tg.edges().size(); ++e) {
    const auto& rec = tg.edges()[e];
    if (rec.synthetic) continue;
    input.edges.emplace_back(pruned.to_original[rec.u],
                             pruned.to_original[rec.v]);
    input.edge_attr_rows.emplace_back(
        tg.edge_attrs().row(static_cast<Eigen::Index>(e)).transpose());
  }
  for (std::size_t i = 0; i < pruned.hidden_edges.size(); ++i) {
    input.edges.push_back(pruned.hidden_edges[i]);
    input.edge_attr_rows.emplace_back(
        pruned.hidden_edge_attrs.row(static_cast<Eigen::Index>(i)).transpose());
  }
  return AttributedGraph::build(std::move(input));
}

AttributedGraph synth_planted_partition(const PlantedPartitionSpec& spec) {
  if (spec.k < 1 || spec.n < spec.k) throw UsageError("need n >= k >= 1");
  if (!(spec.p_out >= 0.0 && spec.p_out <= spec.p_in && spec.p_in <= 1.0)) {
    throw UsageError("need 0 <= p_out <= p_in <= 1");
  }
  if (spec.attr_dim < 1) throw UsageError("attr_dim must be positive");

  const std::int64_t n = spec.n;
  const std::int64_t dim = spec.attr_dim;

  Rng mean_rng(derive_seed(spec.seed, {1}));
  VectorXd shared(dim);
  for (auto& x : shared) x = mean_rng.normal();
  shared.normalize();
  std::vector<VectorXd> means;
  for (int c = 0; c < spec.k; ++c) {
    VectorXd dir(dim);
    for (auto& x : dir) x = mean_rng.normal();
    dir.normalize();
    VectorXd m = shared + spec.class_separation * dir;
    m.normalize();
    means.push_back(std::move(m));
  }

  GraphInput input;
  input.num_nodes = n;
  input.num_classes = spec.k;
  input.labels.resize(n);
  for (NodeId v = 0; v < n; ++v) input.labels[v] = static_cast<ClassId>(v % spec.k);

  Rng edge_rng(derive_seed(spec.seed, {2}));
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      const double p =
          input.labels[u] == input.labels[v] ? spec.p_in : spec.p_out;
      if (edge_rng.bernoulli(p)) input.edges.emplace_back(u, v);
    }
  }

  Rng attr_rng(derive_seed(spec.seed, {3}));
  input.node_attrs.resize(n, dim);
  for (NodeId v = 0; v < n; ++v) {
    for (std::int64_t j = 0; j < dim; ++j) {
      input.node_attrs(v, j) =
          means[input.labels[v]](j) + spec.noise_sigma * attr_rng.normal();
    }
  }
  input.edge_attr_dim = dim;
  for (const auto& [u, v] : input.edges) {
    VectorXd row = 0.5 * (means[input.labels[u]] + means[input.labels[v]]);
    for (std::int64_t j = 0; j < dim; ++j) {
      row(j) += spec.noise_sigma * attr_rng.normal();
    }
    input.edge_attr_rows.emplace_back(std::move(row));
  }
  return AttributedGraph::build(std::move(input)).normalized();
}

AttributedGraph synth_ring_lattice(std::int64_t n, std::int64_t degree,
                                   std::int64_t attr_dim, std::uint64_t seed) {
  if (degree < 2 || degree % 2 != 0 || degree >= n) {
    throw UsageError("ring lattice degree must be even, >= 2 and < n");
  }
  GraphInput input;
  input.num_nodes = n;
  input.num_classes = 2;
  input.labels.resize(n);
  for (NodeId v = 0; v < n; ++v) {
    input.labels[v] = static_cast<ClassId>(v % 2);
    for (std::int64_t s = 1; s <= degree / 2; ++s) {
      input.edges.emplace_back(v, (v + s) % n);
    }
  }
  Rng rng(derive_seed(seed, {4}));
  input.node_attrs.resize(n, attr_dim);
  for (Eigen::Index i = 0; i < input.node_attrs.size(); ++i) {
    input.node_attrs.data()[i] = rng.normal();
  }
  input.edge_attr_dim = attr_dim;
  for (std::size_t e = 0; e < input.edges.size(); ++e) {
    VectorXd row(attr_dim);
    for (auto& x : row) x = rng.normal();
    input.edge_attr_rows.emplace_back(std::move(row));
  }
  return AttributedGraph::build(std::move(input)).normalized();
}

}  // namespace raw
