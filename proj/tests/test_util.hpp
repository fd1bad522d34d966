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

#ifndef RAW_TESTS_TEST_UTIL_HPP_
#define RAW_TESTS_TEST_UTIL_HPP_

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include "raw/graph.hpp"

namespace raw::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    std::string name = "raw_test";
    if (info != nullptr) {
      name += std::string("_") + info->test_suite_name() + "_" + info->name();
    }
    path_ = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& s) const { return path_ / s; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& s) {
  std::ofstream f(p, std::ios::binary);
  f << s;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

// Small labeled graph from an edge list; attributes are 1..D per node.
inline AttributedGraph make_graph(
    std::int64_t n, std::vector<std::pair<NodeId, NodeId>> edges,
    std::int64_t node_dim = 2, std::int64_t edge_dim = 1,
    std::vector<ClassId> labels = {}) {
  GraphInput in;
  in.num_nodes = n;
  in.edges = std::move(edges);
  in.node_attrs.resize(n, node_dim);
  for (std::int64_t v = 0; v < n; ++v) {
    for (std::int64_t j = 0; j < node_dim; ++j) {
      in.node_attrs(v, j) = static_cast<double>(v + 1) * 0.1 + static_cast<double>(j);
    }
  }
  in.edge_attr_dim = edge_dim;
  for (std::size_t e = 0; e < in.edges.size(); ++e) {
    Eigen::VectorXd row = Eigen::VectorXd::Constant(edge_dim, 0.5 + static_cast<double>(e));
    in.edge_attr_rows.push_back(row);
  }
  if (labels.empty()) {
    for (std::int64_t v = 0; v < n; ++v) labels.push_back(static_cast<ClassId>(v % 2));
  }
  in.labels = std::move(labels);
  return AttributedGraph::build(in);
}

}  // namespace raw::testing

#endif  // RAW_TESTS_TEST_UTIL_HPP_
