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

#ifndef RAW_CONFIG_HPP_
#define RAW_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "raw/graph.hpp"
#include "raw/trainer.hpp"

namespace raw {

enum class Mode { kTransductive, kInductive };

struct RunConfig {
  TrainConfig train;
  Mode mode = Mode::kTransductive;

  // Data: either files or a synthetic graph description.
  std::string edge_file;
  std::string node_attr_file;
  std::string edge_attr_file;
  std::string label_file;
  std::int64_t edge_attr_dim = 0;  // D_e when no edge attribute file
  std::string synthetic;           // e.g. "n=200,k=2,p_in=0.05"
  bool normalize = true;

  double test_frac = 0.3;
  double train_frac = 1.0;

  std::string output_dir = "raw_out";
  std::string checkpoint;  // empty: <output_dir>/model.ckpt

  int analyze_starts = 20;
  int analyze_walks = 10;
  bool diversity_exclude_start = false;

  int gradcheck_instances = 100;
  bool gradcheck_corrupt_gru = false;

  std::filesystem::path checkpoint_path() const;
};

// A documented `key = value` setting.
struct ConfigKey {
  std::string name;
  std::string help;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

const std::vector<ConfigKey>& config_keys();

// Applies one setting. Unknown keys and unparsable values raise UsageError.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

// Parses a line-oriented `key = value` file ('#' starts a comment).
std::map<std::string, std::string> read_config_file(
    const std::filesystem::path& path);

// Every key with its resolved value, one `key = value` per line.
std::string format_resolved_config(const RunConfig& cfg);

PlantedPartitionSpec parse_synthetic_spec(std::string_view spec,
                                          std::uint64_t default_seed);

}  // namespace raw

#endif  // RAW_CONFIG_HPP_
