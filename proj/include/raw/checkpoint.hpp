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

// Binary parameter checkpoints (little-endian):
//
//   "RAWCKPT1"                    8 bytes
//   config hash                   u64
//   node_dim edge_dim hidden k    4 x u64
//   group count                   u32
//   per group: name, param count (u32)
//     per param: name, rows (u64), cols (u64), rows*cols f64 row-major
//
// Names are a u32 length followed by the bytes.

#ifndef RAW_CHECKPOINT_HPP_
#define RAW_CHECKPOINT_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "raw/agent.hpp"

namespace raw {

// FNV-1a over the architecture-defining dimensions.
std::uint64_t config_hash(const ModelDims& dims);

void save_checkpoint(const std::filesystem::path& path, const Model& model);

// Throws CompatibilityError if `expected_hash` is given and differs.
Model load_checkpoint(const std::filesystem::path& path,
                      std::optional<std::uint64_t> expected_hash = std::nullopt);

}  // namespace raw

#endif  // RAW_CHECKPOINT_HPP_
