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


#include <gtest/gtest.h>

#include <fstream>

#include "raw/checkpoint.hpp"
#include "raw/error.hpp"
#include "test_util.hpp"

namespace raw {
namespace {

using testing::read_file;
using testing::TempDir;
using testing::write_file;

Model trained_looking_model(std::uint64_t seed) {
  Model m(ModelDims{3, 2, 5, 4});
  m.init(seed);
  for (ParamGroup* g : m.groups()) {
    for (Param& p : *g) {
      p.grad.setConstant(0.01);
    }
    adam_step(*g, 0.1);
  }
  return m;
}

TEST(Checkpoint, RoundTripIsExact) {
  TempDir dir;
  const Model m = trained_looking_model(4);
  save_checkpoint(dir.path() / "m.ckpt", m);
  const Model back = load_checkpoint(dir.path() / "m.ckpt", config_hash(m.dims));
  EXPECT_EQ(back.dims, m.dims);
  const auto ga = m.groups();
  const auto gb = back.groups();
  ASSERT_EQ(ga.size(), gb.size());
  for (std::size_t i = 0; i < ga.size(); ++i) {
    ASSERT_EQ(ga[i]->size(), gb[i]->size());
    for (std::size_t j = 0; j < ga[i]->size(); ++j) {
      EXPECT_EQ((*ga[i])[j].name, (*gb[i])[j].name);
      EXPECT_EQ((*ga[i])[j].value, (*gb[i])[j].value);
    }
  }
  // Saving the loaded model reproduces the file byte for byte.
  save_checkpoint(dir.path() / "again.ckpt", back);
  EXPECT_EQ(read_file(dir.path() / "m.ckpt"), read_file(dir.path() / "again.ckpt"));
}

TEST(Checkpoint, HashDependsOnArchitectureOnly) {
  const ModelDims a{3, 2, 5, 4};
  ModelDims b = a;
  EXPECT_EQ(config_hash(a), config_hash(b));
  b.hidden = 6;
  EXPECT_NE(config_hash(a), config_hash(b));
  b = a;
  b.num_classes = 3;
  EXPECT_NE(config_hash(a), config_hash(b));
}

TEST(Checkpoint, HashMismatch) {
  TempDir dir;
  const Model m = trained_looking_model(1);
  save_checkpoint(dir.path() / "m.ckpt", m);
  ModelDims other = m.dims;
  other.hidden = 7;
  EXPECT_THROW(load_checkpoint(dir.path() / "m.ckpt", config_hash(other)),
               CompatibilityError);
  EXPECT_NO_THROW(load_checkpoint(dir.path() / "m.ckpt"));
}

TEST(Checkpoint, CorruptFiles) {
  TempDir dir;
  const Model m = trained_looking_model(1);
  save_checkpoint(dir.path() / "m.ckpt", m);
  const std::string bytes = read_file(dir.path() / "m.ckpt");

  write_file(dir.path() / "trunc.ckpt", bytes.substr(0, bytes.size() / 2));
  EXPECT_THROW(load_checkpoint(dir.path() / "trunc.ckpt"), Error);

  std::string bad = bytes;
  bad[0] = 'X';
  write_file(dir.path() / "magic.ckpt", bad);
  EXPECT_THROW(load_checkpoint(dir.path() / "magic.ckpt"), Error);

  write_file(dir.path() / "extra.ckpt", bytes + "junk");
  EXPECT_THROW(load_checkpoint(dir.path() / "extra.ckpt"), Error);

  EXPECT_ANY_THROW(load_checkpoint(dir.path() / "missing.ckpt"));
}

}  // namespace
}  // namespace raw
