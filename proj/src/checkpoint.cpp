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

#include "raw/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "raw/error.hpp"

namespace raw {

namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

constexpr char kMagic[8] = {'R', 'A', 'W', 'C', 'K', 'P', 'T', '1'};

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

void put_name(std::ostream& out, const std::string& s) {
  put(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

class Reader {
 public:
  Reader(std::istream& in, std::string path) : in_(in), path_(std::move(path)) {}

  template <typename T>
  T get() {
    T v{};
    in_.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in_) fail("truncated file");
    return v;
  }

  std::string name() {
    const auto n = get<std::uint32_t>();
    if (n > 4096) fail("implausible name length");
    std::string s(n, '\0');
    in_.read(s.data(), n);
    if (!in_) fail("truncated file");
    return s;
  }

  [[noreturn]] void fail(const std::string& what) {
    throw CompatibilityError(path_ + ": " + what);
  }

 private:
  std::istream& in_;
  std::string path_;
};

}  // namespace

std::uint64_t config_hash(const ModelDims& dims) {
  std::ostringstream key;
  key << "raw-model/v1;node_dim=" << dims.node_dim
      << ";edge_dim=" << dims.edge_dim << ";hidden=" << dims.hidden
      << ";classes=" << dims.num_classes;
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : key.str()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void save_checkpoint(const std::filesystem::path& path, const Model& model) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ExitCode::kData, "cannot write " + path.string());
  out.write(kMagic, sizeof(kMagic));
  put(out, config_hash(model.dims));
  put(out, static_cast<std::uint64_t>(model.dims.node_dim));
  put(out, static_cast<std::uint64_t>(model.dims.edge_dim));
  put(out, static_cast<std::uint64_t>(model.dims.hidden));
  put(out, static_cast<std::uint64_t>(model.dims.num_classes));
  const auto groups = model.groups();
  put(out, static_cast<std::uint32_t>(groups.size()));
  for (const ParamGroup* g : groups) {
    put_name(out, g->name());
    put(out, static_cast<std::uint32_t>(g->size()));
    for (const Param& p : *g) {
      put_name(out, p.name);
      put(out, static_cast<std::uint64_t>(p.value.rows()));
      put(out, static_cast<std::uint64_t>(p.value.cols()));
      for (Eigen::Index r = 0; r < p.value.rows(); ++r) {
        for (Eigen::Index c = 0; c < p.value.cols(); ++c) put(out, p.value(r, c));
      }
    }
  }
  if (!out) throw Error(ExitCode::kData, "failed writing " + path.string());
}

Model load_checkpoint(const std::filesystem::path& path,
                      std::optional<std::uint64_t> expected_hash) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CompatibilityError("cannot open checkpoint " + path.string());
  Reader rd(in, path.string());
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    rd.fail("not a checkpoint file");
  }
  const auto hash = rd.get<std::uint64_t>();
  if (expected_hash && *expected_hash != hash) {
    rd.fail("config hash mismatch (checkpoint was trained for a different "
            "architecture or dataset)");
  }
  ModelDims dims;
  dims.node_dim = static_cast<Eigen::Index>(rd.get<std::uint64_t>());
  dims.edge_dim = static_cast<Eigen::Index>(rd.get<std::uint64_t>());
  dims.hidden = static_cast<Eigen::Index>(rd.get<std::uint64_t>());
  dims.num_classes = static_cast<Eigen::Index>(rd.get<std::uint64_t>());
  if (config_hash(dims) != hash) rd.fail("header is inconsistent");

  Model model(dims);
  const auto groups = model.groups();
  if (rd.get<std::uint32_t>() != groups.size()) rd.fail("group count mismatch");
  for (ParamGroup* g : groups) {
    if (rd.name() != g->name()) rd.fail("unexpected group " + g->name());
    if (rd.get<std::uint32_t>() != g->size()) rd.fail("param count mismatch");
    for (Param& p : *g) {
      if (rd.name() != p.name) rd.fail("unexpected parameter " + p.name);
      const auto rows = rd.get<std::uint64_t>();
      const auto cols = rd.get<std::uint64_t>();
      if (rows != static_cast<std::uint64_t>(p.value.rows()) ||
          cols != static_cast<std::uint64_t>(p.value.cols())) {
        rd.fail("shape mismatch for " + g->name() + "/" + p.name);
      }
      for (Eigen::Index r = 0; r < p.value.rows(); ++r) {
        for (Eigen::Index c = 0; c < p.value.cols(); ++c) {
          p.value(r, c) = rd.get<double>();
        }
      }
    }
    g->bump_version();
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw CompatibilityError("trailing bytes in checkpoint " + path.string());
  }
  return model;
}

}  // namespace raw
