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

#include "raw/config.hpp"

#include <fstream>
#include <sstream>

#include "raw/error.hpp"
#include "raw/text.hpp"

namespace raw {

namespace {

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw UsageError("invalid value '" + std::string(value) + "' for " +
                   std::string(key));
}

std::int64_t to_int(std::string_view key, std::string_view v) {
  const auto parsed = parse_int(trim(v));
  if (!parsed) bad_value(key, v);
  return *parsed;
}

double to_double(std::string_view key, std::string_view v) {
  const auto parsed = parse_double(trim(v));
  if (!parsed) bad_value(key, v);
  return *parsed;
}

bool to_bool(std::string_view key, std::string_view v) {
  v = trim(v);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad_value(key, v);
}

std::string from_bool(bool b) { return b ? "true" : "false"; }

template <typename Field>
ConfigKey int_key(std::string name, std::string help, Field field) {
  return {name, std::move(help),
          [name, field](RunConfig& c, std::string_view v) {
            c.*field = static_cast<std::remove_reference_t<decltype(c.*field)>>(
                to_int(name, v));
          },
          [field](const RunConfig& c) { return std::to_string(c.*field); }};
}

template <typename Field>
ConfigKey train_int_key(std::string name, std::string help, Field field) {
  return {name, std::move(help),
          [name, field](RunConfig& c, std::string_view v) {
            c.train.*field =
                static_cast<std::remove_reference_t<decltype(c.train.*field)>>(
                    to_int(name, v));
          },
          [field](const RunConfig& c) { return std::to_string(c.train.*field); }};
}

template <typename Field>
ConfigKey train_double_key(std::string name, std::string help, Field field) {
  return {name, std::move(help),
          [name, field](RunConfig& c, std::string_view v) {
            c.train.*field = to_double(name, v);
          },
          [field](const RunConfig& c) { return format_double(c.train.*field); }};
}

template <typename Field>
ConfigKey train_bool_key(std::string name, std::string help, Field field) {
  return {name, std::move(help),
          [name, field](RunConfig& c, std::string_view v) {
            c.train.*field = to_bool(name, v);
          },
          [field](const RunConfig& c) { return from_bool(c.train.*field); }};
}

template <typename Field>
ConfigKey double_key(std::string name, std::string help, Field field) {
  return {name, std::move(help),
          [name, field](RunConfig& c, std::string_view v) {
            c.*field = to_double(name, v);
          },
          [field](const RunConfig& c) { return format_double(c.*field); }};
}

template <typename Field>
ConfigKey bool_key(std::string name, std::string help, Field field) {
  return {name, std::move(help),
          [name, field](RunConfig& c, std::string_view v) {
            c.*field = to_bool(name, v);
          },
          [field](const RunConfig& c) { return from_bool(c.*field); }};
}

template <typename Field>
ConfigKey string_key(std::string name, std::string help, Field field) {
  return {name, std::move(help),
          [field](RunConfig& c, std::string_view v) {
            c.*field = std::string(trim(v));
          },
          [field](const RunConfig& c) { return c.*field; }};
}

std::vector<ConfigKey> make_keys() {
  std::vector<ConfigKey> keys;
  keys.push_back(train_int_key("T", "walk length (steps)", &TrainConfig::T));
  keys.push_back(train_int_key("m_train", "walks per training start node",
                               &TrainConfig::m_train));
  keys.push_back(train_int_key("m_test", "walks averaged per prediction",
                               &TrainConfig::m_test));
  keys.push_back(train_double_key("gamma", "reward discount in (0, 1]",
                                  &TrainConfig::gamma));
  keys.push_back(train_double_key("lr", "learning rate", &TrainConfig::lr));
  keys.push_back(train_int_key("hidden_dim", "history / hidden width d",
                               &TrainConfig::hidden_dim));
  keys.push_back(train_int_key("epochs", "training epochs", &TrainConfig::epochs));
  keys.push_back(train_double_key("l2", "classifier L2 coefficient",
                                  &TrainConfig::l2));
  keys.push_back(
      {"seed", "global random seed",
       [](RunConfig& c, std::string_view v) {
         const auto s = to_int("seed", v);
         if (s < 0) bad_value("seed", v);
         c.train.seed = static_cast<std::uint64_t>(s);
       },
       [](const RunConfig& c) { return std::to_string(c.train.seed); }});
  keys.push_back(train_int_key("threads", "walk worker threads (1 = deterministic reference)",
                               &TrainConfig::threads));
  keys.push_back(train_bool_key("supervised_to_core",
                                "classifier loss also trains the GRU",
                                &TrainConfig::supervised_to_core));
  keys.push_back(train_bool_key("reward_from_ensemble",
                                "reward from the M-walk mean prediction",
                                &TrainConfig::reward_from_ensemble));
  keys.push_back(train_bool_key("reward_baseline",
                                "subtract the batch mean reward",
                                &TrainConfig::reward_baseline));
  keys.push_back(
      {"mode", "transductive | inductive",
       [](RunConfig& c, std::string_view v) {
         v = trim(v);
         if (v == "transductive") {
           c.mode = Mode::kTransductive;
         } else if (v == "inductive") {
           c.mode = Mode::kInductive;
         } else {
           bad_value("mode", v);
         }
       },
       [](const RunConfig& c) {
         return std::string(c.mode == Mode::kInductive ? "inductive"
                                                       : "transductive");
       }});
  keys.push_back(string_key("edge_file", "edge list file", &RunConfig::edge_file));
  keys.push_back(string_key("node_attr_file", "node attribute file",
                            &RunConfig::node_attr_file));
  keys.push_back(string_key("edge_attr_file", "edge attribute file (optional)",
                            &RunConfig::edge_attr_file));
  keys.push_back(string_key("label_file", "label file", &RunConfig::label_file));
  keys.push_back(int_key("edge_attr_dim",
                         "edge attribute width when no edge attribute file",
                         &RunConfig::edge_attr_dim));
  keys.push_back(string_key("synthetic",
                            "synthetic graph, e.g. n=200,k=2,p_in=0.05,p_out=0.005",
                            &RunConfig::synthetic));
  keys.push_back(bool_key("normalize", "scale attribute rows to unit norm",
                          &RunConfig::normalize));
  keys.push_back(double_key("test_frac", "share of labeled nodes held out",
                            &RunConfig::test_frac));
  keys.push_back(double_key("train_frac",
                            "share of remaining labeled nodes used for training",
                            &RunConfig::train_frac));
  keys.push_back(string_key("output_dir", "output directory", &RunConfig::output_dir));
  keys.push_back(string_key("checkpoint", "checkpoint path (default <output_dir>/model.ckpt)",
                            &RunConfig::checkpoint));
  keys.push_back(int_key("analyze_starts", "start nodes sampled by analyze",
                         &RunConfig::analyze_starts));
  keys.push_back(int_key("analyze_walks", "walks per start node in analyze",
                         &RunConfig::analyze_walks));
  keys.push_back(bool_key("diversity_exclude_start",
                          "sum path diversity over i = 1..t instead of 0..t",
                          &RunConfig::diversity_exclude_start));
  keys.push_back(int_key("gradcheck_instances", "random instances per kernel",
                         &RunConfig::gradcheck_instances));
  keys.push_back(bool_key("gradcheck_corrupt_gru",
                          "test fixture: perturb the GRU backward pass",
                          &RunConfig::gradcheck_corrupt_gru));
  return keys;
}

}  // namespace

std::filesystem::path RunConfig::checkpoint_path() const {
  if (!checkpoint.empty()) return checkpoint;
  return std::filesystem::path(output_dir) / "model.ckpt";
}

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = make_keys();
  return keys;
}

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
  for (const auto& k : config_keys()) {
    if (k.name == key) {
      k.set(cfg, value);
      return;
    }
  }
  throw UsageError("unknown config key '" + std::string(key) + "'");
}

std::map<std::string, std::string> read_config_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path.string());
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view s = line;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) {
      s = s.substr(0, hash);
    }
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError(path.string() + ":" + std::to_string(line_no) +
                       ": expected 'key = value'");
    }
    out[std::string(trim(s.substr(0, eq)))] = std::string(trim(s.substr(eq + 1)));
  }
  return out;
}

std::string format_resolved_config(const RunConfig& cfg) {
  std::ostringstream out;
  for (const auto& k : config_keys()) out << k.name << " = " << k.get(cfg) << '\n';
  return out.str();
}

PlantedPartitionSpec parse_synthetic_spec(std::string_view spec,
                                          std::uint64_t default_seed) {
  PlantedPartitionSpec out;
  out.seed = default_seed;
  for (auto part : split_char(trim(spec), ',')) {
    part = trim(part);
    if (part.empty()) continue;
    const auto eq = part.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError("synthetic spec entry '" + std::string(part) +
                       "' is not key=value");
    }
    const std::string key(trim(part.substr(0, eq)));
    const std::string_view value = trim(part.substr(eq + 1));
    if (key == "n") {
      out.n = to_int(key, value);
    } else if (key == "k") {
      out.k = static_cast<int>(to_int(key, value));
    } else if (key == "p_in") {
      out.p_in = to_double(key, value);
    } else if (key == "p_out") {
      out.p_out = to_double(key, value);
    } else if (key == "dim") {
      out.attr_dim = to_int(key, value);
    } else if (key == "noise") {
      out.noise_sigma = to_double(key, value);
    } else if (key == "sep") {
      out.class_separation = to_double(key, value);
    } else if (key == "seed") {
      out.seed = static_cast<std::uint64_t>(to_int(key, value));
    } else {
      throw UsageError("unknown synthetic spec key '" + key + "'");
    }
  }
  return out;
}

}  // namespace raw
