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

#include <filesystem>
#include <sstream>

#include "raw/analysis.hpp"
#include "raw/cli.hpp"
#include "raw/config.hpp"
#include "raw/error.hpp"
#include "raw/text.hpp"
#include "test_util.hpp"

namespace raw {
namespace {

namespace fs = std::filesystem;
using testing::read_file;
using testing::TempDir;
using testing::write_file;

int run(std::vector<std::string> args, std::string* out_text = nullptr) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  if (out_text) *out_text = out.str() + err.str();
  return code;
}

std::vector<std::vector<std::string>> read_tsv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(read_file(p));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string f;
    while (std::getline(ls, f, '\t')) fields.push_back(f);
    rows.push_back(fields);
  }
  return rows;
}

TEST(Config, ApplySetting) {
  RunConfig cfg;
  apply_setting(cfg, "epochs", "12");
  apply_setting(cfg, "lr", "0.01");
  apply_setting(cfg, "mode", "inductive");
  apply_setting(cfg, "normalize", "false");
  EXPECT_EQ(cfg.train.epochs, 12);
  EXPECT_EQ(cfg.train.lr, 0.01);
  EXPECT_EQ(cfg.mode, Mode::kInductive);
  EXPECT_FALSE(cfg.normalize);
  EXPECT_THROW(apply_setting(cfg, "no_such_key", "1"), UsageError);
  EXPECT_THROW(apply_setting(cfg, "epochs", "twelve"), UsageError);
  EXPECT_THROW(apply_setting(cfg, "mode", "sideways"), UsageError);
}

TEST(Config, CheckpointPathDefault) {
  RunConfig cfg;
  cfg.output_dir = "out";
  EXPECT_EQ(cfg.checkpoint_path(), fs::path("out") / "model.ckpt");
  cfg.checkpoint = "x.ckpt";
  EXPECT_EQ(cfg.checkpoint_path(), fs::path("x.ckpt"));
}

TEST(Config, ResolvedConfigListsEveryKey) {
  RunConfig cfg;
  const std::string text = format_resolved_config(cfg);
  for (const auto& k : config_keys()) {
    EXPECT_NE(text.find(k.name + " = "), std::string::npos) << k.name;
  }
}

TEST(Config, FileParsing) {
  TempDir dir;
  write_file(dir.path() / "c.cfg", "# comment\nepochs = 4\n\n  seed=9  # trailing\n");
  const auto m = read_config_file(dir.path() / "c.cfg");
  EXPECT_EQ(m.at("epochs"), "4");
  EXPECT_EQ(m.at("seed"), "9");
  write_file(dir.path() / "bad.cfg", "epochs 4\n");
  EXPECT_THROW(read_config_file(dir.path() / "bad.cfg"), Error);
}

TEST(Config, SyntheticSpec) {
  const auto s = parse_synthetic_spec("n=50,k=3,p_in=0.2,seed=4", 1);
  EXPECT_EQ(s.n, 50);
  EXPECT_EQ(s.k, 3);
  EXPECT_EQ(s.p_in, 0.2);
  EXPECT_EQ(s.seed, 4u);
  EXPECT_EQ(parse_synthetic_spec("n=50", 7).seed, 7u);
  EXPECT_THROW(parse_synthetic_spec("n=50,bogus=1", 1), UsageError);
  EXPECT_THROW(parse_synthetic_spec("n", 1), UsageError);
}

TEST(Cli, Precedence) {
  // defaults < config file < flags
  TempDir dir;
  write_file(dir.path() / "c.cfg", "epochs = 4\nseed = 11\n");
  const std::string out = (dir.path() / "out").string();
  ASSERT_EQ(run({"ingest", "--config", (dir.path() / "c.cfg").string(), "--seed",
                 "12", "--synthetic", "n=40,k=2", "--output-dir", out}),
            0);
  const auto rows = read_file(fs::path(out) / "resolved_config.txt");
  EXPECT_NE(rows.find("epochs = 4\n"), std::string::npos);
  EXPECT_NE(rows.find("seed = 12\n"), std::string::npos);
  EXPECT_NE(rows.find("m_train = 5\n"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  TempDir dir;
  const std::string out = (dir.path() / "out").string();
  EXPECT_EQ(run({"train", "--no-such-flag", "1"}), 1);
  EXPECT_EQ(run({"frobnicate"}), 1);
  EXPECT_EQ(run({}), 1);
  write_file(dir.path() / "c.cfg", "not_a_key = 3\n");
  EXPECT_EQ(run({"ingest", "--config", (dir.path() / "c.cfg").string(),
                 "--synthetic", "n=40", "--output-dir", out}),
            1);
  EXPECT_EQ(run({"train", "--synthetic", "n=40", "--T", "1", "--output-dir", out}), 1);
  EXPECT_EQ(run({"--help"}), 0);
}

TEST(Cli, DataErrors) {
  TempDir dir;
  const std::string out = (dir.path() / "out").string();
  write_file(dir.path() / "attrs.txt", "DIM 2\n0.1 0.2\n0.3 0.4\n0.5 0.6\n");
  write_file(dir.path() / "labels.tsv", "0\t0\n1\t1\n");
  const auto ingest = [&](const std::string& edges, std::string* msg = nullptr) {
    return run({"ingest", "--edge-file", edges, "--node-attr-file",
                (dir.path() / "attrs.txt").string(), "--label-file",
                (dir.path() / "labels.tsv").string(), "--output-dir", out},
               msg);
  };
  EXPECT_EQ(ingest((dir.path() / "missing.tsv").string()), 2);
  write_file(dir.path() / "edges.tsv", "0\t1\n1\tbanana\n");
  std::string msg;
  EXPECT_EQ(ingest((dir.path() / "edges.tsv").string(), &msg), 2);
  EXPECT_NE(msg.find(":2"), std::string::npos) << msg;
  write_file(dir.path() / "edges.tsv", "0\t1\n1\t2\n");
  EXPECT_EQ(ingest((dir.path() / "edges.tsv").string()), 0);
  // Files and a synthetic spec together are ambiguous.
  EXPECT_EQ(run({"ingest", "--synthetic", "n=40", "--edge-file",
                 (dir.path() / "edges.tsv").string(), "--output-dir", out}),
            1);
}

TEST(Cli, SynthThenIngestFiles) {
  TempDir dir;
  const fs::path data = dir.path() / "data";
  ASSERT_EQ(run({"synth", "--synthetic", "n=60,k=3,seed=2", "--output-dir",
                 data.string()}),
            0);
  const fs::path out = dir.path() / "ingest";
  ASSERT_EQ(run({"ingest", "--edge-file", (data / "edges.tsv").string(),
                 "--node-attr-file", (data / "node_attrs.txt").string(),
                 "--edge-attr-file", (data / "edge_attrs.txt").string(),
                 "--label-file", (data / "labels.tsv").string(), "--output-dir",
                 out.string()}),
            0);
  const std::string summary = read_file(out / "graph_summary.txt");
  EXPECT_NE(summary.find("nodes = 60\n"), std::string::npos) << summary;
  EXPECT_NE(summary.find("classes = 3\n"), std::string::npos) << summary;
}

TEST(Cli, GradcheckExitCodes) {
  TempDir dir;
  const std::string out = dir.path().string();
  EXPECT_EQ(run({"gradcheck", "--gradcheck-instances", "3", "--output-dir", out}), 0);
  const auto rows = read_tsv(dir.path() / "gradcheck_report.tsv");
  EXPECT_GE(rows.size(), 5u);
  EXPECT_EQ(run({"gradcheck", "--gradcheck-instances", "3", "--mutate-gru",
                 "--output-dir", out}),
            3);
}

TEST(Cli, UntrainedEvalNearChance) {
  // Zero epochs leaves the model at its initialization.
  TempDir dir;
  const std::string out = dir.path().string();
  ASSERT_EQ(run({"train", "--synthetic", "n=200,k=2", "--epochs", "0",
                 "--hidden-dim", "16", "--output-dir", out}),
            0);
  ASSERT_EQ(run({"eval", "--synthetic", "n=200,k=2", "--hidden-dim", "16",
                 "--output-dir", out}),
            0);
  const auto rows = read_tsv(dir.path() / "eval_report.tsv");
  ASSERT_FALSE(rows.empty());
  EXPECT_EQ(rows[0][0], "accuracy");
  EXPECT_NEAR(std::stod(rows[0][1]), 0.5, 0.1);
}

TEST(Cli, EvalRejectsMismatchedCheckpoint) {
  TempDir dir;
  const std::string out = dir.path().string();
  ASSERT_EQ(run({"train", "--synthetic", "n=60,k=2", "--epochs", "0",
                 "--hidden-dim", "8", "--output-dir", out}),
            0);
  EXPECT_EQ(run({"eval", "--synthetic", "n=60,k=2", "--hidden-dim", "9",
                 "--output-dir", out}),
            2);
}

// One 30-epoch run, then eval and analyze on its output.
TEST(Cli, TrainEvalAnalyze) {
  TempDir tmp;
  const fs::path dir = tmp.path();
  ASSERT_EQ(run({"train", "--synthetic", "n=200,k=2", "--epochs", "30", "--seed",
                 "7", "--output-dir", dir.string()}),
            0);
  EXPECT_TRUE(fs::exists(dir / "model.ckpt"));
  EXPECT_TRUE(fs::exists(dir / "final.ckpt"));
  EXPECT_TRUE(fs::exists(dir / "resolved_config.txt"));
  const auto log = read_tsv(dir / "train_log.tsv");
  ASSERT_EQ(log.size(), 30u);
  for (std::size_t i = 0; i < log.size(); ++i) {
    ASSERT_EQ(log[i].size(), 5u);
    EXPECT_EQ(std::stoi(log[i][0]), static_cast<int>(i));
  }
  // Reward trend: the last five epochs beat the first five on average.
  double first = 0.0, last = 0.0;
  for (int i = 0; i < 5; ++i) {
    first += std::stod(log[static_cast<std::size_t>(i)][1]);
    last += std::stod(log[log.size() - 5 + static_cast<std::size_t>(i)][1]);
  }
  EXPECT_GT(last, first);
  EXPECT_GT(std::stod(log.back()[2]), 0.9);

  const auto recs = read_trajectory_dump(dir / "trajectories.tsv");
  EXPECT_EQ(recs.size(), 60u);
  for (const auto& r : recs) {
    EXPECT_EQ(r.nodes.size(), 10u);
    EXPECT_EQ(r.chosen_scores.size(), 9u);
    EXPECT_EQ(r.terminal_probs.size(), 2u);
  }

  ASSERT_EQ(run({"eval", "--synthetic", "n=200,k=2", "--seed", "7",
                 "--output-dir", dir.string()}),
            0);
  const auto rows = read_tsv(dir / "eval_report.tsv");
  EXPECT_GT(std::stod(rows[0][1]), 0.75);
  EXPECT_EQ(rows[1][1], "transductive");
  EXPECT_EQ(rows[2][1], "60");

  ASSERT_EQ(run({"analyze", "--synthetic", "n=200,k=2", "--seed", "7",
                 "--analyze-starts", "8", "--analyze-walks", "3", "--output-dir",
                 dir.string()}),
            0);
  for (const std::string name : {"agent", "random"}) {
    EXPECT_EQ(read_trajectory_dump(dir / ("trajectories_" + name + ".tsv")).size(),
              24u);
    EXPECT_EQ(read_diversity_curve(dir / ("diversity_" + name + ".tsv")).size(),
              9u);
    const auto m = read_visit_matrix(dir / ("visit_matrix_" + name + ".tsv"));
    EXPECT_EQ(m.rows(), 2);
    EXPECT_EQ(m.cols(), 2);
  }
}

TEST(Cli, InductiveTrainAndEval) {
  TempDir dir;
  const std::string out = dir.path().string();
  const std::vector<std::string> common = {"--synthetic", "n=80,k=2", "--mode",
                                           "inductive", "--hidden-dim", "8",
                                           "--output-dir", out};
  auto train_args = common;
  train_args.insert(train_args.begin(), {"train", "--epochs", "2"});
  ASSERT_EQ(run(train_args), 0);
  auto eval_args = common;
  eval_args.insert(eval_args.begin(), "eval");
  ASSERT_EQ(run(eval_args), 0);
  const auto rows = read_tsv(dir.path() / "eval_report.tsv");
  EXPECT_EQ(rows[1][1], "inductive");
  EXPECT_EQ(rows[2][1], "24");
}

}  // namespace
}  // namespace raw
