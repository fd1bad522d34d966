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

#include "raw/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "raw/analysis.hpp"
#include "raw/checkpoint.hpp"
#include "raw/error.hpp"
#include "raw/kernel_checks.hpp"
#include "raw/text.hpp"
#include "raw/trainer.hpp"

namespace fs = std::filesystem;

namespace raw {

namespace {

constexpr std::uint64_t kAnalyzeStream = 0x616e616c797a65;  // "analyze"

constexpr const char* kResolvedConfig = "resolved_config.txt";

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path.string());
  f << content;
  if (!f) throw UsageError("write failed for " + path.string());
}

fs::path prepare_output(const RunConfig& cfg) {
  const fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw UsageError("cannot create output directory " + dir.string());
  write_text(dir / kResolvedConfig, format_resolved_config(cfg));
  return dir;
}

// Full graph, label split, and the graph used for prediction. In inductive
// mode the training graph has the test nodes removed and the prediction graph
// re-inserts them.
struct RunData {
  AttributedGraph full;
  LabelSplit split;
  std::optional<InductiveGraph> pruned;
  LabelSplit train_split;  // ids in the training graph

  const AttributedGraph& train_graph() const {
    return pruned ? pruned->graph : full;
  }
};

RunData prepare_data(const RunConfig& cfg) {
  RunData d;
  d.full = load_run_graph(cfg);
  d.split = split_labels(d.full, cfg.test_frac, cfg.train_frac, cfg.train.seed);
  if (cfg.mode == Mode::kInductive) {
    d.pruned = prune_for_inductive(d.full, d.split.test_ids);
    for (const NodeId v : d.split.train_ids) {
      d.train_split.train_ids.push_back(d.pruned->from_original[v]);
    }
    for (const NodeId v : d.split.unlabeled_ids) {
      d.train_split.unlabeled_ids.push_back(d.pruned->from_original[v]);
    }
  } else {
    d.train_split = d.split;
  }
  return d;
}

AttributedGraph prediction_graph(const RunData& d) {
  return d.pruned ? reinsert_hidden(*d.pruned) : d.full;
}

std::string format_log_line(const EpochStats& s) {
  std::ostringstream line;
  line << s.epoch << '\t' << format_double(s.mean_reward) << '\t'
       << format_double(s.train_accuracy) << '\t' << format_double(s.mean_loss)
       << '\t' << format_double(s.seconds) << '\n';
  return line.str();
}

std::string format_eval_report(const EvalReport& r, const RunConfig& cfg,
                               std::size_t test_nodes) {
  std::ostringstream out;
  out << "accuracy\t" << format_double(r.accuracy) << '\n';
  out << "mode\t" << (cfg.mode == Mode::kInductive ? "inductive" : "transductive")
      << '\n';
  out << "test_nodes\t" << test_nodes << '\n';
  out << "class\tcount\taccuracy\n";
  for (std::size_t c = 0; c < r.class_accuracy.size(); ++c) {
    out << c << '\t' << r.class_count[c] << '\t';
    if (std::isnan(r.class_accuracy[c])) {
      out << "nan";
    } else {
      out << format_double(r.class_accuracy[c]);
    }
    out << '\n';
  }
  return out.str();
}

std::string dashed(const std::string& key) {
  std::string s = key;
  std::replace(s.begin(), s.end(), '_', '-');
  return s;
}

}  // namespace

AttributedGraph load_run_graph(const RunConfig& cfg) {
  AttributedGraph g;
  const bool has_files = !cfg.edge_file.empty() || !cfg.node_attr_file.empty() ||
                         !cfg.edge_attr_file.empty() || !cfg.label_file.empty();
  if (!cfg.synthetic.empty() && has_files) {
    throw UsageError("synthetic cannot be combined with input files");
  }
  if (!cfg.synthetic.empty()) {
    g = synth_planted_partition(parse_synthetic_spec(cfg.synthetic, cfg.train.seed));
  } else {
    if (cfg.edge_file.empty() || cfg.node_attr_file.empty() ||
        cfg.label_file.empty()) {
      throw UsageError(
          "no data: set synthetic, or edge_file, node_attr_file and label_file");
    }
    std::optional<fs::path> edge_attrs;
    if (!cfg.edge_attr_file.empty()) edge_attrs = cfg.edge_attr_file;
    g = load_graph(cfg.edge_file, cfg.node_attr_file, edge_attrs, cfg.label_file,
                   cfg.edge_attr_dim);
  }
  return cfg.normalize ? normalize_attributes(g) : g;
}

int cmd_ingest(const RunConfig& cfg, std::ostream& out) {
  const AttributedGraph g = load_run_graph(cfg);
  const fs::path dir = prepare_output(cfg);
  std::int64_t labeled = 0;
  std::int64_t self_loops = 0;
  for (const ClassId c : g.labels()) labeled += c != kUnlabeled;
  for (const auto& e : g.edges()) self_loops += e.synthetic;
  std::ostringstream s;
  s << "nodes = " << g.num_nodes() << '\n'
    << "edges = " << g.num_edges() << '\n'
    << "synthetic_self_loops = " << self_loops << '\n'
    << "node_attr_dim = " << g.node_attr_dim() << '\n'
    << "edge_attr_dim = " << g.edge_attr_dim() << '\n'
    << "classes = " << g.num_classes() << '\n'
    << "labeled = " << labeled << '\n'
    << "max_degree = " << g.max_degree() << '\n';
  write_text(dir / "graph_summary.txt", s.str());
  out << s.str();
  return 0;
}

int cmd_synth(const RunConfig& cfg, std::ostream& out) {
  const AttributedGraph g =
      synth_planted_partition(parse_synthetic_spec(cfg.synthetic, cfg.train.seed));
  const fs::path dir = prepare_output(cfg);
  save_graph(g, dir);
  out << "wrote " << g.num_nodes() << " nodes, " << g.num_edges()
      << " edges to " << dir.string() << '\n';
  return 0;
}

int cmd_train(const RunConfig& cfg, std::ostream& out) {
  cfg.train.validate();
  const RunData data = prepare_data(cfg);
  const fs::path dir = prepare_output(cfg);

  std::ofstream log(dir / "train_log.tsv", std::ios::binary);
  if (!log) throw UsageError("cannot write training log");
  TrainHooks hooks;
  hooks.on_epoch = [&](const EpochStats& s) {
    log << format_log_line(s) << std::flush;
    out << "epoch " << s.epoch << "  reward " << format_double(s.mean_reward)
        << "  train_acc " << format_double(s.train_accuracy) << '\n';
  };
  hooks.on_numeric_failure = [&](const Model& m) {
    save_checkpoint(dir / "diagnostic.ckpt", m);
  };
  const TrainResult result =
      train(data.train_graph(), data.train_split, cfg.train, hooks);

  save_checkpoint(cfg.checkpoint_path(), result.best_model);
  save_checkpoint(dir / "final.ckpt", result.final_model);

  // One prediction walk per test node on the graph used for evaluation.
  const AttributedGraph eval_graph = prediction_graph(data);
  const GraphView view(eval_graph);
  std::vector<Trajectory> trajs;
  for (const NodeId v : data.split.test_ids) {
    Rng rng(predict_walk_seed(cfg.train.seed, v, 0));
    Trajectory t = walk(view, v, cfg.train.T, result.best_model, rng);
    classify_trajectory(result.best_model, t);
    trajs.push_back(std::move(t));
  }
  write_trajectory_dump(dir / "trajectories.tsv", trajs);
  out << "best epoch " << result.best_epoch << ", checkpoint "
      << cfg.checkpoint_path().string() << '\n';
  return 0;
}

int cmd_eval(const RunConfig& cfg, std::ostream& out) {
  cfg.train.validate();
  const RunData data = prepare_data(cfg);
  const AttributedGraph eval_graph = prediction_graph(data);
  const Model model = load_checkpoint(
      cfg.checkpoint_path(), config_hash(model_dims(eval_graph, cfg.train)));
  const fs::path dir = prepare_output(cfg);
  const EvalReport report =
      evaluate(eval_graph, data.split.test_ids, model, cfg.train);
  const std::string text =
      format_eval_report(report, cfg, data.split.test_ids.size());
  write_text(dir / "eval_report.tsv", text);
  out << text;
  return 0;
}

int cmd_analyze(const RunConfig& cfg, std::ostream& out) {
  cfg.train.validate();
  if (cfg.analyze_starts < 1) throw UsageError("analyze_starts must be >= 1");
  const RunData data = prepare_data(cfg);
  const AttributedGraph g = prediction_graph(data);
  const Model model = load_checkpoint(cfg.checkpoint_path(),
                                      config_hash(model_dims(g, cfg.train)));
  const fs::path dir = prepare_output(cfg);

  std::vector<NodeId> starts = data.split.test_ids;
  if (starts.empty()) throw UsageError("no test nodes to start walks from");
  Rng pick(derive_seed(cfg.train.seed, {kAnalyzeStream}));
  pick.shuffle(starts);
  starts.resize(std::min<std::size_t>(starts.size(),
                                      static_cast<std::size_t>(cfg.analyze_starts)));

  const PolicyComparison runs =
      sample_policies(GraphView(g), model, starts, cfg.analyze_walks,
                      cfg.train.T, cfg.train.seed);
  const auto report = [&](const std::string& name,
                          const std::vector<Trajectory>& trajs) {
    const auto paths = label_paths(g, trajs);
    write_trajectory_dump(dir / ("trajectories_" + name + ".tsv"), trajs);
    write_diversity_curve(dir / ("diversity_" + name + ".tsv"),
                          diversity_curves(paths, cfg.diversity_exclude_start));
    write_visit_matrix(dir / ("visit_matrix_" + name + ".tsv"),
                       class_visit_matrix(trajs, g.labels(), g.num_classes()));
  };
  report("agent", runs.trained);
  report("random", runs.random);
  out << "analyzed " << runs.trained.size() << " agent and "
      << runs.random.size() << " random walks from " << starts.size()
      << " start nodes into " << dir.string() << '\n';
  return 0;
}

int cmd_gradcheck(const RunConfig& cfg, std::ostream& out) {
  KernelCheckOptions opts;
  opts.instances = cfg.gradcheck_instances;
  opts.seed = derive_seed(cfg.train.seed, {0x6763});
  opts.corrupt_gru_backward = cfg.gradcheck_corrupt_gru;
  if (opts.instances < 1) throw UsageError("gradcheck_instances must be >= 1");
  const fs::path dir = prepare_output(cfg);

  const auto reports = run_kernel_checks(opts);
  std::ostringstream s;
  s << "kernel\tmax_rel_error\tinstances\tstatus\n";
  bool all = true;
  for (const auto& r : reports) {
    s << r.kernel << '\t' << format_double(r.max_rel_error) << '\t' << r.instances
      << '\t' << (r.passed ? "pass" : "FAIL") << '\n';
    all = all && r.passed;
  }
  write_text(dir / "gradcheck_report.tsv", s.str());
  out << s.str();
  return all ? 0 : static_cast<int>(ExitCode::kNumeric);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Recurrent attention walk: node classification on attributed graphs"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "expand help for every command");

  using Command = int (*)(const RunConfig&, std::ostream&);
  const std::vector<std::tuple<std::string, std::string, Command>> commands = {
      {"ingest", "load and validate graph files, print a summary", cmd_ingest},
      {"synth", "write a planted-partition graph in the file formats", cmd_synth},
      {"train", "train a model and write a checkpoint", cmd_train},
      {"eval", "evaluate a checkpoint on the test nodes", cmd_eval},
      {"analyze", "trajectory diversity and class-visit analysis", cmd_analyze},
      {"gradcheck", "finite-difference check of every backward pass", cmd_gradcheck},
  };

  std::string config_file;
  std::vector<std::pair<std::string, std::string>> flags;
  std::map<CLI::App*, Command> dispatch;
  for (const auto& [name, help, fn] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_file, "key = value config file");
    for (const auto& key : config_keys()) {
      const std::string k = key.name;
      sub->add_option_function<std::string>(
          "--" + dashed(k),
          [&flags, k](const std::string& v) { flags.emplace_back(k, v); },
          key.help);
    }
    if (name == "gradcheck") {
      sub->add_flag_callback(
          "--mutate-gru",
          [&flags] { flags.emplace_back("gradcheck_corrupt_gru", "true"); },
          "test fixture: perturb the GRU backward pass");
    }
    dispatch[sub] = fn;
  }

  std::vector<char*> argv;
  std::string prog = "raw";
  argv.push_back(prog.data());
  std::vector<std::string> owned = args;
  for (auto& a : owned) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : static_cast<int>(ExitCode::kUsage);
  }

  try {
    RunConfig cfg;
    if (!config_file.empty()) {
      for (const auto& [k, v] : read_config_file(config_file)) {
        apply_setting(cfg, k, v);
      }
    }
    for (const auto& [k, v] : flags) apply_setting(cfg, k, v);
    for (const auto& [sub, fn] : dispatch) {
      if (sub->parsed()) return fn(cfg, out);
    }
    return static_cast<int>(ExitCode::kUsage);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::kData);
  }
}

}  // namespace raw
