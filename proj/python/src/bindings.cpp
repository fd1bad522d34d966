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


#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "raw/analysis.hpp"
#include "raw/checkpoint.hpp"
#include "raw/cli.hpp"
#include "raw/error.hpp"
#include "raw/kernel_checks.hpp"
#include "raw/trainer.hpp"

namespace py = pybind11;
using namespace raw;

namespace {

void check_node(const AttributedGraph& g, NodeId v) {
  if (v < 0 || v >= g.num_nodes()) throw py::index_error("node out of range");
}

py::dict trajectory_dict(const Trajectory& t) {
  py::dict d;
  d["nodes"] = t.nodes;
  d["chosen_scores"] = t.chosen_scores;
  d["chosen_logprobs"] = t.chosen_logprobs;
  d["terminal_probs"] = std::vector<double>(
      t.terminal_probs.data(), t.terminal_probs.data() + t.terminal_probs.size());
  d["uniform_fallbacks"] = t.uniform_fallbacks;
  return d;
}

py::dict stats_dict(const EpochStats& s) {
  py::dict d;
  d["epoch"] = s.epoch;
  d["mean_reward"] = s.mean_reward;
  d["train_accuracy"] = s.train_accuracy;
  d["mean_loss"] = s.mean_loss;
  d["seconds"] = s.seconds;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Attention-guided random walk node classifier";

  static py::exception<Error> base(m, "RawError", PyExc_RuntimeError);
  static py::exception<UsageError> usage(m, "UsageError", base.ptr());
  static py::exception<NumericError> numeric(m, "NumericError", base.ptr());
  static py::exception<CompatibilityError> compat(m, "CompatibilityError",
                                                  base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const UsageError& e) {
      PyErr_SetString(usage.ptr(), e.what());
    } catch (const NumericError& e) {
      PyErr_SetString(numeric.ptr(), e.what());
    } catch (const CompatibilityError& e) {
      PyErr_SetString(compat.ptr(), e.what());
    } catch (const Error& e) {
      PyErr_SetString(base.ptr(), e.what());
    }
  });

  m.attr("UNLABELED") = kUnlabeled;

  py::class_<AttributedGraph>(m, "Graph")
      .def_property_readonly("num_nodes", &AttributedGraph::num_nodes)
      .def_property_readonly("num_edges", &AttributedGraph::num_edges)
      .def_property_readonly("num_classes", &AttributedGraph::num_classes)
      .def_property_readonly("node_attr_dim", &AttributedGraph::node_attr_dim)
      .def_property_readonly("edge_attr_dim", &AttributedGraph::edge_attr_dim)
      .def_property_readonly("labels", &AttributedGraph::labels)
      .def_property_readonly("node_attrs", &AttributedGraph::node_attrs)
      .def_property_readonly("edge_attrs", &AttributedGraph::edge_attrs)
      .def("degree",
           [](const AttributedGraph& g, NodeId v) {
             check_node(g, v);
             return g.degree(v);
           })
      .def("neighbors",
           [](const AttributedGraph& g, NodeId v) {
             check_node(g, v);
             std::vector<std::pair<NodeId, EdgeId>> out;
             for (const auto& n : g.neighbors(v)) out.emplace_back(n.node, n.edge);
             return out;
           },
           "List of (neighbor, edge id) pairs.")
      .def("normalized", &AttributedGraph::normalized)
      .def("save", [](const AttributedGraph& g, const std::filesystem::path& dir) {
        save_graph(g, dir);
      });

  m.def(
      "build_graph",
      [](std::int64_t num_nodes, std::vector<std::pair<NodeId, NodeId>> edges,
         RowMatrix node_attrs, std::vector<ClassId> labels, std::int64_t edge_attr_dim) {
        GraphInput in;
        in.num_nodes = num_nodes;
        in.edges = std::move(edges);
        in.node_attrs = std::move(node_attrs);
        in.labels = std::move(labels);
        in.edge_attr_dim = edge_attr_dim;
        return AttributedGraph::build(std::move(in));
      },
      py::arg("num_nodes"), py::arg("edges"), py::arg("node_attrs"),
      py::arg("labels") = std::vector<ClassId>{}, py::arg("edge_attr_dim") = 0);

  m.def(
      "load_graph",
      [](const std::filesystem::path& edges, const std::filesystem::path& attrs,
         const std::filesystem::path& labels,
         std::optional<std::filesystem::path> edge_attrs, std::int64_t edge_dim) {
        return load_graph(edges, attrs, edge_attrs, labels, edge_dim);
      },
      py::arg("edge_file"), py::arg("node_attr_file"), py::arg("label_file"),
      py::arg("edge_attr_file") = py::none(), py::arg("edge_attr_dim") = 0);

  m.def(
      "planted_partition",
      [](std::int64_t n, int k, double p_in, double p_out, std::int64_t dim,
         double noise, double sep, std::uint64_t seed) {
        PlantedPartitionSpec s;
        s.n = n;
        s.k = k;
        s.p_in = p_in;
        s.p_out = p_out;
        s.attr_dim = dim;
        s.noise_sigma = noise;
        s.class_separation = sep;
        s.seed = seed;
        return synth_planted_partition(s);
      },
      py::arg("n") = 200, py::arg("k") = 2, py::arg("p_in") = 0.05,
      py::arg("p_out") = 0.005, py::arg("attr_dim") = 16, py::arg("noise") = 0.1,
      py::arg("class_separation") = 0.2, py::arg("seed") = 0);

  py::class_<LabelSplit>(m, "LabelSplit")
      .def(py::init<>())
      .def_readwrite("train_ids", &LabelSplit::train_ids)
      .def_readwrite("test_ids", &LabelSplit::test_ids)
      .def_readwrite("unlabeled_ids", &LabelSplit::unlabeled_ids);
  m.def("split_labels", &split_labels, py::arg("graph"), py::arg("test_frac") = 0.3,
        py::arg("train_frac") = 1.0, py::arg("seed") = 0);

  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("T", &TrainConfig::T)
      .def_readwrite("m_train", &TrainConfig::m_train)
      .def_readwrite("m_test", &TrainConfig::m_test)
      .def_readwrite("gamma", &TrainConfig::gamma)
      .def_readwrite("lr", &TrainConfig::lr)
      .def_readwrite("hidden_dim", &TrainConfig::hidden_dim)
      .def_readwrite("epochs", &TrainConfig::epochs)
      .def_readwrite("l2", &TrainConfig::l2)
      .def_readwrite("seed", &TrainConfig::seed)
      .def_readwrite("threads", &TrainConfig::threads)
      .def_readwrite("supervised_to_core", &TrainConfig::supervised_to_core)
      .def_readwrite("reward_from_ensemble", &TrainConfig::reward_from_ensemble)
      .def_readwrite("reward_baseline", &TrainConfig::reward_baseline)
      .def("validate", &TrainConfig::validate);

  py::class_<Model>(m, "Model")
      .def(py::init([](std::int64_t node_dim, std::int64_t edge_dim,
                       std::int64_t hidden, std::int64_t classes) {
             return Model(ModelDims{node_dim, edge_dim, hidden, classes});
           }),
           py::arg("node_dim"), py::arg("edge_dim"), py::arg("hidden"),
           py::arg("num_classes"))
      .def("init", &Model::init, py::arg("seed"))
      .def_property_readonly("dims",
                             [](const Model& mdl) {
                               return py::make_tuple(mdl.dims.node_dim, mdl.dims.edge_dim,
                                                     mdl.dims.hidden, mdl.dims.num_classes);
                             })
      .def("parameters",
           [](const Model& mdl) {
             py::dict d;
             for (const ParamGroup* g : mdl.groups()) {
               for (const Param& p : *g) d[py::str(g->name() + "." + p.name)] = p.value;
             }
             return d;
           })
      .def("save", [](const Model& mdl, const std::filesystem::path& p) {
        save_checkpoint(p, mdl);
      });

  m.def("model_for", [](const AttributedGraph& g, const TrainConfig& cfg) {
    return Model(model_dims(g, cfg));
  });
  m.def("load_checkpoint",
        [](const std::filesystem::path& p) { return load_checkpoint(p); });

  py::class_<TrainResult>(m, "TrainResult")
      .def_readonly("final_model", &TrainResult::final_model)
      .def_readonly("best_model", &TrainResult::best_model)
      .def_readonly("best_epoch", &TrainResult::best_epoch)
      .def_property_readonly("history", [](const TrainResult& r) {
        py::list out;
        for (const auto& s : r.history) out.append(stats_dict(s));
        return out;
      });

  m.def(
      "train",
      [](const AttributedGraph& g, const LabelSplit& split, const TrainConfig& cfg) {
        py::gil_scoped_release release;
        return train(g, split, cfg);
      },
      py::arg("graph"), py::arg("split"), py::arg("config"));

  m.def(
      "evaluate",
      [](const AttributedGraph& g, const std::vector<NodeId>& ids, const Model& mdl,
         const TrainConfig& cfg) {
        EvalReport r;
        {
          py::gil_scoped_release release;
          r = evaluate(g, ids, mdl, cfg);
        }
        py::dict d;
        d["accuracy"] = r.accuracy;
        d["class_accuracy"] = r.class_accuracy;
        d["class_count"] = r.class_count;
        d["predictions"] = r.predictions;
        return d;
      },
      py::arg("graph"), py::arg("ids"), py::arg("model"), py::arg("config"));

  m.def(
      "walk",
      [](const AttributedGraph& g, NodeId start, int T, const Model& mdl,
         std::uint64_t seed) {
        check_node(g, start);
        Rng rng(seed);
        Trajectory t = walk(GraphView(g), start, T, mdl, rng);
        classify_trajectory(mdl, t);
        return trajectory_dict(t);
      },
      py::arg("graph"), py::arg("start"), py::arg("T"), py::arg("model"),
      py::arg("seed") = 0);

  m.def(
      "predict",
      [](const AttributedGraph& g, NodeId start, const Model& mdl, int m_test, int T,
         std::uint64_t seed) {
        check_node(g, start);
        const Prediction p = predict(GraphView(g), start, mdl, m_test, T, seed);
        return py::make_tuple(p.label, Eigen::VectorXd(p.mean_probs));
      },
      py::arg("graph"), py::arg("start"), py::arg("model"), py::arg("m_test") = 10,
      py::arg("T") = 10, py::arg("seed") = 0);

  m.def("path_label_diversity",
        [](const std::vector<ClassId>& labels, int t, bool exclude_start) {
          return path_label_diversity(labels, t, exclude_start);
        },
        py::arg("labels"), py::arg("t"), py::arg("exclude_start") = false);

  m.def(
      "kernel_checks",
      [](int instances, std::uint64_t seed) {
        KernelCheckOptions o;
        o.instances = instances;
        o.seed = seed;
        py::list out;
        for (const auto& r : run_kernel_checks(o)) {
          py::dict d;
          d["kernel"] = r.kernel;
          d["max_rel_error"] = r.max_rel_error;
          d["instances"] = r.instances;
          d["passed"] = r.passed;
          out.append(d);
        }
        return out;
      },
      py::arg("instances") = 100, py::arg("seed") = 2024);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command line tool; returns (code, stdout, stderr).");
}
