// Copyright 2026 The mcsvm Authors.
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

#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>
#include <string>

#include "mcsvm/dataset.hpp"
#include "mcsvm/errors.hpp"
#include "mcsvm/eval.hpp"
#include "mcsvm/llw.hpp"
#include "mcsvm/model.hpp"
#include "mcsvm/ovr.hpp"
#include "mcsvm/sched.hpp"
#include "mcsvm/solver.hpp"
#include "mcsvm/ww.hpp"

namespace py = pybind11;
using namespace mcsvm;

namespace {

py::dict stats_dict(const TrainStats& s) {
  py::list epochs;
  for (const EpochStats& e : s.epochs) {
    py::dict d;
    d["epoch"] = e.epoch;
    d["dual"] = e.dual;
    d["primal"] = e.primal;
    d["gap"] = e.gap;
    d["active"] = e.active;
    d["updates"] = e.updates;
    d["full_pass"] = e.full_pass;
    d["seconds"] = e.seconds;
    epochs.append(d);
  }
  py::dict out;
  out["converged"] = s.converged;
  out["initial_dual"] = s.initial_dual;
  out["initial_primal"] = s.initial_primal;
  out["seconds"] = s.seconds;
  out["epochs"] = epochs;
  return out;
}

py::tuple train(const std::string& solver, const SparseDataset& ds, const SolverConfig& config) {
  TrainStats stats;
  WeightMatrix w;
  double alpha_pct = std::numeric_limits<double>::quiet_NaN();
  {
    py::gil_scoped_release release;
    if (solver == "llw") {
      LlwResult r = llw_train(ds, config);
      w = std::move(r.weights);
      stats = std::move(r.stats);
      alpha_pct = alpha_density(r.state);
    } else if (solver == "ww") {
      WwResult r = ww_train(ds, config);
      w = std::move(r.weights);
      stats = std::move(r.stats);
      alpha_pct = alpha_density(r.state);
    } else if (solver == "ovr") {
      OvrResult r = ovr_train(ds, config);
      w = std::move(r.weights);
      stats = std::move(r.stats);
    } else {
      throw InvalidArgument("unknown solver '" + solver + "' (llw, ww, ovr)");
    }
  }
  py::dict info = stats_dict(stats);
  info["alpha_density_pct"] = alpha_pct;
  return py::make_tuple(std::move(w), info);
}

py::array_t<double> weights_array(const WeightMatrix& w) {
  py::array_t<double> out({w.num_classes(), static_cast<std::size_t>(w.dim())});
  auto view = out.mutable_unchecked<2>();
  for (std::size_t c = 0; c < w.num_classes(); ++c) {
    const auto col = w.column(static_cast<ClassId>(c));
    for (std::size_t j = 0; j < col.size(); ++j) view(c, j) = col[j];
  }
  return out;
}

std::vector<std::string> predict_labels(const WeightMatrix& w, const SparseDataset& ds, std::size_t workers) {
  std::vector<std::string> out;
  for (ClassId c : predict_all(w, ds, workers)) out.push_back(w.label_names().at(static_cast<std::size_t>(c)));
  return out;
}

py::dict report_dict(const EvalReport& r) {
  py::dict d;
  d["samples"] = r.samples;
  d["errors"] = r.errors;
  d["unknown_labels"] = r.unknown_labels;
  d["error_pct"] = r.error_pct;
  d["micro_f1_pct"] = r.micro_f1_pct;
  d["macro_f1_pct"] = r.macro_f1_pct;
  d["model_density_pct"] = r.model_density_pct;
  py::list classes;
  for (const ClassReport& k : r.classes) {
    py::dict c;
    c["label"] = k.label;
    c["support"] = k.support;
    c["tp"] = k.tp;
    c["fp"] = k.fp;
    c["fn"] = k.fn;
    c["precision_pct"] = k.precision_pct;
    c["recall_pct"] = k.recall_pct;
    c["f1_pct"] = k.f1_pct;
    classes.append(c);
  }
  d["classes"] = classes;
  return d;
}

}  // namespace

PYBIND11_MODULE(_mcsvm, m) {
  m.doc() = "Multi-class linear SVM training by dual coordinate ascent (LLW, WW, one-vs-rest).";

  // Translators run newest first, so the base class goes first.
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ModelFormatError>(m, "ModelFormatError", PyExc_ValueError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);

  py::class_<SparseDataset>(m, "Dataset")
      .def_property_readonly("size", &SparseDataset::size)
      .def_property_readonly("dim", &SparseDataset::dim)
      .def_property_readonly("num_classes", &SparseDataset::num_classes)
      .def_property_readonly("nnz", &SparseDataset::nnz)
      .def_property_readonly("label_names", [](const SparseDataset& ds) { return ds.dictionary().names(); })
      .def_property_readonly("labels",
                             [](const SparseDataset& ds) {
                               std::vector<std::string> out;
                               for (ClassId y : ds.labels()) out.push_back(ds.dictionary().name(y));
                               return out;
                             })
      .def("fingerprint", &SparseDataset::fingerprint)
      .def("to_libsvm",
           [](const SparseDataset& ds) {
             std::ostringstream out;
             write_libsvm(ds, out);
             return out.str();
           })
      .def("__len__", &SparseDataset::size);

  m.def("parse_libsvm", [](const std::string& text) { return parse_libsvm(std::string_view(text)); }, py::arg("text"),
        "Dataset from LIBSVM-format text.");
  m.def("load_libsvm", [](const std::filesystem::path& path) { return load_libsvm(path); }, py::arg("path"));
  m.def(
      "normalize",
      [](const SparseDataset& ds, const std::string& mode) { return normalize(ds, parse_normalization(mode)); },
      py::arg("dataset"), py::arg("mode"), "mode is 'none', 'l2' or 'var'.");
  m.def("split_holdout", &split_holdout, py::arg("dataset"), py::arg("test_fraction"), py::arg("seed"),
        "Returns (train, test).");

  py::class_<SolverConfig>(m, "SolverConfig")
      .def(py::init<>())
      .def_readwrite("C", &SolverConfig::C)
      .def_readwrite("epsilon", &SolverConfig::epsilon)
      .def_readwrite("max_epochs", &SolverConfig::max_epochs)
      .def_readwrite("seed", &SolverConfig::seed)
      .def_readwrite("num_workers", &SolverConfig::num_workers)
      .def_readwrite("syncs_per_epoch", &SolverConfig::syncs_per_epoch)
      .def_readwrite("shrink_after", &SolverConfig::shrink_after)
      .def_readwrite("shrinking", &SolverConfig::shrinking)
      .def_readwrite("track_objective", &SolverConfig::track_objective)
      .def_readwrite("ww_bundles", &SolverConfig::ww_bundles);

  py::class_<WeightMatrix>(m, "Model")
      .def_property_readonly("dim", &WeightMatrix::dim)
      .def_property_readonly("num_classes", &WeightMatrix::num_classes)
      .def_property_readonly("label_names", &WeightMatrix::label_names)
      .def_property_readonly("weights", &weights_array, "Array of shape (num_classes, dim).")
      .def("density", &density, py::arg("threshold") = 0.0)
      .def("predict", &predict_labels, py::arg("dataset"), py::arg("workers") = 1)
      .def("save", [](const WeightMatrix& w, const std::filesystem::path& p) { save_model(w, p); }, py::arg("path"))
      .def_static("load", [](const std::filesystem::path& p) { return load_model(p); }, py::arg("path"))
      .def(py::self == py::self);

  m.def("train", &train, py::arg("solver"), py::arg("dataset"), py::arg("config") = SolverConfig{},
        "Trains 'llw', 'ww' or 'ovr'. Returns (model, stats).");
  m.def(
      "evaluate", [](const WeightMatrix& w, const SparseDataset& ds) { return report_dict(evaluate(w, ds)); },
      py::arg("model"), py::arg("dataset"));

  m.def("match_class", &match_class, py::arg("num_classes"), py::arg("c"), py::arg("r"),
        "Partner of class c in round r (1-based); c itself means a bye.");
  m.def(
      "build_schedule",
      [](std::size_t num_classes) {
        std::vector<std::vector<std::pair<ClassId, ClassId>>> rounds;
        for (const Round& r : build_schedule(num_classes)) {
          auto& out = rounds.emplace_back();
          for (const ClassPair& p : r.pairs) out.emplace_back(p.first, p.second);
        }
        return rounds;
      },
      py::arg("num_classes"), "Pairs of each round, classes numbered from 0.");
}
