/*
 * Copyright 2026 The xdual Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "xdual/cli.h"
#include "xdual/enumerate.h"
#include "xdual/error.h"
#include "xdual/explain.h"
#include "xdual/hitting_set.h"
#include "xdual/io.h"
#include "xdual/model.h"
#include "xdual/oracle.h"

namespace py = pybind11;

namespace xdual {
namespace {

using ModelPtr = std::shared_ptr<Model>;
// Explanations cross the boundary as {feature name: category name}.
using Explanation = std::map<std::string, std::string>;

Instance ToInstance(const Model& model, const py::object& values) {
  if (py::isinstance<py::dict>(values)) {
    const auto named = values.cast<std::map<std::string, std::string>>();
    std::vector<std::string> ordered;
    for (const Feature& f : model.space().features()) {
      const auto it = named.find(f.name);
      if (it == named.end()) {
        throw Error(ErrorCode::kInvalidArgument,
                    "missing value for feature '" + f.name + "'");
      }
      ordered.push_back(it->second);
    }
    if (named.size() != ordered.size()) {
      throw Error(ErrorCode::kInvalidArgument, "unknown feature in instance");
    }
    return model.MakeInstance(std::span<const std::string>(ordered));
  }
  const auto ordered = values.cast<std::vector<std::string>>();
  return model.MakeInstance(std::span<const std::string>(ordered));
}

Explanation ToDict(const Model& model, const PartialAssignment& a) {
  Explanation out;
  for (const Literal& lit : a.literals()) {
    const Feature& f = model.space().feature(lit.feature);
    out[f.name] = f.values[lit.value];
  }
  return out;
}

std::vector<FeatureId> ToOrder(const Model& model,
                               const std::vector<std::string>& names) {
  std::vector<FeatureId> order;
  for (const std::string& name : names) {
    const auto f = model.space().FindFeature(name);
    if (!f) {
      throw Error(ErrorCode::kInvalidArgument,
                  "unknown feature '" + name + "'");
    }
    order.push_back(*f);
  }
  return order;
}

std::vector<ClassLabel> ToTargets(const Model& model,
                                  const std::vector<std::string>& names) {
  std::vector<ClassLabel> targets;
  for (const std::string& name : names) {
    const auto c = model.FindClass(name);
    if (!c) {
      throw Error(ErrorCode::kInvalidArgument, "unknown class '" + name + "'");
    }
    targets.push_back(*c);
  }
  return targets;
}

std::vector<std::string> Names(const Model& model,
                               const std::vector<FeatureSet>& sets) {
  std::vector<std::string> out;
  for (const FeatureSet& s : sets) {
    out.push_back(FormatSet(s, [&](FeatureId f) {
      return model.space().feature(f).name;
    }));
  }
  return out;
}

py::dict Enumerate(const ModelPtr& model, const py::object& instance,
                   bool smallest) {
  const ExplanationProblem problem(model, ToInstance(*model, instance));
  Oracle oracle(model);
  EnumerationOptions options;
  options.smallest = smallest;
  const EnumerationResult r = EnumerateAll(oracle, problem, options);
  py::list axps, cxps;
  for (const AXp& a : r.axps) axps.append(ToDict(*model, a.literals));
  for (const CXp& c : r.cxps) cxps.append(ToDict(*model, c.literals));
  py::dict out;
  out["axps"] = axps;
  out["cxps"] = cxps;
  out["entailment_calls"] = oracle.stats().entailment_calls;
  out["witness_calls"] = oracle.stats().witness_calls;
  return out;
}

}  // namespace
}  // namespace xdual

PYBIND11_MODULE(_core, m) {
  using namespace xdual;
  m.doc() = "Abductive and contrastive explanations of tree classifiers";

  static py::exception<Error> error(m, "XdualError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const std::string message =
          std::string(ErrorCodeName(e.code())) + ": " + e.what();
      PyErr_SetString(error.ptr(), message.c_str());
    }
  });

  py::class_<Model, std::shared_ptr<Model>>(m, "Model")
      .def_property_readonly("classes", &Model::classes)
      .def_property_readonly(
          "features",
          [](const Model& model) {
            std::vector<std::pair<std::string, std::vector<std::string>>> out;
            for (const Feature& f : model.space().features()) {
              out.emplace_back(f.name, f.values);
            }
            return out;
          })
      .def_property_readonly("kind",
                             [](const Model& model) {
                               return model.is_tree() ? "tree" : "ensemble";
                             })
      .def("predict",
           [](const Model& model, const py::object& instance) {
             return model.class_name(
                 model.Predict(ToInstance(model, instance)));
           })
      .def("to_json", &SerializeModel);

  m.def("parse_model", [](const std::string& text) {
    return std::make_shared<Model>(ParseModel(text));
  });
  m.def("load_model", [](const std::string& path) {
    return std::make_shared<Model>(LoadModel(path));
  });

  m.def(
      "extract_axp",
      [](const ModelPtr& model, const py::object& instance,
         const std::vector<std::string>& order) {
        const ExplanationProblem problem(model, ToInstance(*model, instance));
        Oracle oracle(model);
        const auto resolved = ToOrder(*model, order);
        return ToDict(*model,
                      ExtractAxp(oracle, problem, std::nullopt, resolved)
                          .literals);
      },
      py::arg("model"), py::arg("instance"),
      py::arg("order") = std::vector<std::string>{});

  m.def(
      "extract_cxp",
      [](const ModelPtr& model, const py::object& instance,
         const std::vector<std::string>& targets)
          -> std::optional<py::dict> {
        const ExplanationProblem problem(model, ToInstance(*model, instance),
                                         ToTargets(*model, targets));
        Oracle oracle(model);
        const auto cxp = targets.empty()
                             ? ExtractCxp(oracle, problem)
                             : std::optional(TargetedCxp(oracle, problem));
        if (!cxp) return std::nullopt;
        const CxpWitness w = MakeCxpWitness(oracle, problem, *cxp);
        py::dict out;
        out["cxp"] = ToDict(*model, cxp->literals);
        out["witness"] = ToDict(*model, w.replacement);
        out["witness_prediction"] = model->class_name(w.predicted);
        return out;
      },
      py::arg("model"), py::arg("instance"),
      py::arg("targets") = std::vector<std::string>{});

  m.def("enumerate_all", &Enumerate, py::arg("model"), py::arg("instance"),
        py::arg("smallest") = false);

  m.def(
      "verify",
      [](const ModelPtr& model, const py::object& instance) {
        const ExplanationProblem problem(model, ToInstance(*model, instance));
        Oracle oracle(model);
        const EnumerationResult r = EnumerateAll(oracle, problem);
        std::vector<FeatureSet> axps, cxps;
        for (const AXp& a : r.axps) axps.push_back(a.features());
        for (const CXp& c : r.cxps) cxps.push_back(c.features());
        return VerifyDuality(axps, cxps, LiteralFormatter(problem)).violations;
      },
      py::arg("model"), py::arg("instance"));

  m.def(
      "brute_force",
      [](const ModelPtr& model, const py::object& instance) {
        const ExplanationProblem problem(model, ToInstance(*model, instance));
        const BruteForceResult r = BruteForceExplanations(problem);
        return std::make_pair(Names(*model, r.axps), Names(*model, r.cxps));
      },
      py::arg("model"), py::arg("instance"));

  m.def(
      "minimal_hitting_set",
      [](std::size_t universe_size, std::vector<FeatureSet> to_hit,
         std::vector<FeatureSet> blocked, bool smallest) {
        return MinimalHittingSet(
            {universe_size, std::move(to_hit), std::move(blocked)},
            {.smallest = smallest});
      },
      py::arg("universe_size"), py::arg("to_hit"),
      py::arg("blocked") = std::vector<FeatureSet>{},
      py::arg("smallest") = false);

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "xdual");
        std::ostringstream out, err;
        const int code = RunCli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
