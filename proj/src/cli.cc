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

#include "xdual/cli.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "xdual/enumerate.h"
#include "xdual/error.h"
#include "xdual/explain.h"
#include "xdual/io.h"
#include "xdual/model.h"
#include "xdual/oracle.h"

namespace xdual {
namespace {

using Json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Settings {
  std::string model_path;
  std::string instances_path;
  std::string order;
  std::string target;
  std::string mode = "all";
  std::size_t limit = 0;
  bool sort_size = false;
  bool smallest = false;
  std::string occurrence_path;
  std::string output_path;
  bool timing = false;
  unsigned jobs = 1;
};

struct Inputs {
  std::shared_ptr<const Model> model;
  std::vector<InstanceRow> rows;
  OracleOptions oracle_options;
  EnumerationOptions enum_options;
  std::vector<FeatureId> order;
  std::vector<ClassLabel> targets;
};

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(' ');
    const auto e = item.find_last_not_of(' ');
    items.push_back(b == std::string::npos ? "" : item.substr(b, e - b + 1));
  }
  return items;
}

std::vector<FeatureId> ParseOrder(const std::string& text,
                                  const FeatureSpace& space) {
  if (text.empty()) return {};
  std::vector<FeatureId> order;
  for (const std::string& name : SplitList(text)) {
    const auto f = space.FindFeature(name);
    if (!f) throw UsageError("--order: unknown feature '" + name + "'");
    if (std::find(order.begin(), order.end(), *f) != order.end()) {
      throw UsageError("--order: feature '" + name + "' listed twice");
    }
    order.push_back(*f);
  }
  if (order.size() != space.num_features()) {
    throw UsageError("--order must list every feature exactly once");
  }
  return order;
}

std::vector<ClassLabel> ParseTargets(const std::string& text,
                                     const Model& model) {
  std::vector<ClassLabel> targets;
  if (text.empty()) return targets;
  for (const std::string& name : SplitList(text)) {
    const auto c = model.FindClass(name);
    if (!c) throw UsageError("--target: unknown class '" + name + "'");
    targets.push_back(*c);
  }
  return targets;
}

std::optional<std::uint64_t> BudgetFromEnvironment() {
  const char* value = std::getenv("XDUAL_BUDGET");
  if (value == nullptr || *value == '\0') return std::nullopt;
  char* end = nullptr;
  const unsigned long long budget = std::strtoull(value, &end, 10);
  if (*end != '\0' || budget == 0) {
    throw UsageError(std::string("XDUAL_BUDGET must be a positive integer, "
                                 "got '") +
                     value + "'");
  }
  return budget;
}

Inputs Load(const Settings& settings) {
  Inputs inputs;
  inputs.model = std::make_shared<const Model>(LoadModel(settings.model_path));
  try {
    inputs.rows = ParseInstances(ReadFile(settings.instances_path),
                                 inputs.model->space());
  } catch (const Error& e) {
    throw Error(e.code(), settings.instances_path + ": " + e.what());
  }
  if (const auto budget = BudgetFromEnvironment()) {
    inputs.oracle_options.completion_cap = *budget;
    inputs.enum_options.mhs_node_budget = *budget;
  }
  inputs.order = ParseOrder(settings.order, inputs.model->space());
  inputs.targets = ParseTargets(settings.target, *inputs.model);
  inputs.enum_options.order = inputs.order;
  inputs.enum_options.limit = settings.limit;
  inputs.enum_options.smallest = settings.smallest;
  return inputs;
}

// Targets minus the row's own prediction.
std::vector<ClassLabel> TargetsFor(const std::vector<ClassLabel>& targets,
                                   ClassLabel prediction) {
  std::vector<ClassLabel> result;
  for (ClassLabel t : targets) {
    if (t != prediction) result.push_back(t);
  }
  return result;
}

Json AssignmentJson(const FeatureSpace& space, const PartialAssignment& a) {
  Json j = Json::object();
  for (const Literal& lit : a.literals()) {
    const Feature& feature = space.feature(lit.feature);
    j[feature.name] = feature.values[lit.value];
  }
  return j;
}

// Runs `task(i)` for i in [0, n) on up to `jobs` threads. The first failure
// in index order is rethrown once all tasks finish.
template <typename Task>
void ForEachRow(std::size_t n, unsigned jobs, Task&& task) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(jobs, n));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

int RunPredict(const Inputs& in, std::ostream& out) {
  for (const InstanceRow& row : in.rows) {
    out << in.model->class_name(in.model->Predict(row.instance)) << '\n';
  }
  return kExitOk;
}

int RunAxp(const Inputs& in, std::ostream& out) {
  const FeatureSpace& space = in.model->space();
  for (const InstanceRow& row : in.rows) {
    const ExplanationProblem problem(in.model, row.instance);
    Oracle oracle(in.model, in.oracle_options);
    const AXp axp = ExtractAxp(oracle, problem, std::nullopt, in.order);
    out << in.model->class_name(problem.prediction()) << ": "
        << FormatAssignment(space, axp.literals) << '\n';
  }
  return kExitOk;
}

int RunCxp(const Inputs& in, std::ostream& out) {
  const FeatureSpace& space = in.model->space();
  for (const InstanceRow& row : in.rows) {
    const ClassLabel prediction = in.model->Predict(row.instance);
    const std::string& name = in.model->class_name(prediction);
    Oracle oracle(in.model, in.oracle_options);
    std::optional<CXp> cxp;
    std::optional<ExplanationProblem> problem;
    if (in.targets.empty()) {
      problem.emplace(in.model, row.instance);
      cxp = ExtractCxp(oracle, *problem, {}, in.order);
    } else {
      const std::vector<ClassLabel> targets =
          TargetsFor(in.targets, prediction);
      if (targets.empty()) {
        out << name << ": target is the prediction\n";
        continue;
      }
      problem.emplace(in.model, row.instance, targets);
      try {
        cxp = TargetedCxp(oracle, *problem, in.order);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kTargetUnreachable) throw;
        out << name << ": target unreachable\n";
        continue;
      }
    }
    if (!cxp) {
      out << name << ": none\n";
      continue;
    }
    const CxpWitness witness = MakeCxpWitness(oracle, *problem, *cxp);
    out << name << ": " << FormatAssignment(space, cxp->literals) << " -> "
        << FormatAssignment(space, witness.replacement) << " => "
        << in.model->class_name(witness.predicted) << '\n';
  }
  return kExitOk;
}

int RunEnum(const Inputs& in, const Settings& settings, std::ostream& out) {
  const FeatureSpace& space = in.model->space();
  const bool all = settings.mode == "all";
  if (all && !in.targets.empty()) {
    throw UsageError("--target requires --mode cxp");
  }
  std::vector<std::size_t> axp_counts(space.num_features(), 0);
  std::vector<std::size_t> cxp_counts(space.num_features(), 0);

  for (const InstanceRow& row : in.rows) {
    const ClassLabel prediction = in.model->Predict(row.instance);
    const std::string& name = in.model->class_name(prediction);
    std::vector<ClassLabel> targets;
    if (!in.targets.empty()) {
      targets = TargetsFor(in.targets, prediction);
      if (targets.empty()) continue;
    }
    const ExplanationProblem problem(in.model, row.instance, targets);
    Oracle oracle(in.model, in.oracle_options);

    std::vector<std::pair<ExplanationKind, PartialAssignment>> found;
    auto sink = [&](ExplanationKind kind, const PartialAssignment& a) {
      found.emplace_back(kind, a);
    };
    const EnumerationResult result =
        all ? EnumerateAll(oracle, problem, in.enum_options, sink)
            : EnumerateCxps(oracle, problem, in.enum_options, sink);
    if (settings.sort_size) {
      std::stable_sort(found.begin(), found.end(),
                       [](const auto& a, const auto& b) {
                         return a.second.size() < b.second.size();
                       });
    }
    for (const auto& [kind, literals] : found) {
      Json record = Json::object();
      record["row"] = row.row;
      record["prediction"] = name;
      const bool abductive = kind == ExplanationKind::kAbductive;
      record["kind"] = abductive ? "axp" : "cxp";
      record["size"] = literals.size();
      record["explanation"] = AssignmentJson(space, literals);
      auto& counts = abductive ? axp_counts : cxp_counts;
      for (FeatureId f : literals.features()) ++counts[f];
      if (!abductive) {
        const CxpWitness witness =
            MakeCxpWitness(oracle, problem, CXp{literals, problem.targets()});
        record["witness"] = AssignmentJson(space, witness.replacement);
        record["witness_prediction"] = in.model->class_name(witness.predicted);
      }
      out << record.dump() << '\n';
    }
    Json summary = Json::object();
    summary["row"] = row.row;
    summary["prediction"] = name;
    summary["kind"] = "summary";
    summary["axps"] = result.axps.size();
    summary["cxps"] = result.cxps.size();
    summary["complete"] = result.complete;
    out << summary.dump() << '\n';
  }

  if (!settings.occurrence_path.empty()) {
    std::ofstream file(settings.occurrence_path, std::ios::binary);
    if (!file) {
      throw Error(ErrorCode::kInvalidArgument,
                  "cannot write '" + settings.occurrence_path + "'");
    }
    file << "feature,axp_occurrences,cxp_occurrences\n";
    for (FeatureId f = 0; f < space.num_features(); ++f) {
      file << space.feature(f).name << ',' << axp_counts[f] << ','
           << cxp_counts[f] << '\n';
    }
  }
  return kExitOk;
}

int RunVerify(const Inputs& in, const Settings& settings, std::ostream& out) {
  std::vector<std::string> lines(in.rows.size());
  std::vector<bool> passed(in.rows.size(), false);
  ForEachRow(in.rows.size(), settings.jobs, [&](std::size_t i) {
    const ExplanationProblem problem(in.model, in.rows[i].instance);
    Oracle oracle(in.model, in.oracle_options);
    EnumerationOptions options = in.enum_options;
    options.limit = 0;
    const EnumerationResult result = EnumerateAll(oracle, problem, options);

    std::vector<std::string> violations;
    std::vector<FeatureSet> axps, cxps;
    for (const AXp& a : result.axps) {
      axps.push_back(a.features());
      if (auto v = CheckAxp(oracle, problem, a.literals)) {
        violations.push_back(*v);
      }
    }
    for (const CXp& c : result.cxps) {
      cxps.push_back(c.features());
      if (auto v = CheckCxp(oracle, problem, c.literals)) {
        violations.push_back(*v);
      }
    }
    const DualityReport report =
        VerifyDuality(axps, cxps, LiteralFormatter(problem));
    violations.insert(violations.end(), report.violations.begin(),
                      report.violations.end());

    std::string line = "row " + std::to_string(in.rows[i].row) + ": ";
    if (violations.empty()) {
      line += "ok (" + std::to_string(axps.size()) + " AXps, " +
              std::to_string(cxps.size()) + " CXps)";
      passed[i] = true;
    } else {
      line += "FAIL";
      for (const std::string& v : violations) line += "\n  " + v;
    }
    lines[i] = std::move(line);
  });
  for (const std::string& line : lines) out << line << '\n';
  const bool ok = std::all_of(passed.begin(), passed.end(),
                              [](bool p) { return p; });
  return ok ? kExitOk : kExitVerifyFailed;
}

int RunStats(const Inputs& in, const Settings& settings, std::ostream& out) {
  StatsReport report;
  report.rows.resize(in.rows.size());
  ForEachRow(in.rows.size(), settings.jobs, [&](std::size_t i) {
    const ExplanationProblem problem(in.model, in.rows[i].instance);
    Oracle oracle(in.model, in.oracle_options);
    EnumerationOptions options = in.enum_options;
    options.limit = 0;
    const auto start = std::chrono::steady_clock::now();
    const EnumerationResult result = EnumerateAll(oracle, problem, options);
    const std::chrono::duration<double> elapsed =
        std::chrono::steady_clock::now() - start;
    report.rows[i] = SummarizeInstance(
        in.rows[i].row, in.model->class_name(problem.prediction()), result,
        oracle.stats(), elapsed.count());
  });
  std::ofstream file(settings.output_path, std::ios::binary);
  if (!file) {
    throw Error(ErrorCode::kInvalidArgument,
                "cannot write '" + settings.output_path + "'");
  }
  file << report.ToCsv(settings.timing);
  out << report.Summary();
  return kExitOk;
}

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSearchSpaceExceeded:
    case ErrorCode::kBudgetExceeded:
    case ErrorCode::kTooLarge:
      return kExitBudget;
    case ErrorCode::kDefect:
      return kExitVerifyFailed;
    default:
      return kExitInput;
  }
}

}  // namespace

int RunCli(std::span<const std::string> args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Abductive and contrastive explanations of tree classifiers",
               "xdual"};
  app.require_subcommand(1);
  Settings settings;

  auto add_io = [&](CLI::App* sub) {
    sub->add_option("-m,--model", settings.model_path, "Model JSON file")
        ->required();
    sub->add_option("-i,--instances", settings.instances_path,
                    "Instances CSV file")
        ->required();
  };
  auto add_order = [&](CLI::App* sub) {
    sub->add_option("--order", settings.order,
                    "Feature processing order, comma-separated");
  };
  auto add_jobs = [&](CLI::App* sub) {
    sub->add_option("-j,--jobs", settings.jobs, "Worker threads")
        ->check(CLI::Range(1u, 1024u));
  };

  CLI::App* predict = app.add_subcommand("predict", "Print the class of each row");
  add_io(predict);

  CLI::App* axp = app.add_subcommand("axp", "One abductive explanation per row");
  add_io(axp);
  add_order(axp);

  CLI::App* cxp = app.add_subcommand(
      "cxp", "One contrastive explanation and its witness per row");
  add_io(cxp);
  add_order(cxp);
  cxp->add_option("--target", settings.target,
                  "Target classes, comma-separated");

  CLI::App* enumerate =
      app.add_subcommand("enum", "Stream all explanations as JSON lines");
  add_io(enumerate);
  add_order(enumerate);
  enumerate->add_option("--mode", settings.mode, "cxp or all")
      ->check(CLI::IsMember({"cxp", "all"}));
  enumerate->add_option("--limit", settings.limit,
                        "Stop after N explanations per row");
  enumerate->add_flag("--sort-size", settings.sort_size,
                      "Order each row's explanations by size");
  enumerate->add_flag("--smallest", settings.smallest,
                      "Use minimum-cardinality hitting sets");
  enumerate->add_option("--target", settings.target,
                        "Target classes for --mode cxp");
  enumerate->add_option("--pixel-occurrence", settings.occurrence_path,
                        "Write per-feature occurrence counts to a CSV file");

  CLI::App* verify = app.add_subcommand(
      "verify", "Enumerate and check the AXp/CXp hitting-set duality");
  add_io(verify);
  add_jobs(verify);

  CLI::App* stats =
      app.add_subcommand("stats", "Write enumeration statistics as CSV");
  add_io(stats);
  add_jobs(stats);
  stats->add_option("-o,--output", settings.output_path, "Output CSV file")
      ->required();
  stats->add_flag("--timing", settings.timing,
                  "Include wall time (makes the output non-reproducible)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const Inputs inputs = Load(settings);
    if (*predict) return RunPredict(inputs, out);
    if (*axp) return RunAxp(inputs, out);
    if (*cxp) return RunCxp(inputs, out);
    if (*enumerate) return RunEnum(inputs, settings, out);
    if (*verify) return RunVerify(inputs, settings, out);
    return RunStats(inputs, settings, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error (" << ErrorCodeName(e.code()) << "): " << e.what() << '\n';
    return ExitCodeFor(e.code());
  }
}

}  // namespace xdual
