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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "test_support.h"
#include "xdual/cli.h"
#include "xdual/enumerate.h"
#include "xdual/error.h"
#include "xdual/explain.h"
#include "xdual/hitting_set.h"
#include "xdual/io.h"
#include "xdual/synthetic.h"

namespace xdual {
namespace {

using Clock = std::chrono::steady_clock;
using testing::DataPath;
using testing::Sorted;

double Millis(Clock::duration d) {
  return std::chrono::duration<double, std::milli>(d).count();
}

class Criterion {
 public:
  explicit Criterion(int number, std::string title)
      : number_(number), title_(std::move(title)) {}

  // Records a failed expectation; the first few are printed.
  void Expect(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    if (failures_.size() < 5) failures_.push_back(what);
    ++failed_;
  }
  void Note(std::string note) { notes_.push_back(std::move(note)); }

  bool Report() const {
    std::printf("criterion %d [%s] %s (%zu checks", number_,
                failed_ == 0 ? "PASS" : "FAIL", title_.c_str(), checks_);
    for (const std::string& n : notes_) std::printf("; %s", n.c_str());
    std::printf(")\n");
    for (const std::string& f : failures_) std::printf("    %s\n", f.c_str());
    if (failed_ > failures_.size()) {
      std::printf("    ... %zu more\n", failed_ - failures_.size());
    }
    std::fflush(stdout);
    return failed_ == 0;
  }

 private:
  int number_;
  std::string title_;
  std::size_t checks_ = 0;
  std::size_t failed_ = 0;
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

std::string Show(const std::vector<FeatureSet>& family) {
  std::string s = "{";
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (i) s += ", ";
    s += FormatSet(family[i]);
  }
  return s + "}";
}

std::vector<FeatureSet> Features(const auto& explanations) {
  std::vector<FeatureSet> out;
  for (const auto& x : explanations) out.push_back(x.features());
  return Sorted(std::move(out));
}

// Times `op` once after a warm-up call.
double TimeOnce(const std::function<void()>& op) {
  op();
  const auto start = Clock::now();
  op();
  return Millis(Clock::now() - start);
}

bool RunningExample() {
  Criterion c(1, "running-example goldens, each under 1 ms");
  const auto poole = testing::Poole();
  const Instance e1 = testing::E1(*poole);
  const Instance e2 = testing::E2(*poole);
  const ExplanationProblem p2(poole, e2), p3(poole, e1);
  const FeatureSpace& space = poole->space();
  double worst = 0;
  auto golden = [&](const std::string& name, const std::string& expected,
                    const std::function<std::string()>& op) {
    std::string got;
    const double ms = TimeOnce([&] { got = op(); });
    worst = std::max(worst, ms);
    c.Expect(got == expected, name + ": got " + got + ", want " + expected);
    c.Expect(ms < 1.0, name + " took " + std::to_string(ms) + " ms");
  };
  golden("predict(e1)", "skips",
         [&] { return poole->class_name(poole->Predict(e1)); });
  golden("predict(e2)", "reads",
         [&] { return poole->class_name(poole->Predict(e2)); });
  golden("extract_axp(e3)", "{L=long}", [&] {
    Oracle o(poole);
    return FormatAssignment(space, ExtractAxp(o, p3).literals);
  });
  golden("extract_cxp(e3)", "{L=long}", [&] {
    Oracle o(poole);
    return FormatAssignment(space, ExtractCxp(o, p3)->literals);
  });
  golden("extract_cxp(e2)", "{L=short}", [&] {
    Oracle o(poole);
    return FormatAssignment(space, ExtractCxp(o, p2)->literals);
  });
  golden("extract_axp(e2)", "{T=new, L=short}", [&] {
    Oracle o(poole);
    return FormatAssignment(space, ExtractAxp(o, p2).literals);
  });
  char buf[64];
  std::snprintf(buf, sizeof buf, "slowest %.3f ms", worst);
  c.Note(buf);
  return c.Report();
}

struct CorpusRun {
  std::vector<testing::CorpusEntry> corpus;
  std::vector<std::vector<EnumerationResult>> results;
};

bool BruteForceEquivalence(CorpusRun& run) {
  Criterion c(2, "enumerate_all equals brute force on 200 trees x 5 instances");
  const auto start = Clock::now();
  run.corpus = testing::TreeCorpus(200, 5, 424242);
  std::size_t explanations = 0;
  for (const auto& entry : run.corpus) {
    c.Expect(entry.model->space().num_features() <= 6 &&
                 entry.model->num_classes() >= 2,
             "corpus shape, seed " + std::to_string(entry.seed));
    std::vector<EnumerationResult>& results = run.results.emplace_back();
    for (const Instance& x : entry.instances) {
      const ExplanationProblem problem(entry.model, x);
      Oracle oracle(entry.model);
      const EnumerationResult r = EnumerateAll(oracle, problem);
      const BruteForceResult brute = BruteForceExplanations(problem);
      const std::string where = "seed " + std::to_string(entry.seed);
      c.Expect(Features(r.axps) == Sorted(brute.axps),
               where + ": AXps " + Show(Features(r.axps)) + " vs " +
                   Show(Sorted(brute.axps)));
      c.Expect(Features(r.cxps) == Sorted(brute.cxps),
               where + ": CXps " + Show(Features(r.cxps)) + " vs " +
                   Show(Sorted(brute.cxps)));
      explanations += r.axps.size() + r.cxps.size();
      results.push_back(r);
    }
  }
  const double seconds = Millis(Clock::now() - start) / 1000;
  c.Expect(seconds < 60, "took " + std::to_string(seconds) + " s");
  char buf[96];
  std::snprintf(buf, sizeof buf, "%zu explanations, %.2f s", explanations,
                seconds);
  c.Note(buf);
  return c.Report();
}

bool Duality(const CorpusRun& run) {
  Criterion c(3, "AXp/CXp hitting-set duality on the same corpus");
  std::size_t violations = 0;
  for (std::size_t i = 0; i < run.corpus.size(); ++i) {
    for (const EnumerationResult& r : run.results[i]) {
      const DualityReport report =
          VerifyDuality(Features(r.axps), Features(r.cxps));
      violations += report.violations.size();
      c.Expect(report.ok(), "seed " + std::to_string(run.corpus[i].seed) +
                                ": " +
                                (report.ok() ? "" : report.violations[0]));
    }
  }
  c.Note(std::to_string(violations) + " violations");
  return c.Report();
}

bool CallBudgets(const CorpusRun& run) {
  Criterion c(4, "oracle-call budgets of extract_axp and extract_cxp");
  std::uint64_t max_witness = 0;
  for (const auto& entry : run.corpus) {
    for (const Instance& x : entry.instances) {
      const ExplanationProblem problem(entry.model, x);
      const std::uint64_t n = x.num_features();
      const std::string where = "seed " + std::to_string(entry.seed);
      Oracle a(entry.model);
      ExtractAxp(a, problem);
      c.Expect(a.stats().entailment_calls == n + 1 &&
                   a.stats().witness_calls == 0,
               where + ": extract_axp used " +
                   std::to_string(a.stats().entailment_calls) +
                   " entailment calls for |tau| = " + std::to_string(n));
      Oracle b(entry.model);
      ExtractCxp(b, problem);
      c.Expect(b.stats().witness_calls <= n,
               where + ": extract_cxp used " +
                   std::to_string(b.stats().witness_calls) +
                   " counterexample queries for |tau| = " + std::to_string(n));
      max_witness = std::max(max_witness, b.stats().witness_calls);
    }
  }
  c.Note("max counterexample queries " + std::to_string(max_witness));
  return c.Report();
}

bool Targeted(const CorpusRun& run) {
  Criterion c(5, "targeted CXps on the 3-class fixture and binary corpus");
  const auto three = testing::LoadShared("three_class.json");
  const auto rows = ParseInstances(ReadFile(DataPath("three_class.csv")),
                                   three->space());
  std::size_t choices = 0;
  for (const InstanceRow& row : rows) {
    const ClassLabel pi = three->Predict(row.instance);
    // Every nonempty target set avoiding the prediction.
    for (unsigned mask = 1; mask < 8u; ++mask) {
      if (mask >> pi.index & 1) continue;
      std::vector<ClassLabel> targets;
      for (std::size_t k = 0; k < 3; ++k) {
        if (mask >> k & 1) targets.push_back(ClassLabel{k});
      }
      const ExplanationProblem problem(three, row.instance, targets);
      Oracle oracle(three);
      const CXp cxp = TargetedCxp(oracle, problem);
      const auto brute = Sorted(BruteForceExplanations(problem).cxps);
      c.Expect(brute == std::vector<FeatureSet>{cxp.features()},
               "row " + std::to_string(row.row) + ": " +
                   FormatSet(cxp.features()) + " vs " + Show(brute));
      const CxpWitness w = MakeCxpWitness(oracle, problem, cxp);
      c.Expect(std::find(targets.begin(), targets.end(), w.predicted) !=
                   targets.end(),
               "witness outside the targets");
      ++choices;
    }
  }
  std::size_t binary = 0, unreachable_targets = 0;
  for (const auto& entry : run.corpus) {
    if (entry.model->num_classes() != 2) continue;
    for (const Instance& x : entry.instances) {
      const ClassLabel pi = entry.model->Predict(x);
      const ExplanationProblem targeted(entry.model, x,
                                        {ClassLabel{1 - pi.index}});
      const ExplanationProblem basic(entry.model, x);
      Oracle oracle(entry.model);
      const std::string where = "seed " + std::to_string(entry.seed);
      if (BruteForceExplanations(basic).cxps.empty()) {
        // The model never predicts the other class.
        bool unreachable = false;
        try {
          TargetedCxp(oracle, targeted);
        } catch (const Error& e) {
          unreachable = e.code() == ErrorCode::kTargetUnreachable;
        }
        c.Expect(unreachable, where + ": expected an unreachable target");
        ++unreachable_targets;
        continue;
      }
      const CXp cxp = TargetedCxp(oracle, targeted);
      const auto violation = CheckCxp(oracle, basic, cxp.literals);
      c.Expect(!violation, where + ": " + violation.value_or(""));
      ++binary;
    }
  }
  c.Note(std::to_string(choices) + " fixture choices, " +
         std::to_string(binary) + " binary instances, " +
         std::to_string(unreachable_targets) + " with unreachable target");
  return c.Report();
}

bool HittingSets() {
  Criterion c(6, "iterated minimal hitting sets equal the exhaustive family");
  synthetic::Rng rng(606);
  std::size_t total = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + synthetic::Uniform(rng, 12);
    std::vector<FeatureSet> family(1 + synthetic::Uniform(rng, 10));
    for (FeatureSet& s : family) {
      const std::size_t size = 1 + synthetic::Uniform(rng, std::min<std::size_t>(n, 4));
      for (std::size_t k = 0; k < size; ++k) {
        s.push_back(synthetic::Uniform(rng, n));
      }
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
    }
    const auto iterated = Sorted(AllMinimalHittingSets(n, family));
    const auto exhaustive = testing::ExhaustiveMinimalHittingSets(n, family);
    c.Expect(iterated == exhaustive, "trial " + std::to_string(trial) + ": " +
                                         Show(iterated) + " vs " +
                                         Show(exhaustive));
    total += exhaustive.size();
  }
  c.Note(std::to_string(total) + " hitting sets");
  return c.Report();
}

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "xdual");
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream in(line);
  for (std::string cell; std::getline(in, cell, ',');) cells.push_back(cell);
  return cells;
}

bool Scale() {
  Criterion c(7, "stats on the 10-feature ensemble over 100 instances");
  const std::string out =
      (std::filesystem::temp_directory_path() / "xdual_acceptance_stats.csv")
          .string();
  const auto start = Clock::now();
  const CliRun r = Cli({"stats", "-m", DataPath("ensemble10.json"), "-i",
                        DataPath("ensemble10_100.csv"), "-o", out});
  const double seconds = Millis(Clock::now() - start) / 1000;
  c.Expect(r.code == kExitOk, "exit code " + std::to_string(r.code) + ": " +
                                  r.err);
  c.Expect(seconds < 300, "took " + std::to_string(seconds) + " s");

  std::istringstream csv(ReadFile(out));
  std::string line;
  std::getline(csv, line);
  const auto header = SplitCsvLine(line);
  auto column = [&](const std::string& name) {
    return std::find(header.begin(), header.end(), name) - header.begin();
  };
  std::vector<std::vector<std::string>> rows;
  while (std::getline(csv, line)) rows.push_back(SplitCsvLine(line));
  c.Expect(rows.size() == 101 && rows.back()[0] == "all",
           "expected 100 instance rows and a total row");
  if (rows.empty()) return c.Report();
  const auto& all = rows.back();
  const double avg_axp = std::stod(all[column("avg_axp_size")]);
  const double avg_cxp = std::stod(all[column("avg_cxp_size")]);
  const bool tendency = avg_cxp <= avg_axp;
  const bool flagged =
      r.out.find("avg CXp size <= avg AXp size: no") != std::string::npos;
  c.Expect(tendency || flagged, "larger CXps were not flagged");
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "%.2f s, avg AXp size %.3f, avg CXp size %.3f, %s", seconds,
                avg_axp, avg_cxp,
                tendency ? "CXps no larger" : "CXps larger, flagged");
  c.Note(buf);
  std::filesystem::remove(out);
  return c.Report();
}

bool Determinism() {
  Criterion c(8, "model JSON round-trips and CLI output is byte-stable");
  for (const char* name :
       {"poole.json", "three_class.json", "ensemble10.json"}) {
    const std::string text = ReadFile(DataPath(name));
    c.Expect(SerializeModel(ParseModel(text)) == text,
             std::string(name) + " does not round-trip");
  }
  synthetic::Rng rng(808);
  for (int i = 0; i < 20; ++i) {
    const std::string text =
        SerializeModel(synthetic::RandomTreeModel(rng, {}));
    c.Expect(SerializeModel(ParseModel(text)) == text,
             "random tree does not round-trip");
  }

  const std::string p = DataPath("poole.json"), all16 = DataPath("all16.csv");
  const std::string ens = DataPath("ensemble10.json"),
                    ens_rows = DataPath("ensemble10_100.csv");
  const std::string three = DataPath("three_class.json"),
                    three_rows = DataPath("three_class.csv");
  const std::vector<std::vector<std::string>> commands = {
      {"predict", "-m", p, "-i", all16},
      {"axp", "-m", p, "-i", all16},
      {"axp", "--order", "W,L,T,A", "-m", p, "-i", all16},
      {"cxp", "-m", p, "-i", all16},
      {"cxp", "--target", "k2,k3", "-m", three, "-i", three_rows},
      {"enum", "--mode", "all", "-m", p, "-i", all16},
      {"enum", "--mode", "cxp", "--sort-size", "-m", p, "-i", all16},
      {"enum", "--mode", "all", "-m", ens, "-i", ens_rows},
      {"verify", "-m", p, "-i", all16},
      {"verify", "-j", "3", "-m", ens, "-i", ens_rows},
  };
  for (const auto& args : commands) {
    const CliRun a = Cli(args), b = Cli(args);
    std::string joined;
    for (const std::string& s : args) joined += s + " ";
    c.Expect(a.code == kExitOk, joined + "exited " + std::to_string(a.code));
    c.Expect(a.code == b.code && a.out == b.out && a.err == b.err,
             joined + "differs between runs");
  }
  const auto dir = std::filesystem::temp_directory_path();
  const std::string s1 = (dir / "xdual_acceptance_s1.csv").string();
  const std::string s2 = (dir / "xdual_acceptance_s2.csv").string();
  const CliRun a = Cli({"stats", "-m", ens, "-i", ens_rows, "-o", s1});
  const CliRun b = Cli({"stats", "-j", "2", "-m", ens, "-i", ens_rows, "-o", s2});
  c.Expect(a.code == kExitOk && b.code == kExitOk, "stats failed");
  c.Expect(ReadFile(s1) == ReadFile(s2) && a.out == b.out,
           "stats output differs between runs");
  std::filesystem::remove(s1);
  std::filesystem::remove(s2);
  c.Note(std::to_string(commands.size() + 1) + " commands run twice");
  return c.Report();
}

}  // namespace
}  // namespace xdual

int main() {
  using namespace xdual;
  bool ok = true;
  CorpusRun run;
  ok &= RunningExample();
  ok &= BruteForceEquivalence(run);
  ok &= Duality(run);
  ok &= CallBudgets(run);
  ok &= Targeted(run);
  ok &= HittingSets();
  ok &= Scale();
  ok &= Determinism();
  std::printf("%s\n", ok ? "all criteria passed" : "some criteria FAILED");
  return ok ? 0 : 1;
}
