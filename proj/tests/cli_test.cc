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

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "json.hpp"
#include "test_support.h"
#include "xdual/cli.h"
#include "xdual/explain.h"
#include "xdual/io.h"

namespace xdual {
namespace {

using ::testing::HasSubstr;
using testing::DataPath;

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "xdual");
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string TempPath(const std::string& name) {
  return (std::filesystem::temp_directory_path() /
          ("xdual_cli_test_" + name)).string();
}

TEST(CliTest, Predict) {
  const CliResult r = Cli({"predict", "-m", DataPath("poole.json"), "-i",
                     DataPath("e1.csv")});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out, "skips\n");
}

TEST(CliTest, AxpOfE2) {
  const CliResult r =
      Cli({"axp", "-m", DataPath("poole.json"), "-i", DataPath("e2.csv")});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out, "reads: {T=new, L=short}\n");
  const CliResult reordered = Cli({"axp", "-m", DataPath("poole.json"), "-i",
                             DataPath("e2.csv"), "--order", "T,A,L,W"});
  EXPECT_EQ(reordered.out, "reads: {A=known, L=short}\n");
}

TEST(CliTest, CxpOfE2) {
  const CliResult r =
      Cli({"cxp", "-m", DataPath("poole.json"), "-i", DataPath("e2.csv")});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out, "reads: {L=short} -> {L=long} => skips\n");
}

TEST(CliTest, TargetedCxp) {
  const CliResult r = Cli({"cxp", "-m", DataPath("three_class.json"), "-i",
                     DataPath("three_class.csv"), "--target", "k3"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_THAT(r.out, HasSubstr("k1: {X=a} -> {X=c} => k3\n"));
  EXPECT_THAT(r.out, HasSubstr("k3: target is the prediction\n"));
}

TEST(CliTest, EnumRecordsRevalidate) {
  const CliResult r = Cli({"enum", "--mode", "all", "-m", DataPath("poole.json"),
                     "-i", DataPath("all16.csv")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  auto model = testing::Poole();
  const auto rows =
      ParseInstances(ReadFile(DataPath("all16.csv")), model->space());
  std::istringstream lines(r.out);
  std::string line;
  int axps = 0, cxps = 0, summaries = 0;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line);
    const Instance& x = rows.at(j["row"].get<std::size_t>() - 1).instance;
    EXPECT_EQ(j["prediction"], model->class_name(model->Predict(x)));
    if (j["kind"] == "summary") {
      ++summaries;
      continue;
    }
    PartialAssignment literals(4);
    for (const auto& [name, value] : j["explanation"].items()) {
      const FeatureId f = *model->space().FindFeature(name);
      literals.Add({f, *model->space().FindValue(f, value.get<std::string>())});
    }
    EXPECT_EQ(j["size"], literals.size());
    ASSERT_TRUE(literals.IsSubsetOf(x.AsAssignment()));
    const ExplanationProblem problem(model, x);
    Oracle oracle(model);
    if (j["kind"] == "axp") {
      ++axps;
      EXPECT_EQ(CheckAxp(oracle, problem, literals), std::nullopt) << line;
    } else {
      ++cxps;
      EXPECT_EQ(CheckCxp(oracle, problem, literals), std::nullopt) << line;
      EXPECT_NE(j["witness_prediction"], j["prediction"]);
    }
  }
  EXPECT_EQ(summaries, 16);
  EXPECT_GT(axps, 16);
  EXPECT_GT(cxps, 16);
}

TEST(CliTest, EnumOfE2HasTwoOfEach) {
  const CliResult r = Cli({"enum", "--mode", "all", "-m", DataPath("poole.json"),
                     "-i", DataPath("e2.csv")});
  EXPECT_EQ(r.code, kExitOk);
  int axps = 0, cxps = 0;
  std::istringstream lines(r.out);
  for (std::string line; std::getline(lines, line);) {
    const auto kind = nlohmann::json::parse(line)["kind"];
    axps += kind == "axp";
    cxps += kind == "cxp";
  }
  EXPECT_EQ(axps, 2);
  EXPECT_EQ(cxps, 2);
}

TEST(CliTest, EnumSortAndLimit) {
  const CliResult r = Cli({"enum", "--mode", "all", "--sort-size", "--limit", "3",
                     "-m", DataPath("poole.json"), "-i", DataPath("e2.csv")});
  std::istringstream lines(r.out);
  std::vector<int> sizes;
  for (std::string line; std::getline(lines, line);) {
    const auto j = nlohmann::json::parse(line);
    if (j["kind"] == "summary") {
      EXPECT_EQ(j["complete"], false);
    } else {
      sizes.push_back(j["size"]);
    }
  }
  EXPECT_EQ(sizes, std::vector<int>({1, 2, 2}));
}

TEST(CliTest, OccurrenceExport) {
  const std::string path = TempPath("occ.csv");
  const CliResult r = Cli({"enum", "-m", DataPath("poole.json"), "-i",
                     DataPath("e2.csv"), "--pixel-occurrence", path});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(ReadFile(path),
            "feature,axp_occurrences,cxp_occurrences\n"
            "A,1,1\nT,1,1\nL,2,1\nW,0,0\n");
  std::filesystem::remove(path);
}

TEST(CliTest, VerifyAllSixteen) {
  const CliResult r = Cli({"verify", "-m", DataPath("poole.json"), "-i",
                     DataPath("all16.csv")});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_THAT(r.out, HasSubstr("row 16: ok"));
  const CliResult parallel = Cli({"verify", "-j", "4", "-m", DataPath("poole.json"),
                            "-i", DataPath("all16.csv")});
  EXPECT_EQ(parallel.out, r.out);
}

TEST(CliTest, StatsOracleColumnMatchesOracleStats) {
  const std::string path = TempPath("stats.csv");
  const CliResult r = Cli({"stats", "-m", DataPath("poole.json"), "-i",
                     DataPath("e2.csv"), "-o", path});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  auto model = testing::Poole();
  Oracle oracle(model);
  EnumerateAll(oracle, ExplanationProblem(model, testing::E2(*model)));
  const std::string csv = ReadFile(path);
  std::istringstream lines(csv);
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  const std::string calls = row.substr(row.rfind(',') + 1);
  EXPECT_EQ(calls, std::to_string(oracle.stats().total_calls()));
  std::filesystem::remove(path);
}

TEST(CliTest, OutputsAreByteStable) {
  const std::string m = DataPath("poole.json"), i = DataPath("all16.csv");
  for (const std::vector<std::string>& args :
       std::vector<std::vector<std::string>>{
           {"predict", "-m", m, "-i", i},
           {"axp", "-m", m, "-i", i},
           {"cxp", "-m", m, "-i", i},
           {"enum", "-m", m, "-i", i},
           {"enum", "--mode", "cxp", "-m", m, "-i", i},
           {"verify", "-m", m, "-i", i}}) {
    const CliResult a = Cli(args), b = Cli(args);
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(a.out, b.out) << args[0];
  }
}

TEST(CliTest, ExitCodes) {
  EXPECT_EQ(Cli({}).code, kExitUsage);
  EXPECT_EQ(Cli({"bogus"}).code, kExitUsage);
  EXPECT_EQ(Cli({"predict", "-m", DataPath("poole.json")}).code, kExitUsage);
  EXPECT_EQ(Cli({"--help"}).code, kExitOk);
  EXPECT_EQ(Cli({"axp", "-m", DataPath("poole.json"), "-i", DataPath("e2.csv"),
                 "--order", "A,T"})
                .code,
            kExitUsage);

  const CliResult missing = Cli({"predict", "-m", DataPath("nope.json"), "-i",
                           DataPath("e2.csv")});
  EXPECT_EQ(missing.code, kExitInput);
  EXPECT_THAT(missing.err, HasSubstr("error"));
  const CliResult mismatch = Cli({"predict", "-m", DataPath("three_class.json"),
                            "-i", DataPath("e2.csv")});
  EXPECT_EQ(mismatch.code, kExitInput);
  EXPECT_THAT(mismatch.err, HasSubstr("unknown feature"));

  ::setenv("XDUAL_BUDGET", "8", 1);
  const CliResult budget = Cli({"verify", "-m", DataPath("ensemble10.json"), "-i",
                          DataPath("ensemble10_100.csv")});
  ::unsetenv("XDUAL_BUDGET");
  EXPECT_EQ(budget.code, kExitBudget);
}

}  // namespace
}  // namespace xdual
