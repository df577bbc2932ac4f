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

// Enumeration of all explanations of a prediction, the check that the AXp
// and CXp families are minimal-hitting-set duals of each other, and an
// exhaustive reference implementation used as an independent oracle.

#ifndef XDUAL_ENUMERATE_H_
#define XDUAL_ENUMERATE_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "xdual/explain.h"
#include "xdual/hitting_set.h"
#include "xdual/model.h"
#include "xdual/oracle.h"

namespace xdual {

struct EnumerationOptions {
  static constexpr std::size_t kDefaultMaxExplanations = 100'000;

  std::vector<FeatureId> order;
  // Minimum-cardinality hitting-set candidates in EnumerateAll.
  bool smallest = false;
  std::uint64_t mhs_node_budget = HittingSetOptions::kDefaultNodeBudget;
  // Reporting more explanations than this throws kBudgetExceeded.
  std::size_t max_explanations = kDefaultMaxExplanations;
  // Stop (without error) after this many explanations; 0 for no limit.
  std::size_t limit = 0;
};

enum class ExplanationKind { kAbductive, kContrastive };

// Called with each explanation as soon as it is found.
using ExplanationSink =
    std::function<void(ExplanationKind, const PartialAssignment&)>;

// The blocking collections of the dual enumeration: reported AXps (no later
// candidate may contain one) and reported CXps (every later candidate must
// hit each one).
struct EnumerationState {
  std::vector<FeatureSet> axps;
  std::vector<FeatureSet> cxps;
};

struct EnumerationResult {
  std::vector<AXp> axps;
  std::vector<CXp> cxps;
  std::size_t iterations = 0;
  // False if `limit` stopped the enumeration early.
  bool complete = true;
};

// Every CXp of the problem (targeted CXps when it has targets), by repeated
// blocked extraction.
EnumerationResult EnumerateCxps(Oracle& oracle, const ExplanationProblem& problem,
                                const EnumerationOptions& options = {},
                                const ExplanationSink& sink = {});

// Every AXp and every CXp by hitting-set duality. Each candidate is a
// minimal hitting set of the CXps found so far containing no AXp found so
// far. A candidate without counterexample is an AXp; otherwise the
// counterexample seeds a new CXp disjoint from the candidate. Requires a
// basic (untargeted) problem.
EnumerationResult EnumerateAll(Oracle& oracle, const ExplanationProblem& problem,
                               const EnumerationOptions& options = {},
                               const ExplanationSink& sink = {});

struct DualityReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

using ElementFormatter = std::function<std::string(FeatureId)>;

// Checks that each AXp is a minimal hitting set of the CXps, each CXp a
// minimal hitting set of the AXps, and that each family is exactly the
// set of all minimal hitting sets of the other.
DualityReport VerifyDuality(std::span<const FeatureSet> axps,
                            std::span<const FeatureSet> cxps,
                            const ElementFormatter& format = {});

// Names elements after the instance literals of `problem`.
ElementFormatter LiteralFormatter(const ExplanationProblem& problem);

struct BruteForceOptions {
  std::size_t max_features = 16;
  std::uint64_t max_evaluations = 100'000'000;
};

struct BruteForceResult {
  std::vector<FeatureSet> axps;
  std::vector<FeatureSet> cxps;
};

// All AXps and CXps by checking every subset of the instance against every
// completion with plain model evaluation. Throws kTooLarge beyond the caps.
BruteForceResult BruteForceExplanations(const ExplanationProblem& problem,
                                        const BruteForceOptions& options = {});

// Stable sort by explanation size.
void SortBySize(std::vector<FeatureSet>& sets);

std::string FormatSet(std::span<const FeatureId> set,
                      const ElementFormatter& format = {});

}  // namespace xdual

#endif  // XDUAL_ENUMERATE_H_
