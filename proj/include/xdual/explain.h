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

// Extraction of single explanations for one prediction.
//
// An abductive explanation (AXp) is a subset-minimal set of instance
// literals that entails the prediction. A contrastive explanation (CXp) is
// a subset-minimal set of instance literals whose release lets the model
// predict another class (or a class of the problem's target set).

#ifndef XDUAL_EXPLAIN_H_
#define XDUAL_EXPLAIN_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xdual/model.h"
#include "xdual/oracle.h"

namespace xdual {

struct AXp {
  PartialAssignment literals;

  FeatureSet features() const { return literals.features(); }
  friend bool operator==(const AXp&, const AXp&) = default;
};

struct CXp {
  PartialAssignment literals;
  // Empty for a basic CXp.
  std::vector<ClassLabel> targets;

  FeatureSet features() const { return literals.features(); }
  friend bool operator==(const CXp&, const CXp&) = default;
};

// Replacement values for the features of a CXp that change the prediction.
struct CxpWitness {
  CXp cxp;
  PartialAssignment replacement;
  // Prediction of (instance \ cxp) + replacement.
  ClassLabel predicted;
};

// Feature processing order; empty means declaration order. Otherwise a
// permutation of all features (kInvalidArgument if not).
using FeatureOrder = std::span<const FeatureId>;

// Deletion-based extraction: starting from `seed` (the whole instance by
// default), each literal is dropped in `order` when the rest still entails
// the prediction. One entailment call for the precondition, then exactly
// one per seed literal. Throws kSeedNotSufficient if the seed does not
// entail the prediction.
AXp ExtractAxp(Oracle& oracle, const ExplanationProblem& problem,
               const std::optional<PartialAssignment>& seed = std::nullopt,
               FeatureOrder order = {});

// Grow-based extraction of a CXp (of the target set, when the problem has
// one). `blocked` lists previously reported CXps as feature sets; the result
// keeps at least one literal of each, so a blocked CXp is never returned
// again. Returns nullopt when no unblocked CXp exists.
//
// Without blocking, a basic problem costs one entailment call (does any
// CXp exist?) and at most |instance| counterexample queries; a targeted
// problem checks existence with one extra counterexample query instead.
// Each successful query keeps every feature on which its witness agrees
// with the instance.
std::optional<CXp> ExtractCxp(Oracle& oracle, const ExplanationProblem& problem,
                              std::span<const FeatureSet> blocked = {},
                              FeatureOrder order = {});

// Extraction seeded by a counterexample: `witness` must be a
// completion of the instance restricted to `kept` that is predicted in a
// contrast class. The returned CXp is disjoint from `kept`.
CXp ExtractCxpFromWitness(Oracle& oracle, const ExplanationProblem& problem,
                          const FeatureSet& kept, const Instance& witness,
                          FeatureOrder order = {});

// Targeted CXp by the fix loop: all features start free and each is fixed
// to its instance value while some target class remains reachable. Uses the
// problem's targets, or every other class when it has none. Throws
// kTargetUnreachable if no point of the space is predicted in the targets.
CXp TargetedCxp(Oracle& oracle, const ExplanationProblem& problem,
                FeatureOrder order = {});

// Lexicographically first replacement for the CXp features that moves the
// prediction into the contrast classes. Throws kDefect if `cxp` is not a
// valid CXp.
CxpWitness MakeCxpWitness(Oracle& oracle, const ExplanationProblem& problem,
                          const CXp& cxp);

// Invariant checkers, by direct oracle calls. Return a description of the
// first violation, or nullopt for a valid explanation.
std::optional<std::string> CheckAxp(Oracle& oracle,
                                    const ExplanationProblem& problem,
                                    const PartialAssignment& candidate);
std::optional<std::string> CheckCxp(Oracle& oracle,
                                    const ExplanationProblem& problem,
                                    const PartialAssignment& candidate);

// Resolves an order argument to a full permutation.
std::vector<FeatureId> ResolveOrder(std::size_t num_features,
                                    FeatureOrder order);

}  // namespace xdual

#endif  // XDUAL_EXPLAIN_H_
