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

#include "xdual/explain.h"

#include <algorithm>
#include <numeric>
#include <utility>

#include "xdual/error.h"
#include "xdual/hitting_set.h"

namespace xdual {
namespace {

std::string LiteralName(const ExplanationProblem& problem, FeatureId f) {
  const Feature& feature = problem.model().space().feature(f);
  return feature.name + "=" + feature.values[problem.instance().value(f)];
}

void CheckSubsetOfInstance(const ExplanationProblem& problem,
                           const PartialAssignment& assignment,
                           const char* what) {
  if (!assignment.IsSubsetOf(problem.instance().AsAssignment())) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + " is not a subset of the instance");
  }
}

// Grows the set of kept instance literals to a maximal one whose cube still
// reaches a contrast class, which the initial kept cube must. Every feature
// on which a `witness` (a completion of the current kept cube predicted in
// `targets`) agrees with the instance is kept without a query. A cube equal
// to the whole instance is never queried, since the instance itself is
// predicted outside the targets. Returns the released features.
FeatureSet GrowKept(Oracle& oracle, const Instance& instance,
                    std::vector<bool> kept,
                    const std::optional<Instance>& witness,
                    std::span<const ClassLabel> targets,
                    std::span<const FeatureId> order) {
  std::size_t num_kept = 0;
  auto absorb = [&](const Instance& point) {
    for (FeatureId f = 0; f < kept.size(); ++f) {
      if (!kept[f] && point.value(f) == instance.value(f)) {
        kept[f] = true;
        ++num_kept;
      }
    }
  };
  auto kept_cube = [&] {
    PartialAssignment cube(kept.size());
    for (FeatureId f = 0; f < kept.size(); ++f) {
      if (kept[f]) cube.Add(instance.literal(f));
    }
    return cube;
  };

  num_kept = std::count(kept.begin(), kept.end(), true);
  if (witness) absorb(*witness);
  for (FeatureId f : order) {
    if (kept[f] || num_kept + 1 == kept.size()) continue;
    const PartialAssignment cube = kept_cube().With(instance.literal(f));
    if (auto point = oracle.FindCounterexample(cube, targets)) absorb(*point);
  }
  FeatureSet released;
  for (FeatureId f = 0; f < kept.size(); ++f) {
    if (!kept[f]) released.push_back(f);
  }
  return released;
}

CXp MakeCxp(const ExplanationProblem& problem, const FeatureSet& released) {
  return CXp{problem.Keep(released), problem.targets()};
}

}  // namespace

std::vector<FeatureId> ResolveOrder(std::size_t num_features,
                                    FeatureOrder order) {
  std::vector<FeatureId> result(num_features);
  if (order.empty()) {
    std::iota(result.begin(), result.end(), FeatureId{0});
    return result;
  }
  result.assign(order.begin(), order.end());
  std::vector<FeatureId> sorted = result;
  std::sort(sorted.begin(), sorted.end());
  for (FeatureId f = 0; f < num_features; ++f) {
    if (sorted.size() != num_features || sorted[f] != f) {
      throw Error(ErrorCode::kInvalidArgument,
                  "feature order is not a permutation of all features");
    }
  }
  return result;
}

AXp ExtractAxp(Oracle& oracle, const ExplanationProblem& problem,
               const std::optional<PartialAssignment>& seed,
               FeatureOrder order) {
  PartialAssignment current =
      seed ? *seed : problem.instance().AsAssignment();
  CheckSubsetOfInstance(problem, current, "seed");
  if (!oracle.Entails(current, problem.prediction())) {
    throw Error(ErrorCode::kSeedNotSufficient,
                "seed does not entail the prediction");
  }
  for (FeatureId f : ResolveOrder(problem.num_features(), order)) {
    if (!current.is_fixed(f)) continue;
    if (oracle.Entails(current.Without(f), problem.prediction())) {
      current.Remove(f);
    }
  }
  return AXp{std::move(current)};
}

std::optional<CXp> ExtractCxp(Oracle& oracle, const ExplanationProblem& problem,
                              std::span<const FeatureSet> blocked,
                              FeatureOrder order) {
  const std::vector<FeatureId> resolved =
      ResolveOrder(problem.num_features(), order);
  const std::vector<ClassLabel> targets = problem.contrast_classes();
  const std::size_t n = problem.num_features();

  if (blocked.empty()) {
    std::optional<Instance> witness;
    if (problem.is_targeted()) {
      witness = oracle.FindCounterexample(PartialAssignment(n), targets);
      if (!witness) return std::nullopt;
    } else if (oracle.Entails(PartialAssignment(n), problem.prediction())) {
      return std::nullopt;
    }
    return MakeCxp(problem, GrowKept(oracle, problem.instance(),
                                     std::vector<bool>(n, false), witness,
                                     targets, resolved));
  }

  // The kept set must hit every blocked CXp. Candidate seeds are the minimal
  // hitting sets of the blocked family; a seed that entails the prediction
  // is blocked together with its supersets, which entail it as well.
  HittingSetInstance seeds;
  seeds.universe_size = n;
  seeds.to_hit.assign(blocked.begin(), blocked.end());
  while (const auto seed = MinimalHittingSet(seeds)) {
    if (const auto witness =
            oracle.FindCounterexample(problem.Keep(*seed), targets)) {
      std::vector<bool> kept(n, false);
      for (FeatureId f : *seed) kept[f] = true;
      return MakeCxp(problem, GrowKept(oracle, problem.instance(),
                                       std::move(kept), *witness, targets,
                                       resolved));
    }
    seeds.blocked.push_back(*seed);
  }
  return std::nullopt;
}

CXp ExtractCxpFromWitness(Oracle& oracle, const ExplanationProblem& problem,
                          const FeatureSet& kept, const Instance& witness,
                          FeatureOrder order) {
  const std::vector<FeatureId> resolved =
      ResolveOrder(problem.num_features(), order);
  std::vector<bool> kept_mask(problem.num_features(), false);
  for (FeatureId f : kept) kept_mask[f] = true;
  return MakeCxp(problem, GrowKept(oracle, problem.instance(),
                                   std::move(kept_mask), witness,
                                   problem.contrast_classes(), resolved));
}

CXp TargetedCxp(Oracle& oracle, const ExplanationProblem& problem,
                FeatureOrder order) {
  const std::vector<FeatureId> resolved =
      ResolveOrder(problem.num_features(), order);
  const std::vector<ClassLabel> targets = problem.contrast_classes();
  const std::size_t n = problem.num_features();
  const auto witness =
      oracle.FindCounterexample(PartialAssignment(n), targets);
  if (!witness) {
    throw Error(ErrorCode::kTargetUnreachable,
                "no point of the feature space is predicted in the target set");
  }
  return MakeCxp(problem,
                 GrowKept(oracle, problem.instance(),
                          std::vector<bool>(n, false), *witness, targets,
                          resolved));
}

CxpWitness MakeCxpWitness(Oracle& oracle, const ExplanationProblem& problem,
                          const CXp& cxp) {
  CheckSubsetOfInstance(problem, cxp.literals, "CXp");
  const FeatureSet features = cxp.features();
  const auto point = oracle.FindCounterexample(problem.Drop(features),
                                               problem.contrast_classes());
  if (!point) {
    throw Error(ErrorCode::kDefect,
                "no completion of the instance without the CXp reaches a "
                "contrast class");
  }
  PartialAssignment replacement(problem.num_features());
  for (FeatureId f : features) {
    if (point->value(f) == problem.instance().value(f)) {
      throw Error(ErrorCode::kDefect,
                  "witness keeps " + LiteralName(problem, f) +
                      ", so the CXp is not minimal");
    }
    replacement.Add(point->literal(f));
  }
  return CxpWitness{cxp, std::move(replacement), oracle.Predict(*point)};
}

std::optional<std::string> CheckAxp(Oracle& oracle,
                                    const ExplanationProblem& problem,
                                    const PartialAssignment& candidate) {
  if (!candidate.IsSubsetOf(problem.instance().AsAssignment())) {
    return "AXp is not a subset of the instance";
  }
  if (!oracle.Entails(candidate, problem.prediction())) {
    return "AXp does not entail the prediction";
  }
  for (FeatureId f : candidate.features()) {
    if (oracle.Entails(candidate.Without(f), problem.prediction())) {
      return "AXp is not minimal: " + LiteralName(problem, f) +
             " can be dropped";
    }
  }
  return std::nullopt;
}

std::optional<std::string> CheckCxp(Oracle& oracle,
                                    const ExplanationProblem& problem,
                                    const PartialAssignment& candidate) {
  if (!candidate.IsSubsetOf(problem.instance().AsAssignment())) {
    return "CXp is not a subset of the instance";
  }
  const std::vector<ClassLabel> targets = problem.contrast_classes();
  const FeatureSet features = candidate.features();
  const PartialAssignment rest = problem.Drop(features);
  if (!oracle.FindCounterexample(rest, targets)) {
    return "releasing the CXp does not change the prediction";
  }
  for (FeatureId f : features) {
    if (oracle.FindCounterexample(rest.With(problem.instance().literal(f)),
                                  targets)) {
      return "CXp is not minimal: " + LiteralName(problem, f) +
             " can be kept";
    }
  }
  return std::nullopt;
}

}  // namespace xdual
