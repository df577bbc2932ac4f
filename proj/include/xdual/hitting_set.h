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

// Exact minimal hitting sets with superset blocking.

#ifndef XDUAL_HITTING_SET_H_
#define XDUAL_HITTING_SET_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "xdual/model.h"

namespace xdual {

struct HittingSetInstance {
  // Elements are 0 .. universe_size-1.
  std::size_t universe_size = 0;
  // Every answer intersects each of these. Within a set, elements are tried
  // in the listed order, so the listing order steers which answer is found.
  std::vector<FeatureSet> to_hit;
  // No answer is a superset of any of these.
  std::vector<FeatureSet> blocked;
};

struct HittingSetOptions {
  static constexpr std::uint64_t kDefaultNodeBudget = 10'000'000;

  // Search for a minimum-cardinality answer instead of the first
  // subset-minimal one.
  bool smallest = false;
  std::uint64_t node_budget = kDefaultNodeBudget;
};

// A subset-minimal hitting set of `to_hit` that contains no blocked set, or
// nullopt if none exists. Deterministic; the result is sorted. Throws
// Error(kBudgetExceeded) once the search visits more than the node budget.
std::optional<FeatureSet> MinimalHittingSet(const HittingSetInstance& instance,
                                            const HittingSetOptions& options = {});

// Every minimal hitting set of `family`, by iterating MinimalHittingSet with
// the answers found so far as blocked sets.
std::vector<FeatureSet> AllMinimalHittingSets(
    std::size_t universe_size, std::span<const FeatureSet> family,
    const HittingSetOptions& options = {});

// True iff `candidate` intersects every set of `family`.
bool Hits(std::span<const FeatureId> candidate,
          std::span<const FeatureSet> family);

// True iff `candidate` hits `family` and no proper subset does.
bool IsMinimalHittingSet(std::span<const FeatureId> candidate,
                         std::span<const FeatureSet> family);

}  // namespace xdual

#endif  // XDUAL_HITTING_SET_H_
