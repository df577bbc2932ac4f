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

// Exact entailment and counterexample queries against a classifier.
//
// Decision trees are queried by feasible-path traversal, which is
// polynomial in the tree size. Additive ensembles are queried by exhaustive
// enumeration of the free features, guarded by a completion cap.

#ifndef XDUAL_ORACLE_H_
#define XDUAL_ORACLE_H_

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "xdual/model.h"

namespace xdual {

struct OracleStats {
  std::uint64_t entailment_calls = 0;
  std::uint64_t witness_calls = 0;
  std::chrono::nanoseconds entailment_time{0};
  std::chrono::nanoseconds witness_time{0};

  std::uint64_t total_calls() const { return entailment_calls + witness_calls; }
  std::chrono::nanoseconds total_time() const {
    return entailment_time + witness_time;
  }
};

struct OracleOptions {
  static constexpr std::uint64_t kDefaultCompletionCap = std::uint64_t{1}
                                                         << 20;
  // Maximum number of completions an ensemble query may enumerate.
  std::uint64_t completion_cap = kDefaultCompletionCap;
};

// One oracle per explanation session: queries are pure, the statistics are
// the only mutable state. Not thread-safe; use one Oracle per thread.
class Oracle {
 public:
  explicit Oracle(std::shared_ptr<const Model> model,
                  OracleOptions options = {});

  const Model& model() const { return *model_; }
  const OracleStats& stats() const { return stats_; }
  const OracleOptions& options() const { return options_; }

  // Not counted as an oracle query.
  ClassLabel Predict(const Instance& instance) const {
    return model_->Predict(instance);
  }

  // True iff every completion of `cube` is predicted as `label`.
  bool Entails(const PartialAssignment& cube, ClassLabel label);

  // The lexicographically first completion of `cube` (first feature most
  // significant, values in domain order) predicted in `targets`.
  std::optional<Instance> FindCounterexample(
      const PartialAssignment& cube, std::span<const ClassLabel> targets);

 private:
  std::vector<bool> TargetMask(std::span<const ClassLabel> targets) const;
  std::optional<Instance> FirstCompletion(const PartialAssignment& cube,
                                          const std::vector<bool>& mask) const;
  std::optional<Instance> TreeFirstCompletion(
      const DecisionTree& tree, const PartialAssignment& cube,
      const std::vector<bool>& mask) const;
  std::optional<Instance> EnumerateFirstCompletion(
      const PartialAssignment& cube, const std::vector<bool>& mask) const;

  std::shared_ptr<const Model> model_;
  OracleOptions options_;
  OracleStats stats_;
};

}  // namespace xdual

#endif  // XDUAL_ORACLE_H_
