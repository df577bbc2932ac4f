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

#include "xdual/oracle.h"

#include <string>
#include <utility>

#include "xdual/error.h"

namespace xdual {
namespace {

class ScopedTimer {
 public:
  explicit ScopedTimer(std::chrono::nanoseconds& sink)
      : sink_(sink), start_(std::chrono::steady_clock::now()) {}
  ~ScopedTimer() { sink_ += std::chrono::steady_clock::now() - start_; }

 private:
  std::chrono::nanoseconds& sink_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

Oracle::Oracle(std::shared_ptr<const Model> model, OracleOptions options)
    : model_(std::move(model)), options_(options) {}

bool Oracle::Entails(const PartialAssignment& cube, ClassLabel label) {
  ++stats_.entailment_calls;
  ScopedTimer timer(stats_.entailment_time);
  std::vector<bool> mask(model_->num_classes(), true);
  mask[label.index] = false;
  return !FirstCompletion(cube, mask).has_value();
}

std::optional<Instance> Oracle::FindCounterexample(
    const PartialAssignment& cube, std::span<const ClassLabel> targets) {
  ++stats_.witness_calls;
  ScopedTimer timer(stats_.witness_time);
  return FirstCompletion(cube, TargetMask(targets));
}

std::vector<bool> Oracle::TargetMask(
    std::span<const ClassLabel> targets) const {
  std::vector<bool> mask(model_->num_classes(), false);
  for (ClassLabel t : targets) {
    if (t.index >= mask.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "target class index " + std::to_string(t.index) +
                      " out of range");
    }
    mask[t.index] = true;
  }
  return mask;
}

std::optional<Instance> Oracle::FirstCompletion(
    const PartialAssignment& cube, const std::vector<bool>& mask) const {
  if (cube.num_features() != model_->space().num_features()) {
    throw Error(ErrorCode::kInvalidArgument,
                "assignment does not match the model's feature space");
  }
  if (const auto* tree = std::get_if<DecisionTree>(&model_->classifier())) {
    return TreeFirstCompletion(*tree, cube, mask);
  }
  return EnumerateFirstCompletion(cube, mask);
}

// Fixes the free features one at a time, keeping the smallest value from
// which a target leaf is still reachable.
std::optional<Instance> Oracle::TreeFirstCompletion(
    const DecisionTree& tree, const PartialAssignment& cube,
    const std::vector<bool>& mask) const {
  auto reaches_target = [&](const PartialAssignment& c) {
    return tree.AnyFeasibleLeaf(
        c, [&](const ClassLabel& label) { return mask[label.index]; });
  };
  if (!reaches_target(cube)) return std::nullopt;

  const FeatureSpace& space = model_->space();
  PartialAssignment current = cube;
  for (FeatureId f = 0; f < space.num_features(); ++f) {
    if (current.is_fixed(f)) continue;
    bool fixed = false;
    for (ValueId v = 0; v < space.domain_size(f); ++v) {
      current.Add({f, v});
      if (reaches_target(current)) {
        fixed = true;
        break;
      }
      current.Remove(f);
    }
    if (!fixed) {
      throw Error(ErrorCode::kDefect,
                  "reachable target lost while fixing feature '" +
                      space.feature(f).name + "'");
    }
  }
  std::vector<ValueId> values;
  for (FeatureId f = 0; f < space.num_features(); ++f) {
    values.push_back(*current.value(f));
  }
  return Instance(std::move(values));
}

std::optional<Instance> Oracle::EnumerateFirstCompletion(
    const PartialAssignment& cube, const std::vector<bool>& mask) const {
  const FeatureSpace& space = model_->space();
  std::vector<FeatureId> free;
  std::uint64_t completions = 1;
  for (FeatureId f = 0; f < space.num_features(); ++f) {
    if (cube.is_fixed(f)) continue;
    free.push_back(f);
    completions *= space.domain_size(f);
    if (completions > options_.completion_cap) {
      throw Error(ErrorCode::kSearchSpaceExceeded,
                  "query needs more than " +
                      std::to_string(options_.completion_cap) +
                      " completions; fix more features or raise the cap");
    }
  }

  std::vector<ValueId> values(space.num_features(), 0);
  for (FeatureId f = 0; f < space.num_features(); ++f) {
    if (const auto v = cube.value(f)) values[f] = *v;
  }
  // Odometer over the free features, last feature fastest.
  while (true) {
    Instance point(values);
    if (mask[model_->Predict(point).index]) return point;
    std::size_t k = free.size();
    while (k > 0) {
      const FeatureId f = free[k - 1];
      if (++values[f] < space.domain_size(f)) break;
      values[f] = 0;
      --k;
    }
    if (k == 0) return std::nullopt;
  }
}

}  // namespace xdual
