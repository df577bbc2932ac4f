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

#include "xdual/model.h"

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "xdual/error.h"

namespace xdual {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid-argument";
    case ErrorCode::kParse:
      return "parse-error";
    case ErrorCode::kSchema:
      return "schema-error";
    case ErrorCode::kInvalidModel:
      return "invalid-model";
    case ErrorCode::kSearchSpaceExceeded:
      return "search-space-exceeded";
    case ErrorCode::kBudgetExceeded:
      return "budget-exceeded";
    case ErrorCode::kTooLarge:
      return "too-large";
    case ErrorCode::kSeedNotSufficient:
      return "seed-not-sufficient";
    case ErrorCode::kTargetUnreachable:
      return "target-unreachable";
    case ErrorCode::kDefect:
      return "defect";
  }
  return "unknown";
}

std::optional<FeatureId> FeatureSpace::FindFeature(std::string_view name) const {
  for (FeatureId f = 0; f < features_.size(); ++f) {
    if (features_[f].name == name) return f;
  }
  return std::nullopt;
}

std::optional<ValueId> FeatureSpace::FindValue(FeatureId f,
                                               std::string_view value) const {
  const auto& values = features_[f].values;
  for (ValueId v = 0; v < values.size(); ++v) {
    if (values[v] == value) return v;
  }
  return std::nullopt;
}

std::optional<std::uint64_t> FeatureSpace::Size() const {
  std::uint64_t size = 1;
  for (const Feature& feature : features_) {
    const std::uint64_t d = feature.values.size();
    if (d == 0) return 0;
    if (size > kMaxSpaceSize / d) return std::nullopt;
    size *= d;
  }
  return size;
}

bool operator==(const FeatureSpace& a, const FeatureSpace& b) {
  if (a.features_.size() != b.features_.size()) return false;
  for (std::size_t i = 0; i < a.features_.size(); ++i) {
    if (a.features_[i].name != b.features_[i].name ||
        a.features_[i].values != b.features_[i].values) {
      return false;
    }
  }
  return true;
}

void PartialAssignment::Add(Literal literal) {
  if (literal.feature >= values_.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "literal feature index " + std::to_string(literal.feature) +
                    " out of range");
  }
  const auto value = static_cast<std::int32_t>(literal.value);
  std::int32_t& slot = values_[literal.feature];
  if (slot != kFree && slot != value) {
    throw Error(ErrorCode::kInvalidArgument,
                "inconsistent literals on feature " +
                    std::to_string(literal.feature));
  }
  slot = value;
}

PartialAssignment PartialAssignment::With(Literal literal) const {
  PartialAssignment result = *this;
  result.Add(literal);
  return result;
}

PartialAssignment PartialAssignment::Without(FeatureId f) const {
  PartialAssignment result = *this;
  result.Remove(f);
  return result;
}

std::size_t PartialAssignment::size() const {
  return static_cast<std::size_t>(
      std::count_if(values_.begin(), values_.end(),
                    [](std::int32_t v) { return v != kFree; }));
}

std::vector<Literal> PartialAssignment::literals() const {
  std::vector<Literal> result;
  for (FeatureId f = 0; f < values_.size(); ++f) {
    if (values_[f] != kFree) {
      result.push_back({f, static_cast<ValueId>(values_[f])});
    }
  }
  return result;
}

FeatureSet PartialAssignment::features() const {
  FeatureSet result;
  for (FeatureId f = 0; f < values_.size(); ++f) {
    if (values_[f] != kFree) result.push_back(f);
  }
  return result;
}

bool PartialAssignment::IsSubsetOf(const PartialAssignment& other) const {
  if (other.values_.size() != values_.size()) return false;
  for (std::size_t f = 0; f < values_.size(); ++f) {
    if (values_[f] != kFree && values_[f] != other.values_[f]) return false;
  }
  return true;
}

PartialAssignment Instance::AsAssignment() const {
  PartialAssignment result(values_.size());
  for (FeatureId f = 0; f < values_.size(); ++f) result.Add({f, values_[f]});
  return result;
}

PartialAssignment Restrict(const Instance& instance,
                           std::span<const FeatureId> keep) {
  PartialAssignment result(instance.num_features());
  for (FeatureId f : keep) result.Add(instance.literal(f));
  return result;
}

PartialAssignment RestrictComplement(const Instance& instance,
                                     std::span<const FeatureId> drop) {
  PartialAssignment result = instance.AsAssignment();
  for (FeatureId f : drop) result.Remove(f);
  return result;
}

std::vector<std::int64_t> AdditiveEnsemble::Scores(
    const Instance& instance) const {
  std::vector<std::int64_t> scores(class_trees.size(), 0);
  for (std::size_t c = 0; c < class_trees.size(); ++c) {
    for (const ScoreTree& tree : class_trees[c]) {
      scores[c] += tree.Evaluate(instance);
    }
  }
  return scores;
}

ClassLabel AdditiveEnsemble::Predict(const Instance& instance) const {
  const std::vector<std::int64_t> scores = Scores(instance);
  std::size_t best = 0;
  for (std::size_t c = 1; c < scores.size(); ++c) {
    if (scores[c] > scores[best]) best = c;
  }
  return {best};
}

std::string ValidationReport::ToString() const {
  std::string out;
  for (const std::string& v : violations) {
    if (!out.empty()) out += '\n';
    out += v;
  }
  return out;
}

namespace {

template <typename LeafValue, typename LeafCheck>
void ValidateTree(const BasicTree<LeafValue>& tree, const FeatureSpace& space,
                  const std::string& where, LeafCheck&& check_leaf,
                  std::vector<std::string>& out) {
  const auto& nodes = tree.nodes();
  const auto n = static_cast<NodeId>(nodes.size());
  auto node_name = [&](NodeId id) {
    std::string s = where + "node " + std::to_string(id);
    const auto& node = nodes[id];
    if (!node.is_leaf() && *node.feature < space.num_features()) {
      s += " (feature '" + space.feature(*node.feature).name + "')";
    }
    return s;
  };
  if (n == 0) {
    out.push_back(where + "tree has no nodes");
    return;
  }
  if (tree.root() < 0 || tree.root() >= n) {
    out.push_back(where + "root " + std::to_string(tree.root()) +
                  " out of range");
    return;
  }

  // Per-node checks; a node with a bad shape is not traversed further.
  std::vector<bool> well_formed(n, true);
  for (NodeId id = 0; id < n; ++id) {
    const auto& node = nodes[id];
    if (node.is_leaf()) {
      if (auto problem = check_leaf(node.leaf)) {
        out.push_back(node_name(id) + ": " + *problem);
        well_formed[id] = false;
      }
      continue;
    }
    const FeatureId f = *node.feature;
    if (f >= space.num_features()) {
      out.push_back(node_name(id) + ": feature index " + std::to_string(f) +
                    " out of range");
      well_formed[id] = false;
      continue;
    }
    const auto& values = space.feature(f).values;
    std::vector<std::string> missing;
    for (ValueId v = 0; v < values.size(); ++v) {
      if (v >= node.children.size() || node.children[v] == kNoNode) {
        missing.push_back(values[v]);
      }
    }
    if (!missing.empty() || node.children.size() != values.size()) {
      std::string msg = node_name(id) + ": non-total children";
      if (!missing.empty()) {
        msg += " (missing";
        for (const auto& m : missing) msg += " '" + m + "'";
        msg += ")";
      } else {
        msg += " (" + std::to_string(node.children.size()) +
               " children for a domain of " + std::to_string(values.size()) +
               ")";
      }
      out.push_back(msg);
      well_formed[id] = false;
    }
    for (NodeId child : node.children) {
      if (child != kNoNode && (child < 0 || child >= n)) {
        out.push_back(node_name(id) + ": child " + std::to_string(child) +
                      " out of range");
        well_formed[id] = false;
      }
    }
  }

  // Cycle and reachability check; colors: 0 unvisited, 1 on stack, 2 done.
  std::vector<int> color(n, 0);
  std::vector<NodeId> post_order;
  bool cyclic = false;
  std::vector<std::pair<NodeId, std::size_t>> stack = {{tree.root(), 0}};
  color[tree.root()] = 1;
  while (!stack.empty()) {
    auto& [id, next] = stack.back();
    const auto& node = nodes[id];
    const bool expand = !node.is_leaf() && well_formed[id];
    if (expand && next < node.children.size()) {
      const NodeId child = node.children[next++];
      if (color[child] == 1) {
        out.push_back(node_name(id) + ": cycle through node " +
                      std::to_string(child));
        cyclic = true;
      } else if (color[child] == 0) {
        color[child] = 1;
        stack.push_back({child, 0});
      }
      continue;
    }
    color[id] = 2;
    post_order.push_back(id);
    stack.pop_back();
  }
  for (NodeId id = 0; id < n; ++id) {
    if (color[id] == 0) out.push_back(node_name(id) + ": unreachable from root");
  }
  if (cyclic) return;

  // below[id] = features tested in the subtree rooted at id. A feature
  // repeats on some path iff a node's feature occurs below one of its
  // children.
  std::vector<std::set<FeatureId>> below(n);
  for (NodeId id : post_order) {
    const auto& node = nodes[id];
    if (node.is_leaf() || !well_formed[id]) continue;
    std::set<FeatureId> under;
    for (NodeId child : node.children) {
      under.insert(below[child].begin(), below[child].end());
    }
    if (under.count(*node.feature)) {
      out.push_back(node_name(id) + ": duplicate feature on path");
    }
    under.insert(*node.feature);
    below[id] = std::move(under);
  }
}

template <typename Named>
void CheckUnique(const std::vector<Named>& names, const std::string& what,
                 std::vector<std::string>& out) {
  std::unordered_set<std::string> seen;
  for (const auto& name : names) {
    if (!seen.insert(name).second) {
      out.push_back("duplicate " + what + " '" + name + "'");
    }
  }
}

}  // namespace

ValidationReport Validate(const FeatureSpace& space,
                          std::span<const std::string> classes,
                          const Classifier& classifier) {
  ValidationReport report;
  auto& out = report.violations;

  if (space.num_features() == 0) out.push_back("model declares no features");
  std::vector<std::string> feature_names;
  for (const Feature& feature : space.features()) {
    feature_names.push_back(feature.name);
    if (feature.name.empty()) out.push_back("feature with empty name");
    if (feature.values.empty()) {
      out.push_back("feature '" + feature.name + "': empty domain");
    }
    CheckUnique(feature.values, "category in feature '" + feature.name + "':",
                out);
  }
  CheckUnique(feature_names, "feature", out);
  if (!space.Size()) out.push_back("feature space larger than 2^62 points");

  const std::vector<std::string> class_names(classes.begin(), classes.end());
  if (class_names.size() < 2) out.push_back("fewer than 2 classes");
  CheckUnique(class_names, "class", out);

  if (const auto* tree = std::get_if<DecisionTree>(&classifier)) {
    ValidateTree(
        *tree, space, "tree: ",
        [&](const ClassLabel& label) -> std::optional<std::string> {
          if (label.index >= class_names.size()) {
            return "class index " + std::to_string(label.index) +
                   " out of range";
          }
          return std::nullopt;
        },
        out);
  } else {
    const auto& ensemble = std::get<AdditiveEnsemble>(classifier);
    if (ensemble.scale <= 0) out.push_back("ensemble scale must be positive");
    if (ensemble.class_trees.size() != class_names.size()) {
      out.push_back("ensemble has " +
                    std::to_string(ensemble.class_trees.size()) +
                    " tree groups for " + std::to_string(class_names.size()) +
                    " classes");
    }
    for (std::size_t c = 0; c < ensemble.class_trees.size(); ++c) {
      for (std::size_t t = 0; t < ensemble.class_trees[c].size(); ++t) {
        ValidateTree(
            ensemble.class_trees[c][t], space,
            "trees[" + std::to_string(c) + "][" + std::to_string(t) + "]: ",
            [](std::int64_t) -> std::optional<std::string> {
              return std::nullopt;
            },
            out);
      }
    }
  }
  return report;
}

Model Model::Create(FeatureSpace space, std::vector<std::string> classes,
                    Classifier classifier) {
  const ValidationReport report = Validate(space, classes, classifier);
  if (!report.ok()) {
    throw Error(ErrorCode::kInvalidModel, report.ToString());
  }
  return Model(std::move(space), std::move(classes), std::move(classifier));
}

ClassLabel Model::Predict(const Instance& instance) const {
  if (const auto* tree = std::get_if<DecisionTree>(&classifier_)) {
    return tree->Evaluate(instance);
  }
  return std::get<AdditiveEnsemble>(classifier_).Predict(instance);
}

std::optional<ClassLabel> Model::FindClass(std::string_view name) const {
  for (std::size_t c = 0; c < classes_.size(); ++c) {
    if (classes_[c] == name) return ClassLabel{c};
  }
  return std::nullopt;
}

Instance Model::MakeInstance(std::vector<ValueId> values) const {
  if (values.size() != space_.num_features()) {
    throw Error(ErrorCode::kInvalidArgument,
                "instance has " + std::to_string(values.size()) +
                    " values for " + std::to_string(space_.num_features()) +
                    " features");
  }
  for (FeatureId f = 0; f < values.size(); ++f) {
    if (values[f] >= space_.domain_size(f)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "value index " + std::to_string(values[f]) +
                      " out of range for feature '" + space_.feature(f).name +
                      "'");
    }
  }
  return Instance(std::move(values));
}

Instance Model::MakeInstance(std::span<const std::string> value_names) const {
  if (value_names.size() != space_.num_features()) {
    throw Error(ErrorCode::kInvalidArgument,
                "instance has " + std::to_string(value_names.size()) +
                    " values for " + std::to_string(space_.num_features()) +
                    " features");
  }
  std::vector<ValueId> values;
  for (FeatureId f = 0; f < value_names.size(); ++f) {
    const auto v = space_.FindValue(f, value_names[f]);
    if (!v) {
      throw Error(ErrorCode::kInvalidArgument,
                  "unknown category '" + value_names[f] + "' for feature '" +
                      space_.feature(f).name + "'");
    }
    values.push_back(*v);
  }
  return Instance(std::move(values));
}

std::string FormatAssignment(const FeatureSpace& space,
                             const PartialAssignment& assignment) {
  std::ostringstream out;
  out << '{';
  bool first = true;
  for (const Literal& lit : assignment.literals()) {
    if (!first) out << ", ";
    first = false;
    const Feature& feature = space.feature(lit.feature);
    out << feature.name << '=' << feature.values[lit.value];
  }
  out << '}';
  return out.str();
}

ExplanationProblem::ExplanationProblem(std::shared_ptr<const Model> model,
                                       Instance instance,
                                       std::vector<ClassLabel> targets)
    : model_(std::move(model)),
      instance_(std::move(instance)),
      targets_(std::move(targets)) {
  if (instance_.num_features() != model_->space().num_features()) {
    throw Error(ErrorCode::kInvalidArgument,
                "instance does not match the model's feature space");
  }
  prediction_ = model_->Predict(instance_);
  CheckTargets();
}

void ExplanationProblem::CheckTargets() {
  std::sort(targets_.begin(), targets_.end());
  targets_.erase(std::unique(targets_.begin(), targets_.end()),
                 targets_.end());
  for (ClassLabel t : targets_) {
    if (t.index >= model_->num_classes()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "target class index " + std::to_string(t.index) +
                      " out of range");
    }
    if (t == prediction_) {
      throw Error(ErrorCode::kInvalidArgument,
                  "target set contains the prediction '" +
                      model_->class_name(t) + "'");
    }
  }
}

std::vector<ClassLabel> ExplanationProblem::contrast_classes() const {
  if (!targets_.empty()) return targets_;
  std::vector<ClassLabel> result;
  for (std::size_t c = 0; c < model_->num_classes(); ++c) {
    if (c != prediction_.index) result.push_back({c});
  }
  return result;
}

}  // namespace xdual
