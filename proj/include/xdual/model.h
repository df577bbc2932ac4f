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

// Domain types: categorical feature spaces, literals, (partial) assignments
// and the two classifier families (decision trees, additive tree ensembles).

#ifndef XDUAL_MODEL_H_
#define XDUAL_MODEL_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace xdual {

using FeatureId = std::size_t;
using ValueId = std::size_t;

// Sorted list of feature indices. Explanations are subsets of an instance,
// so a set of features identifies a set of instance literals.
using FeatureSet = std::vector<FeatureId>;

struct Feature {
  std::string name;
  std::vector<std::string> values;
};

class FeatureSpace {
 public:
  // Upper bound on the number of points in a space.
  static constexpr std::uint64_t kMaxSpaceSize = std::uint64_t{1} << 62;

  FeatureSpace() = default;
  explicit FeatureSpace(std::vector<Feature> features)
      : features_(std::move(features)) {}

  std::size_t num_features() const { return features_.size(); }
  const Feature& feature(FeatureId f) const { return features_[f]; }
  const std::vector<Feature>& features() const { return features_; }
  std::size_t domain_size(FeatureId f) const {
    return features_[f].values.size();
  }

  std::optional<FeatureId> FindFeature(std::string_view name) const;
  std::optional<ValueId> FindValue(FeatureId f, std::string_view value) const;

  // Number of points in the space, or nullopt if it exceeds kMaxSpaceSize.
  std::optional<std::uint64_t> Size() const;

  friend bool operator==(const FeatureSpace& a, const FeatureSpace& b);

 private:
  std::vector<Feature> features_;
};

// (feature = value).
struct Literal {
  FeatureId feature = 0;
  ValueId value = 0;

  friend auto operator<=>(const Literal&, const Literal&) = default;
};

// A consistent set of literals: at most one value per feature. Unassigned
// features range over their whole domain (cube semantics).
class PartialAssignment {
 public:
  PartialAssignment() = default;
  explicit PartialAssignment(std::size_t num_features)
      : values_(num_features, kFree) {}

  std::size_t num_features() const { return values_.size(); }
  bool is_fixed(FeatureId f) const { return values_[f] != kFree; }
  std::optional<ValueId> value(FeatureId f) const {
    if (values_[f] == kFree) return std::nullopt;
    return static_cast<ValueId>(values_[f]);
  }

  // Adds a literal. Re-adding the same literal is a no-op; a literal that
  // conflicts with an existing one raises kInvalidArgument.
  void Add(Literal literal);
  void Remove(FeatureId f) { values_[f] = kFree; }

  PartialAssignment With(Literal literal) const;
  PartialAssignment Without(FeatureId f) const;

  // Number of literals.
  std::size_t size() const;
  bool empty() const { return size() == 0; }
  bool is_full() const { return size() == values_.size(); }

  std::vector<Literal> literals() const;
  FeatureSet features() const;

  bool IsSubsetOf(const PartialAssignment& other) const;

  friend auto operator<=>(const PartialAssignment&,
                          const PartialAssignment&) = default;

 private:
  static constexpr std::int32_t kFree = -1;
  std::vector<std::int32_t> values_;
};

// A point of the feature space: one literal per feature.
class Instance {
 public:
  Instance() = default;
  explicit Instance(std::vector<ValueId> values) : values_(std::move(values)) {}

  std::size_t num_features() const { return values_.size(); }
  ValueId value(FeatureId f) const { return values_[f]; }
  const std::vector<ValueId>& values() const { return values_; }
  Literal literal(FeatureId f) const { return {f, values_[f]}; }

  PartialAssignment AsAssignment() const;

  friend auto operator<=>(const Instance&, const Instance&) = default;

 private:
  std::vector<ValueId> values_;
};

// Sub-assignment of `instance` on the features in `keep`.
PartialAssignment Restrict(const Instance& instance,
                           std::span<const FeatureId> keep);

// Sub-assignment of `instance` on every feature not in `drop`.
PartialAssignment RestrictComplement(const Instance& instance,
                                     std::span<const FeatureId> drop);

struct ClassLabel {
  std::size_t index = 0;

  friend auto operator<=>(const ClassLabel&, const ClassLabel&) = default;
};

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

template <typename LeafValue>
struct TreeNode {
  // Unset for leaves.
  std::optional<FeatureId> feature;
  // children[v] is the node reached when `feature` takes value v.
  std::vector<NodeId> children;
  LeafValue leaf{};

  bool is_leaf() const { return !feature.has_value(); }
};

// A tree over categorical features where each internal node branches on
// every value of its feature. Used with class leaves (DecisionTree) and with
// integer score leaves (ScoreTree, the members of an AdditiveEnsemble).
template <typename LeafValue>
class BasicTree {
 public:
  using Node = TreeNode<LeafValue>;

  BasicTree() : nodes_(1), root_(0) {}
  BasicTree(std::vector<Node> nodes, NodeId root)
      : nodes_(std::move(nodes)), root_(root) {}

  static BasicTree Constant(LeafValue value) {
    Node leaf;
    leaf.leaf = std::move(value);
    return BasicTree({std::move(leaf)}, 0);
  }

  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(NodeId id) const { return nodes_[id]; }
  NodeId root() const { return root_; }

  // Leaf reached by `instance`. Requires a validated tree.
  const LeafValue& Evaluate(const Instance& instance) const {
    NodeId id = root_;
    while (!nodes_[id].is_leaf()) {
      const Node& n = nodes_[id];
      id = n.children[instance.value(*n.feature)];
    }
    return nodes_[id].leaf;
  }

  // True iff some leaf on a path consistent with `cube` satisfies `accept`.
  // A branch is feasible unless its edge literal conflicts with `cube`.
  template <typename Predicate>
  bool AnyFeasibleLeaf(const PartialAssignment& cube,
                       Predicate&& accept) const {
    std::vector<NodeId> stack = {root_};
    while (!stack.empty()) {
      const Node& n = nodes_[stack.back()];
      stack.pop_back();
      if (n.is_leaf()) {
        if (accept(n.leaf)) return true;
        continue;
      }
      if (const auto v = cube.value(*n.feature)) {
        stack.push_back(n.children[*v]);
      } else {
        for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) {
          stack.push_back(*it);
        }
      }
    }
    return false;
  }

  friend bool operator==(const BasicTree& a, const BasicTree& b) {
    if (a.root_ != b.root_ || a.nodes_.size() != b.nodes_.size()) return false;
    for (std::size_t i = 0; i < a.nodes_.size(); ++i) {
      const Node& x = a.nodes_[i];
      const Node& y = b.nodes_[i];
      if (x.feature != y.feature || x.children != y.children) return false;
      if (x.is_leaf() && !(x.leaf == y.leaf)) return false;
    }
    return true;
  }

 private:
  std::vector<Node> nodes_;
  NodeId root_;
};

using DecisionTree = BasicTree<ClassLabel>;
using ScoreTree = BasicTree<std::int64_t>;

// Per-class sums of integer leaf scores; the predicted class is the argmax,
// ties going to the lowest class index. Scores are fixed-point values and
// `scale` records the factor used to convert them to integers.
struct AdditiveEnsemble {
  std::vector<std::vector<ScoreTree>> class_trees;
  std::int64_t scale = 1;

  std::vector<std::int64_t> Scores(const Instance& instance) const;
  ClassLabel Predict(const Instance& instance) const;

  friend bool operator==(const AdditiveEnsemble&,
                         const AdditiveEnsemble&) = default;
};

using Classifier = std::variant<DecisionTree, AdditiveEnsemble>;

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
  std::string ToString() const;
};

// Checks every structural invariant of a classifier against its feature
// space and class list. Each violation names its tree/node/feature.
ValidationReport Validate(const FeatureSpace& space,
                          std::span<const std::string> classes,
                          const Classifier& classifier);

// A validated classifier together with its feature space and class names.
// Immutable once created.
class Model {
 public:
  // Throws Error(kInvalidModel) carrying the validation report.
  static Model Create(FeatureSpace space, std::vector<std::string> classes,
                      Classifier classifier);

  const FeatureSpace& space() const { return space_; }
  const std::vector<std::string>& classes() const { return classes_; }
  std::size_t num_classes() const { return classes_.size(); }
  const Classifier& classifier() const { return classifier_; }
  bool is_tree() const {
    return std::holds_alternative<DecisionTree>(classifier_);
  }

  ClassLabel Predict(const Instance& instance) const;

  std::optional<ClassLabel> FindClass(std::string_view name) const;
  const std::string& class_name(ClassLabel label) const {
    return classes_[label.index];
  }

  // Validates `values` against the space (kInvalidArgument on mismatch).
  Instance MakeInstance(std::vector<ValueId> values) const;
  // Instance from category names given in feature order.
  Instance MakeInstance(std::span<const std::string> value_names) const;

  friend bool operator==(const Model&, const Model&) = default;

 private:
  Model(FeatureSpace space, std::vector<std::string> classes,
        Classifier classifier)
      : space_(std::move(space)),
        classes_(std::move(classes)),
        classifier_(std::move(classifier)) {}

  FeatureSpace space_;
  std::vector<std::string> classes_;
  Classifier classifier_;
};

// "{f=v, g=w}" with literals in feature declaration order.
std::string FormatAssignment(const FeatureSpace& space,
                             const PartialAssignment& assignment);

// The pair (B, R) of an explanation query: background B is the complement
// of the model's prediction, relaxable literals R are the instance. An
// optional target set restricts the contrast classes.
class ExplanationProblem {
 public:
  // The prediction is computed from the model. Throws kInvalidArgument if
  // a target is the prediction or not a class of the model.
  ExplanationProblem(std::shared_ptr<const Model> model, Instance instance,
                     std::vector<ClassLabel> targets = {});

  const Model& model() const { return *model_; }
  const std::shared_ptr<const Model>& shared_model() const { return model_; }
  const Instance& instance() const { return instance_; }
  ClassLabel prediction() const { return prediction_; }
  std::size_t num_features() const { return instance_.num_features(); }

  // The target set; empty for basic (any other class) contrast.
  const std::vector<ClassLabel>& targets() const { return targets_; }
  bool is_targeted() const { return !targets_.empty(); }

  // Classes a contrastive completion may predict: the targets, or every
  // class except the prediction.
  std::vector<ClassLabel> contrast_classes() const;

  PartialAssignment Keep(std::span<const FeatureId> keep) const {
    return Restrict(instance_, keep);
  }
  PartialAssignment Drop(std::span<const FeatureId> drop) const {
    return RestrictComplement(instance_, drop);
  }

 private:
  void CheckTargets();

  std::shared_ptr<const Model> model_;
  Instance instance_;
  ClassLabel prediction_;
  std::vector<ClassLabel> targets_;
};

}  // namespace xdual

#endif  // XDUAL_MODEL_H_
