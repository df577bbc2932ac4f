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

#include "xdual/synthetic.h"

#include <string>
#include <utility>
#include <vector>

namespace xdual::synthetic {
namespace {

template <typename LeafValue, typename MakeLeaf, typename ShouldSplit>
NodeId Grow(Rng& rng, const FeatureSpace& space, std::vector<bool>& used,
            std::size_t depth, std::size_t max_depth, MakeLeaf& make_leaf,
            ShouldSplit& should_split,
            std::vector<TreeNode<LeafValue>>& nodes) {
  const auto id = static_cast<NodeId>(nodes.size());
  nodes.emplace_back();
  std::vector<FeatureId> unused;
  for (FeatureId f = 0; f < space.num_features(); ++f) {
    if (!used[f]) unused.push_back(f);
  }
  if (depth == max_depth || unused.empty() || !should_split(depth)) {
    nodes[id].leaf = make_leaf();
    return id;
  }
  const FeatureId f = unused[Uniform(rng, unused.size())];
  used[f] = true;
  std::vector<NodeId> children;
  for (ValueId v = 0; v < space.domain_size(f); ++v) {
    children.push_back(Grow<LeafValue>(rng, space, used, depth + 1, max_depth,
                                       make_leaf, should_split, nodes));
  }
  used[f] = false;
  nodes[id].feature = f;
  nodes[id].children = std::move(children);
  return id;
}

}  // namespace

std::size_t Uniform(Rng& rng, std::size_t n) {
  return static_cast<std::size_t>(rng() % n);
}

std::int64_t UniformIn(Rng& rng, std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(rng() % span);
}

FeatureSpace RandomSpace(Rng& rng, std::size_t num_features,
                         std::size_t min_domain, std::size_t max_domain) {
  std::vector<Feature> features;
  for (std::size_t f = 0; f < num_features; ++f) {
    Feature feature;
    feature.name = "f" + std::to_string(f);
    const std::size_t d = min_domain + Uniform(rng, max_domain - min_domain + 1);
    for (std::size_t v = 0; v < d; ++v) {
      feature.values.push_back("v" + std::to_string(v));
    }
    features.push_back(std::move(feature));
  }
  return FeatureSpace(std::move(features));
}

Model RandomTreeModel(Rng& rng, const TreeShape& shape) {
  FeatureSpace space = RandomSpace(rng, shape.num_features, shape.min_domain,
                                   shape.max_domain);
  std::vector<std::string> classes;
  for (std::size_t c = 0; c < shape.num_classes; ++c) {
    classes.push_back("c" + std::to_string(c));
  }
  auto make_leaf = [&] { return ClassLabel{Uniform(rng, shape.num_classes)}; };
  auto should_split = [&](std::size_t depth) {
    return depth == 0 || Uniform(rng, 100) < shape.split_percent;
  };
  std::vector<TreeNode<ClassLabel>> nodes;
  std::vector<bool> used(space.num_features(), false);
  Grow<ClassLabel>(rng, space, used, 0, shape.max_depth, make_leaf,
                   should_split, nodes);
  return Model::Create(std::move(space), std::move(classes),
                       DecisionTree(std::move(nodes), 0));
}

Model RandomEnsembleModel(Rng& rng, const EnsembleShape& shape) {
  std::vector<Feature> features;
  for (std::size_t f = 0; f < shape.num_features; ++f) {
    Feature feature;
    feature.name = "x" + std::to_string(f);
    for (std::size_t v = 0; v < shape.domain; ++v) {
      feature.values.push_back(std::to_string(v));
    }
    features.push_back(std::move(feature));
  }
  FeatureSpace space(std::move(features));
  std::vector<std::string> classes;
  for (std::size_t c = 0; c < shape.num_classes; ++c) {
    classes.push_back("c" + std::to_string(c));
  }

  AdditiveEnsemble ensemble;
  ensemble.scale = shape.scale;
  auto make_leaf = [&] {
    return UniformIn(rng, -shape.max_score, shape.max_score);
  };
  auto always = [](std::size_t) { return true; };
  for (std::size_t c = 0; c < shape.num_classes; ++c) {
    std::vector<ScoreTree> trees;
    for (std::size_t t = 0; t < shape.trees_per_class; ++t) {
      std::vector<TreeNode<std::int64_t>> nodes;
      std::vector<bool> used(space.num_features(), false);
      Grow<std::int64_t>(rng, space, used, 0, shape.depth, make_leaf, always,
                         nodes);
      trees.emplace_back(std::move(nodes), 0);
    }
    ensemble.class_trees.push_back(std::move(trees));
  }
  return Model::Create(std::move(space), std::move(classes),
                       std::move(ensemble));
}

Instance RandomInstance(Rng& rng, const FeatureSpace& space) {
  std::vector<ValueId> values;
  for (FeatureId f = 0; f < space.num_features(); ++f) {
    values.push_back(Uniform(rng, space.domain_size(f)));
  }
  return Instance(std::move(values));
}

}  // namespace xdual::synthetic
