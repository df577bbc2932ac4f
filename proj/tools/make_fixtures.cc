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

// Writes the bundled models and instance files into a directory.
//
//   make_fixtures OUT_DIR

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "xdual/io.h"
#include "xdual/model.h"
#include "xdual/synthetic.h"

namespace {

using xdual::ClassLabel;
using xdual::DecisionTree;
using xdual::Feature;
using xdual::FeatureSpace;
using xdual::Instance;
using xdual::Model;

DecisionTree::Node Split(xdual::FeatureId f, std::vector<xdual::NodeId> kids) {
  DecisionTree::Node n;
  n.feature = f;
  n.children = std::move(kids);
  return n;
}

DecisionTree::Node Leaf(std::size_t c) {
  DecisionTree::Node n;
  n.leaf = ClassLabel{c};
  return n;
}

// Features A (age), T (thread), L (length), W (where read);
// classes reads / skips. W is never tested.
Model Poole() {
  FeatureSpace space({{"A", {"known", "unknown"}},
                      {"T", {"new", "followUp"}},
                      {"L", {"long", "short"}},
                      {"W", {"home", "work"}}});
  enum { kA, kT, kL };
  std::vector<DecisionTree::Node> nodes = {
      Split(kL, {1, 2}),  // 0
      Leaf(1),            // 1: long -> skips
      Split(kT, {3, 4}),  // 2
      Leaf(0),            // 3: new -> reads
      Split(kA, {5, 6}),  // 4
      Leaf(0),            // 5: known -> reads
      Leaf(1),            // 6: unknown -> skips
  };
  return Model::Create(space, {"reads", "skips"},
                       DecisionTree(std::move(nodes), 0));
}

// X alone decides the class; Y is vacuous.
Model ThreeClass() {
  FeatureSpace space({{"X", {"a", "b", "c"}}, {"Y", {"0", "1"}}});
  std::vector<DecisionTree::Node> nodes = {
      Split(0, {1, 2, 3}), Leaf(0), Leaf(1), Leaf(2)};
  return Model::Create(space, {"k1", "k2", "k3"},
                       DecisionTree(std::move(nodes), 0));
}

void Write(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_fixtures OUT_DIR\n";
    return 2;
  }
  const std::string dir = std::string(argv[1]) + "/";
  try {
    const Model poole = Poole();
    Write(dir + "poole.json", xdual::SerializeModel(poole));
    const Instance e1 = poole.MakeInstance({0, 0, 0, 0});
    const Instance e2 = poole.MakeInstance({0, 0, 1, 1});
    Write(dir + "e1.csv", xdual::SerializeInstances({e1}, poole.space()));
    Write(dir + "e2.csv", xdual::SerializeInstances({e2}, poole.space()));
    Write(dir + "e3.csv", xdual::SerializeInstances({e1}, poole.space()));
    std::vector<Instance> all;
    for (std::size_t code = 0; code < 16; ++code) {
      all.push_back(poole.MakeInstance(
          {code >> 3 & 1, code >> 2 & 1, code >> 1 & 1, code & 1}));
    }
    Write(dir + "all16.csv", xdual::SerializeInstances(all, poole.space()));

    const Model three = ThreeClass();
    Write(dir + "three_class.json", xdual::SerializeModel(three));
    std::vector<Instance> three_rows;
    for (std::size_t x = 0; x < 3; ++x) {
      for (std::size_t y = 0; y < 2; ++y) {
        three_rows.push_back(three.MakeInstance({x, y}));
      }
    }
    Write(dir + "three_class.csv",
          xdual::SerializeInstances(three_rows, three.space()));

    xdual::synthetic::Rng rng(20260101);
    const Model ensemble =
        xdual::synthetic::RandomEnsembleModel(rng, xdual::synthetic::EnsembleShape{});
    Write(dir + "ensemble10.json", xdual::SerializeModel(ensemble));
    std::vector<Instance> rows;
    for (int i = 0; i < 100; ++i) {
      rows.push_back(xdual::synthetic::RandomInstance(rng, ensemble.space()));
    }
    Write(dir + "ensemble10_100.csv",
          xdual::SerializeInstances(rows, ensemble.space()));
  } catch (const std::exception& e) {
    std::cerr << "make_fixtures: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
