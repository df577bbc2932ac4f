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

#include <gtest/gtest.h>

#include "test_support.h"
#include "xdual/error.h"
#include "xdual/model.h"
#include "xdual/synthetic.h"

namespace xdual {
namespace {

using testing::E1;
using testing::E2;
using testing::kA;
using testing::kL;
using testing::kT;
using testing::kW;
using testing::Poole;

TEST(ModelTest, PoolePredictions) {
  const auto poole = Poole();
  EXPECT_EQ(poole->class_name(poole->Predict(E1(*poole))), "skips");
  EXPECT_EQ(poole->class_name(poole->Predict(E2(*poole))), "reads");
}

TEST(ModelTest, ConstantTreePredictsItsLeaf) {
  const auto model = testing::ConstantModel();
  EXPECT_TRUE(Validate(model->space(), model->classes(), model->classifier())
                  .ok());
  for (ValueId p = 0; p < 2; ++p) {
    for (ValueId q = 0; q < 2; ++q) {
      EXPECT_EQ(model->Predict(model->MakeInstance({p, q})), ClassLabel{1});
    }
  }
}

TEST(ModelTest, PooleValidates) {
  const auto poole = Poole();
  EXPECT_TRUE(
      Validate(poole->space(), poole->classes(), poole->classifier()).ok());
}

TEST(ModelTest, MissingChildIsNonTotal) {
  const auto poole = Poole();
  auto nodes = std::get<DecisionTree>(poole->classifier()).nodes();
  nodes[0].children.pop_back();  // drop L=short
  const ValidationReport report = Validate(
      poole->space(), poole->classes(), DecisionTree(nodes, 0));
  ASSERT_FALSE(report.ok());
  EXPECT_NE(report.ToString().find("non-total children"), std::string::npos)
      << report.ToString();
  EXPECT_NE(report.ToString().find("'short'"), std::string::npos);
}

TEST(ModelTest, RepeatedFeatureOnPathIsRejected) {
  FeatureSpace space({{"a", {"0", "1"}}});
  DecisionTree::Node split;
  split.feature = 0;
  split.children = {1, 2};
  DecisionTree::Node inner = split;
  inner.children = {2, 3};
  DecisionTree::Node l0, l1;
  l1.leaf = ClassLabel{1};
  DecisionTree tree({split, inner, l0, l1}, 0);
  const std::vector<std::string> classes = {"x", "y"};
  const ValidationReport report = Validate(space, classes, tree);
  EXPECT_NE(report.ToString().find("duplicate feature on path"),
            std::string::npos)
      << report.ToString();
  EXPECT_THROW(Model::Create(space, classes, tree), Error);
}

TEST(ModelTest, OneClassIsRejected) {
  FeatureSpace space({{"a", {"0", "1"}}});
  try {
    Model::Create(space, {"only"}, DecisionTree::Constant(ClassLabel{0}));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidModel);
  }
}

TEST(ModelTest, RestrictExamples) {
  const auto poole = Poole();
  const Instance e2 = E2(*poole);
  const FeatureSet lt = {kT, kL};
  EXPECT_EQ(FormatAssignment(poole->space(), Restrict(e2, lt)),
            "{T=new, L=short}");
  const FeatureSet all = {kA, kT, kL, kW};
  EXPECT_EQ(Restrict(e2, all), e2.AsAssignment());
  EXPECT_TRUE(Restrict(e2, {}).empty());
}

TEST(ModelTest, AddRejectsConflicts) {
  PartialAssignment a(3);
  a.Add({0, 1});
  a.Add({2, 0});
  EXPECT_EQ(a.size(), 2u);
  a.Add({0, 1});  // same literal again is fine
  EXPECT_THROW(a.Add({0, 0}), Error);
  EXPECT_EQ(a.value(0), 1u);
}

TEST(ModelTest, EnsembleTiesGoToLowestClass) {
  FeatureSpace space({{"a", {"0", "1"}}});
  AdditiveEnsemble ensemble;
  ensemble.scale = 10;
  ensemble.class_trees = {{ScoreTree::Constant(5)}, {ScoreTree::Constant(5)}};
  const Model model = Model::Create(space, {"x", "y"}, ensemble);
  EXPECT_EQ(model.Predict(model.MakeInstance({0})), ClassLabel{0});
}

// Properties over random trees.

TEST(ModelPropertyTest, ExactlyOneFeasiblePathPerInstance) {
  for (const auto& entry : testing::TreeCorpus(40, 5, 100)) {
    const auto& tree = std::get<DecisionTree>(entry.model->classifier());
    for (const Instance& x : entry.instances) {
      int leaves = 0;
      tree.AnyFeasibleLeaf(x.AsAssignment(), [&](const ClassLabel&) {
        ++leaves;
        return false;
      });
      EXPECT_EQ(leaves, 1) << "seed " << entry.seed;
    }
  }
}

TEST(ModelPropertyTest, RestrictIsMonotone) {
  synthetic::Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const FeatureSpace space = synthetic::RandomSpace(rng, 6, 2, 3);
    const Instance x = synthetic::RandomInstance(rng, space);
    FeatureSet small, large;
    for (FeatureId f = 0; f < 6; ++f) {
      const auto r = synthetic::Uniform(rng, 3);
      if (r == 0) small.push_back(f);
      if (r <= 1) large.push_back(f);
    }
    EXPECT_TRUE(Restrict(x, small).IsSubsetOf(Restrict(x, large)));
  }
}

TEST(ModelPropertyTest, UnionWithDisjointLiteralStaysConsistent) {
  synthetic::Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const FeatureSpace space = synthetic::RandomSpace(rng, 5, 2, 3);
    const Instance x = synthetic::RandomInstance(rng, space);
    PartialAssignment a(5);
    for (FeatureId f = 0; f < 5; ++f) {
      if (synthetic::Uniform(rng, 2)) a.Add(x.literal(f));
    }
    for (FeatureId f = 0; f < 5; ++f) {
      if (a.is_fixed(f)) {
        const ValueId other = (*a.value(f) + 1) % space.domain_size(f);
        EXPECT_THROW(a.With({f, other}), Error);
      } else {
        const PartialAssignment b = a.With(x.literal(f));
        EXPECT_EQ(b.size(), a.size() + 1);
        EXPECT_TRUE(a.IsSubsetOf(b));
      }
    }
  }
}

}  // namespace
}  // namespace xdual
