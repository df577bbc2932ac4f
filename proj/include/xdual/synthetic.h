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

// Seeded random models and instances. The generators draw from a 64-bit
// Mersenne Twister with explicit modular reduction, so a seed produces the
// same model on every platform.

#ifndef XDUAL_SYNTHETIC_H_
#define XDUAL_SYNTHETIC_H_

#include <cstdint>
#include <random>

#include "xdual/model.h"

namespace xdual::synthetic {

using Rng = std::mt19937_64;

// Uniform draw in [0, n).
std::size_t Uniform(Rng& rng, std::size_t n);
// Uniform draw in [lo, hi].
std::int64_t UniformIn(Rng& rng, std::int64_t lo, std::int64_t hi);

// Features "f0", "f1", ... with values "v0", "v1", ...
FeatureSpace RandomSpace(Rng& rng, std::size_t num_features,
                         std::size_t min_domain, std::size_t max_domain);

struct TreeShape {
  std::size_t num_features = 4;
  std::size_t min_domain = 2;
  std::size_t max_domain = 3;
  std::size_t num_classes = 2;
  std::size_t max_depth = 4;
  // Chance (in percent) that a node below the root splits.
  unsigned split_percent = 70;
};

// Random decision tree; the root always splits.
Model RandomTreeModel(Rng& rng, const TreeShape& shape);

struct EnsembleShape {
  std::size_t num_features = 10;
  std::size_t domain = 2;
  std::size_t num_classes = 2;
  std::size_t trees_per_class = 5;
  std::size_t depth = 3;
  std::int64_t scale = 100'000;
  // Leaf scores are drawn from [-max_score, max_score].
  std::int64_t max_score = 50'000;
};

// Ensemble of complete trees of the given depth over distinct features.
Model RandomEnsembleModel(Rng& rng, const EnsembleShape& shape);

Instance RandomInstance(Rng& rng, const FeatureSpace& space);

}  // namespace xdual::synthetic

#endif  // XDUAL_SYNTHETIC_H_
