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

#include "xdual/enumerate.h"

#include <algorithm>
#include <bit>
#include <set>
#include <utility>

#include "xdual/error.h"

namespace xdual {
namespace {

class Reporter {
 public:
  Reporter(const EnumerationOptions& options, const ExplanationSink& sink)
      : options_(options), sink_(sink) {}

  // Returns false once the limit is reached.
  bool Report(ExplanationKind kind, const PartialAssignment& literals) {
    ++count_;
    if (count_ > options_.max_explanations) {
      throw Error(ErrorCode::kBudgetExceeded,
                  "enumeration exceeded " +
                      std::to_string(options_.max_explanations) +
                      " explanations");
    }
    if (sink_) sink_(kind, literals);
    return options_.limit == 0 || count_ < options_.limit;
  }

 private:
  const EnumerationOptions& options_;
  const ExplanationSink& sink_;
  std::size_t count_ = 0;
};

using Mask = std::uint64_t;

Mask ToMask(const FeatureSet& set, const std::vector<FeatureId>& index_of) {
  Mask m = 0;
  for (FeatureId e : set) m |= Mask{1} << index_of[e];
  return m;
}

bool MaskHits(Mask candidate, const std::vector<Mask>& family) {
  for (Mask s : family) {
    if ((candidate & s) == 0) return false;
  }
  return true;
}

// All minimal hitting sets of `family` by enumerating subsets of `elements`.
std::set<FeatureSet> ExhaustiveDual(const std::vector<FeatureSet>& family,
                                    const std::vector<FeatureId>& elements) {
  std::vector<FeatureId> index_of(elements.empty() ? 0 : elements.back() + 1);
  for (std::size_t i = 0; i < elements.size(); ++i) index_of[elements[i]] = i;
  std::vector<Mask> masks;
  for (const FeatureSet& s : family) masks.push_back(ToMask(s, index_of));

  std::set<FeatureSet> result;
  const Mask end = Mask{1} << elements.size();
  for (Mask m = 0; m < end; ++m) {
    if (!MaskHits(m, masks)) continue;
    bool minimal = true;
    for (Mask bits = m; bits != 0 && minimal; bits &= bits - 1) {
      if (MaskHits(m & ~(bits & -bits), masks)) minimal = false;
    }
    if (!minimal) continue;
    FeatureSet set;
    for (std::size_t i = 0; i < elements.size(); ++i) {
      if (m >> i & 1) set.push_back(elements[i]);
    }
    result.insert(std::move(set));
  }
  return result;
}

std::set<FeatureSet> Dual(const std::vector<FeatureSet>& family,
                          const std::vector<FeatureId>& elements) {
  constexpr std::size_t kExhaustiveLimit = 20;
  if (elements.size() <= kExhaustiveLimit) {
    return ExhaustiveDual(family, elements);
  }
  const std::size_t universe = elements.empty() ? 0 : elements.back() + 1;
  const std::vector<FeatureSet> all = AllMinimalHittingSets(universe, family);
  return {all.begin(), all.end()};
}

FeatureSet Sorted(FeatureSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

void CheckFamily(const std::vector<FeatureSet>& family,
                 const std::vector<FeatureSet>& other, const char* name,
                 const char* other_name, const ElementFormatter& format,
                 std::vector<std::string>& out) {
  std::set<FeatureSet> seen;
  for (const FeatureSet& s : family) {
    const std::string label = std::string(name) + " " + FormatSet(s, format);
    if (!seen.insert(s).second) out.push_back("duplicate " + label);
    const auto missed =
        std::find_if(other.begin(), other.end(), [&](const FeatureSet& o) {
          return !Hits(s, std::span<const FeatureSet>(&o, 1));
        });
    if (missed != other.end()) {
      out.push_back(label + " does not hit " + other_name + " " +
                    FormatSet(*missed, format));
    } else if (!IsMinimalHittingSet(s, other)) {
      out.push_back(label + " is not a minimal hitting set of the " +
                    other_name + "s");
    }
  }
}

void CompareWithDual(const std::vector<FeatureSet>& family,
                     const std::vector<FeatureSet>& other, const char* name,
                     const char* other_name,
                     const std::vector<FeatureId>& elements,
                     const ElementFormatter& format,
                     std::vector<std::string>& out) {
  const std::set<FeatureSet> dual = Dual(other, elements);
  const std::set<FeatureSet> present(family.begin(), family.end());
  for (const FeatureSet& d : dual) {
    if (!present.count(d)) {
      out.push_back("missing " + std::string(name) + " " +
                    FormatSet(d, format) + " (minimal hitting set of the " +
                    other_name + "s)");
    }
  }
}

}  // namespace

std::string FormatSet(std::span<const FeatureId> set,
                      const ElementFormatter& format) {
  std::string out = "{";
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (i > 0) out += ", ";
    out += format ? format(set[i]) : std::to_string(set[i]);
  }
  return out + "}";
}

void SortBySize(std::vector<FeatureSet>& sets) {
  std::stable_sort(sets.begin(), sets.end(),
                   [](const FeatureSet& a, const FeatureSet& b) {
                     return a.size() < b.size();
                   });
}

EnumerationResult EnumerateCxps(Oracle& oracle, const ExplanationProblem& problem,
                                const EnumerationOptions& options,
                                const ExplanationSink& sink) {
  EnumerationResult result;
  Reporter reporter(options, sink);
  std::vector<FeatureSet> blocked;
  while (true) {
    ++result.iterations;
    auto cxp = ExtractCxp(oracle, problem, blocked, options.order);
    if (!cxp) break;
    blocked.push_back(cxp->features());
    const bool more = reporter.Report(ExplanationKind::kContrastive,
                                      cxp->literals);
    result.cxps.push_back(std::move(*cxp));
    if (!more) {
      result.complete = false;
      break;
    }
  }
  return result;
}

EnumerationResult EnumerateAll(Oracle& oracle, const ExplanationProblem& problem,
                               const EnumerationOptions& options,
                               const ExplanationSink& sink) {
  if (problem.is_targeted()) {
    throw Error(ErrorCode::kInvalidArgument,
                "AXp/CXp duality only holds for basic (untargeted) CXps");
  }
  const std::vector<ClassLabel> contrast = problem.contrast_classes();
  HittingSetOptions hs_options;
  hs_options.smallest = options.smallest;
  hs_options.node_budget = options.mhs_node_budget;

  EnumerationResult result;
  EnumerationState state;
  Reporter reporter(options, sink);
  while (true) {
    ++result.iterations;
    HittingSetInstance candidates;
    candidates.universe_size = problem.num_features();
    candidates.to_hit = state.cxps;
    candidates.blocked = state.axps;
    const auto candidate = MinimalHittingSet(candidates, hs_options);
    if (!candidate) break;

    bool more = true;
    const auto witness =
        oracle.FindCounterexample(problem.Keep(*candidate), contrast);
    if (!witness) {
      AXp axp{problem.Keep(*candidate)};
      state.axps.push_back(*candidate);
      more = reporter.Report(ExplanationKind::kAbductive, axp.literals);
      result.axps.push_back(std::move(axp));
    } else {
      CXp cxp = ExtractCxpFromWitness(oracle, problem, *candidate, *witness,
                                      options.order);
      state.cxps.push_back(cxp.features());
      more = reporter.Report(ExplanationKind::kContrastive, cxp.literals);
      result.cxps.push_back(std::move(cxp));
    }
    if (!more) {
      result.complete = false;
      break;
    }
  }
  return result;
}

DualityReport VerifyDuality(std::span<const FeatureSet> axps,
                            std::span<const FeatureSet> cxps,
                            const ElementFormatter& format) {
  std::vector<FeatureSet> a, c;
  for (const FeatureSet& s : axps) a.push_back(Sorted(s));
  for (const FeatureSet& s : cxps) c.push_back(Sorted(s));
  std::set<FeatureId> all;
  for (const auto& s : a) all.insert(s.begin(), s.end());
  for (const auto& s : c) all.insert(s.begin(), s.end());
  const std::vector<FeatureId> elements(all.begin(), all.end());

  DualityReport report;
  CheckFamily(a, c, "AXp", "CXp", format, report.violations);
  CheckFamily(c, a, "CXp", "AXp", format, report.violations);
  CompareWithDual(a, c, "AXp", "CXp", elements, format, report.violations);
  CompareWithDual(c, a, "CXp", "AXp", elements, format, report.violations);
  return report;
}

ElementFormatter LiteralFormatter(const ExplanationProblem& problem) {
  return [&problem](FeatureId f) {
    const Feature& feature = problem.model().space().feature(f);
    return feature.name + "=" + feature.values[problem.instance().value(f)];
  };
}

BruteForceResult BruteForceExplanations(const ExplanationProblem& problem,
                                        const BruteForceOptions& options) {
  const FeatureSpace& space = problem.model().space();
  const std::size_t n = space.num_features();
  if (n > options.max_features || n >= 64) {
    throw Error(ErrorCode::kTooLarge,
                "brute force limited to " +
                    std::to_string(options.max_features) + " features");
  }
  // Sum over subsets of the number of completions = prod (1 + |D_i|).
  std::uint64_t evaluations = 1;
  for (FeatureId f = 0; f < n; ++f) {
    evaluations *= 1 + space.domain_size(f);
    if (evaluations > options.max_evaluations) {
      throw Error(ErrorCode::kTooLarge,
                  "brute force needs more than " +
                      std::to_string(options.max_evaluations) +
                      " model evaluations");
    }
  }

  std::vector<bool> is_contrast(problem.model().num_classes(), false);
  for (ClassLabel c : problem.contrast_classes()) is_contrast[c.index] = true;
  const Instance& instance = problem.instance();

  // reaches[m]: some completion of the instance restricted to m is
  // predicted in a contrast class.
  const Mask count = Mask{1} << n;
  std::vector<bool> reaches(count, false);
  for (Mask m = 0; m < count; ++m) {
    std::vector<FeatureId> free;
    std::vector<ValueId> values = instance.values();
    for (FeatureId f = 0; f < n; ++f) {
      if (!(m >> f & 1)) {
        free.push_back(f);
        values[f] = 0;
      }
    }
    while (true) {
      if (is_contrast[problem.model().Predict(Instance(values)).index]) {
        reaches[m] = true;
        break;
      }
      std::size_t k = free.size();
      while (k > 0) {
        const FeatureId f = free[k - 1];
        if (++values[f] < space.domain_size(f)) break;
        values[f] = 0;
        --k;
      }
      if (k == 0) break;
    }
  }

  std::vector<Mask> by_size(count);
  for (Mask m = 0; m < count; ++m) by_size[m] = m;
  std::stable_sort(by_size.begin(), by_size.end(), [](Mask a, Mask b) {
    return std::popcount(a) < std::popcount(b);
  });
  auto minimal_family = [&](auto&& has_property) {
    std::vector<Mask> minimal;
    for (Mask m : by_size) {
      if (!has_property(m)) continue;
      const bool dominated =
          std::any_of(minimal.begin(), minimal.end(),
                      [&](Mask k) { return (k & m) == k; });
      if (!dominated) minimal.push_back(m);
    }
    std::vector<FeatureSet> sets;
    for (Mask m : minimal) {
      FeatureSet s;
      for (FeatureId f = 0; f < n; ++f) {
        if (m >> f & 1) s.push_back(f);
      }
      sets.push_back(std::move(s));
    }
    return sets;
  };

  BruteForceResult result;
  result.axps = minimal_family([&](Mask m) { return !reaches[m]; });
  result.cxps =
      minimal_family([&](Mask m) { return bool(reaches[(count - 1) & ~m]); });
  return result;
}

}  // namespace xdual
