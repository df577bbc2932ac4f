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

#include "xdual/hitting_set.h"

#include <algorithm>
#include <string>
#include <utility>

#include "xdual/error.h"

namespace xdual {
namespace {

// Depth-first branch and bound over "element in / element out" decisions.
// The first set not yet hit is branched on; sets with a single remaining
// candidate force that candidate (unit propagation); a partial answer that
// covers a blocked set is pruned since supersets stay blocked.
class HittingSetSearch {
 public:
  HittingSetSearch(const HittingSetInstance& instance,
                   const HittingSetOptions& options)
      : options_(options), universe_(instance.universe_size) {
    auto normalize = [&](const FeatureSet& set, bool keep_order) {
      FeatureSet result;
      for (FeatureId e : set) {
        if (e >= universe_) {
          throw Error(ErrorCode::kInvalidArgument,
                      "hitting-set element " + std::to_string(e) +
                          " outside universe of size " +
                          std::to_string(universe_));
        }
        if (std::find(result.begin(), result.end(), e) == result.end()) {
          result.push_back(e);
        }
      }
      if (!keep_order) std::sort(result.begin(), result.end());
      return result;
    };
    for (const FeatureSet& s : instance.to_hit) {
      to_hit_.push_back(normalize(s, true));
    }
    for (const FeatureSet& b : instance.blocked) {
      blocked_.push_back(normalize(b, false));
    }
    sets_of_.resize(universe_);
    blocked_of_.resize(universe_);
    for (std::size_t i = 0; i < to_hit_.size(); ++i) {
      for (FeatureId e : to_hit_[i]) sets_of_[e].push_back(i);
    }
    for (std::size_t i = 0; i < blocked_.size(); ++i) {
      for (FeatureId e : blocked_[i]) blocked_of_[e].push_back(i);
    }
    in_.assign(universe_, false);
    out_.assign(universe_, false);
    hit_count_.assign(to_hit_.size(), 0);
    blocked_count_.assign(blocked_.size(), 0);
  }

  std::optional<FeatureSet> Run() {
    for (const FeatureSet& b : blocked_) {
      if (b.empty()) return std::nullopt;
    }
    if (options_.smallest) {
      SearchSmallest();
      if (!best_) return std::nullopt;
      FeatureSet result = *best_;
      std::sort(result.begin(), result.end());
      return result;
    }
    if (!SearchFirst()) return std::nullopt;
    return Minimize(chosen_);
  }

 private:
  // Returns false if including `e` covers a blocked set. The inclusion is
  // recorded either way and must be undone by the caller.
  bool Include(FeatureId e) {
    in_[e] = true;
    chosen_.push_back(e);
    for (std::size_t s : sets_of_[e]) ++hit_count_[s];
    bool ok = true;
    for (std::size_t b : blocked_of_[e]) {
      if (++blocked_count_[b] == blocked_[b].size()) ok = false;
    }
    return ok;
  }

  void UndoInclude() {
    const FeatureId e = chosen_.back();
    chosen_.pop_back();
    in_[e] = false;
    for (std::size_t s : sets_of_[e]) --hit_count_[s];
    for (std::size_t b : blocked_of_[e]) --blocked_count_[b];
  }

  void CountNode() {
    if (++nodes_ > options_.node_budget) {
      throw Error(ErrorCode::kBudgetExceeded,
                  "hitting-set search exceeded " +
                      std::to_string(options_.node_budget) + " nodes");
    }
  }

  std::size_t Available(std::size_t s, FeatureId* last) const {
    std::size_t count = 0;
    for (FeatureId e : to_hit_[s]) {
      if (!out_[e]) {
        ++count;
        if (last) *last = e;
      }
    }
    return count;
  }

  // Applies unit propagation. Returns false on conflict. `forced` receives
  // the number of inclusions made (to undo).
  bool Propagate(std::size_t& forced) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t s = 0; s < to_hit_.size(); ++s) {
        if (hit_count_[s] > 0) continue;
        FeatureId only = 0;
        const std::size_t available = Available(s, &only);
        if (available == 0) return false;
        if (available == 1) {
          ++forced;
          if (!Include(only)) return false;
          changed = true;
        }
      }
    }
    return true;
  }

  std::optional<std::size_t> FirstUnhit() const {
    for (std::size_t s = 0; s < to_hit_.size(); ++s) {
      if (hit_count_[s] == 0) return s;
    }
    return std::nullopt;
  }

  // On success the state holds a hitting set in `chosen_`.
  bool SearchFirst() {
    CountNode();
    std::size_t forced = 0;
    if (Propagate(forced)) {
      const auto pick = FirstUnhit();
      if (!pick) return true;
      std::vector<FeatureId> excluded;
      for (FeatureId e : to_hit_[*pick]) {
        if (out_[e]) continue;
        if (Include(e) && SearchFirst()) return true;
        UndoInclude();
        out_[e] = true;
        excluded.push_back(e);
      }
      for (FeatureId e : excluded) out_[e] = false;
    }
    for (std::size_t i = 0; i < forced; ++i) UndoInclude();
    return false;
  }

  // Lower bound on the number of further elements: unhit sets whose
  // candidates are pairwise disjoint each need their own element.
  std::size_t LowerBound() const {
    std::vector<bool> used(universe_, false);
    std::size_t bound = 0;
    for (std::size_t s = 0; s < to_hit_.size(); ++s) {
      if (hit_count_[s] > 0) continue;
      bool disjoint = true;
      for (FeatureId e : to_hit_[s]) {
        if (!out_[e] && used[e]) disjoint = false;
      }
      if (!disjoint) continue;
      for (FeatureId e : to_hit_[s]) {
        if (!out_[e]) used[e] = true;
      }
      ++bound;
    }
    return bound;
  }

  void SearchSmallest() {
    CountNode();
    std::size_t forced = 0;
    if (Propagate(forced) &&
        (!best_ || chosen_.size() + LowerBound() < best_->size())) {
      const auto pick = FirstUnhit();
      if (!pick) {
        best_ = chosen_;
      } else {
        std::vector<FeatureId> excluded;
        for (FeatureId e : to_hit_[*pick]) {
          if (out_[e]) continue;
          if (Include(e)) SearchSmallest();
          UndoInclude();
          out_[e] = true;
          excluded.push_back(e);
        }
        for (FeatureId e : excluded) out_[e] = false;
      }
    }
    for (std::size_t i = 0; i < forced; ++i) UndoInclude();
  }

  // Drops redundant elements in insertion order. Subsets of a set that
  // avoids every blocked superset avoid them too.
  FeatureSet Minimize(FeatureSet candidate) const {
    for (std::size_t i = 0; i < candidate.size();) {
      FeatureSet reduced = candidate;
      reduced.erase(reduced.begin() + static_cast<std::ptrdiff_t>(i));
      if (Hits(reduced, to_hit_)) {
        candidate = std::move(reduced);
      } else {
        ++i;
      }
    }
    std::sort(candidate.begin(), candidate.end());
    return candidate;
  }

  const HittingSetOptions& options_;
  std::size_t universe_;
  std::vector<FeatureSet> to_hit_;
  std::vector<FeatureSet> blocked_;
  std::vector<std::vector<std::size_t>> sets_of_;
  std::vector<std::vector<std::size_t>> blocked_of_;
  std::vector<bool> in_;
  std::vector<bool> out_;
  std::vector<std::size_t> hit_count_;
  std::vector<std::size_t> blocked_count_;
  FeatureSet chosen_;
  std::optional<FeatureSet> best_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

std::optional<FeatureSet> MinimalHittingSet(const HittingSetInstance& instance,
                                            const HittingSetOptions& options) {
  return HittingSetSearch(instance, options).Run();
}

std::vector<FeatureSet> AllMinimalHittingSets(
    std::size_t universe_size, std::span<const FeatureSet> family,
    const HittingSetOptions& options) {
  HittingSetInstance instance;
  instance.universe_size = universe_size;
  instance.to_hit.assign(family.begin(), family.end());
  std::vector<FeatureSet> result;
  while (auto next = MinimalHittingSet(instance, options)) {
    instance.blocked.push_back(*next);
    result.push_back(std::move(*next));
  }
  return result;
}

bool Hits(std::span<const FeatureId> candidate,
          std::span<const FeatureSet> family) {
  for (const FeatureSet& set : family) {
    const bool hit = std::any_of(set.begin(), set.end(), [&](FeatureId e) {
      return std::find(candidate.begin(), candidate.end(), e) !=
             candidate.end();
    });
    if (!hit) return false;
  }
  return true;
}

bool IsMinimalHittingSet(std::span<const FeatureId> candidate,
                         std::span<const FeatureSet> family) {
  if (!Hits(candidate, family)) return false;
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    FeatureSet reduced;
    for (std::size_t k = 0; k < candidate.size(); ++k) {
      if (k != i) reduced.push_back(candidate[k]);
    }
    if (Hits(reduced, family)) return false;
  }
  return true;
}

}  // namespace xdual
