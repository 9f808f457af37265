// Copyright 2026 The lowdim Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LOWDIM_ENGINE_NONNEG_HPP
#define LOWDIM_ENGINE_NONNEG_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

#include "lowdim/engine_bounded.hpp"
#include "lowdim/guess_search.hpp"
#include "lowdim/model.hpp"

namespace lowdim {

namespace detail {

// Two support guesses are interchangeable when their free variables carry the same
// multiset of (column, cost, upper bound).
inline auto support_signature(const Instance& inst, const std::vector<std::size_t>& support) {
  std::vector<std::tuple<IntVec, Rat, Bound>> sig;
  for (std::size_t i : support) sig.emplace_back(inst.W.column(i), inst.c[i], inst.upper[i]);
  std::sort(sig.begin(), sig.end(), [](const auto& a, const auto& b) {
    if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
    if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) < std::get<1>(b);
    return std::get<2>(a) < std::get<2>(b);
  });
  return sig;
}

inline EngineResult solve_nonneg_unmerged(const Instance& inst, const SolveOptions& opts) {
  const std::size_t n = inst.n();
  const std::size_t m = inst.m();
  const Int budget = proximity_bound(static_cast<std::int64_t>(m), inst.delta());
  // Finite upper bounds let tight variables sit at u as well as at 0; the side
  // each one takes is read off the reduced costs of the guessed dual.
  const bool any_finite_upper =
      std::any_of(inst.upper.begin(), inst.upper.end(), [](const Bound& b) { return b.has_value(); });
  if (any_finite_upper) {
    return search_guesses(inst, guesses_from_duals(inst, dual_guesses(inst, true)), budget, opts);
  }

  std::vector<GuessWork> guesses;
  std::set<std::vector<std::tuple<IntVec, Rat, Bound>>> seen;
  std::uint64_t pruned = 0;
  for (auto& support : subsets_up_to(n, m)) {
    if (!seen.insert(support_signature(inst, support)).second) {
      ++pruned;
      continue;
    }
    // A vertex support has independent columns; dependent ones have no finite search
    // region once the upper bounds are gone.
    if (rank(RatMat(inst.W.select_columns(support))) < support.size()) {
      ++pruned;
      continue;
    }
    GuessWork work;
    work.tight = complement(n, support);
    work.free = std::move(support);
    work.center.assign(work.tight.size(), 0);
    guesses.push_back(std::move(work));
  }
  EngineResult r = search_guesses(inst, guesses, budget, opts);
  r.stats.guesses_pruned = pruned;
  return r;
}

}  // namespace detail

/// Solves instances with lower bounds 0 by guessing the support of an LP vertex.
/// Upper bounds may be +inf when the objective supports bracketed search; finite
/// ones place tight variables at 0 or u according to a guessed dual.
/// Duplicate columns are merged first whenever costs agree within each group.
inline EngineResult solve_nonneg(const Instance& inst, const SolveOptions& opts = {}) {
  require_valid(inst);
  for (std::size_t i = 0; i < inst.n(); ++i) {
    if (!inst.lower[i] || *inst.lower[i] != 0) {
      throw PreconditionError("nonneg engine requires lower bound 0 at index " + std::to_string(i));
    }
  }
  std::optional<MergeMap> merge;
  try {
    merge = merge_duplicate_columns(inst);
  } catch (const MergeRefused&) {
  }
  if (!merge || merge->is_identity()) return detail::solve_nonneg_unmerged(inst, opts);

  EngineResult r = detail::solve_nonneg_unmerged(merge->merged, opts);
  if (r.solution.status != Status::infeasible) {
    r.solution.x = merge->expand(r.solution.x);
    r.solution.value = evaluate(inst, r.solution.x);
  }
  return r;
}

}  // namespace lowdim

#endif  // LOWDIM_ENGINE_NONNEG_HPP
