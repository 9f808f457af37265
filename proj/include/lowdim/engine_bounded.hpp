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

#ifndef LOWDIM_ENGINE_BOUNDED_HPP
#define LOWDIM_ENGINE_BOUNDED_HPP

#include <cstddef>
#include <vector>

#include "lowdim/guess_search.hpp"
#include "lowdim/model.hpp"
#include "lowdim/numeric.hpp"

namespace lowdim {

enum class TightSide { free, at_lower, at_upper };

/// A guessed dual support I with the multipliers y(eps) it determines and the bound
/// each remaining variable takes by complementary slackness.
struct DualGuess {
  std::vector<std::size_t> support;  // I, columns of W linearly independent
  std::vector<EpsPoly> y;            // length m; components outside the chosen rows are 0
  std::vector<EpsPoly> reduced;      // (c(eps) - W^T y)_j for every j
  std::vector<TightSide> pattern;    // free for j in I
  IntVec z;                          // z_j = lower or upper for j not in I; 0 on I
};

/// Cost vector perturbed by eps^(j+1) on component j.
inline std::vector<EpsPoly> perturbed_costs(const Instance& inst) {
  const std::size_t len = inst.n() + 1;
  std::vector<EpsPoly> out;
  for (std::size_t j = 0; j < inst.n(); ++j) {
    EpsPoly p = EpsPoly::monomial(len, j + 1);
    p[0] = inst.c[j];
    out.push_back(std::move(p));
  }
  return out;
}

namespace detail {
// With skip_unbounded, a guess that would put a variable at an infinite bound is
// dropped: its dual is infeasible for the relaxation.
inline std::vector<DualGuess> dual_guesses(const Instance& inst, bool skip_unbounded) {
  const std::size_t n = inst.n();
  const std::size_t m = inst.m();
  const std::size_t len = n + 1;
  const auto costs = perturbed_costs(inst);
  const RatMat w(inst.W);
  std::vector<DualGuess> out;
  for (auto& support : subsets_up_to(n, m)) {
    const std::size_t k = support.size();
    // Rows of W_I chosen greedily until independent.
    std::vector<std::size_t> rows;
    RatMat picked;
    for (std::size_t r = 0; r < m && rows.size() < k; ++r) {
      RatVec row(k);
      for (std::size_t a = 0; a < k; ++a) row[a] = w(r, support[a]);
      RatMat trial = picked;
      trial.append_row(row);
      if (rank(trial) == trial.rows()) {
        picked = std::move(trial);
        rows.push_back(r);
      }
    }
    if (rows.size() < k) continue;  // dependent columns

    std::vector<EpsPoly> y(m, EpsPoly(len));
    if (k > 0) {
      // Equation a: sum_b W[rows[b]][support[a]] y_rows[b] = c_support[a](eps).
      RatMat sys = picked.transpose();
      std::vector<EpsPoly> rhs;
      for (std::size_t i : support) rhs.push_back(costs[i]);
      auto sol = solve_square_system(sys, rhs);
      if (!sol) continue;
      for (std::size_t b = 0; b < k; ++b) y[rows[b]] = (*sol)[b];
    }

    DualGuess g;
    g.support = std::move(support);
    g.pattern.assign(n, TightSide::free);
    g.z.assign(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
      EpsPoly red = costs[j];
      for (std::size_t r = 0; r < m; ++r) {
        if (w(r, j) != 0) red -= y[r] * w(r, j);
      }
      g.reduced.push_back(red);
    }
    std::size_t next = 0;
    bool usable = true;
    for (std::size_t j = 0; j < n && usable; ++j) {
      if (next < g.support.size() && g.support[next] == j) {
        ++next;
        if (!g.reduced[j].is_zero()) throw Error("dual guess: reduced cost on the support is not zero");
        continue;
      }
      switch (eps_sign(g.reduced[j])) {
        // c - W^T y = s_lower - s_upper: a positive reduced cost means s_lower > 0.
        case Sign::positive:
          g.pattern[j] = TightSide::at_lower;
          if (!inst.lower[j]) usable = false;
          else g.z[j] = *inst.lower[j];
          break;
        case Sign::negative:
          g.pattern[j] = TightSide::at_upper;
          if (!inst.upper[j]) usable = false;
          else g.z[j] = *inst.upper[j];
          break;
        case Sign::zero:
          throw Error("dual guess: reduced cost vanishes off the support");
      }
    }
    if (!usable) {
      if (!skip_unbounded) throw PreconditionError("dual guessing needs finite bounds");
      continue;
    }
    g.y = std::move(y);
    out.push_back(std::move(g));
  }
  return out;
}

inline std::vector<GuessWork> guesses_from_duals(const Instance& inst, std::vector<DualGuess> duals) {
  std::vector<GuessWork> guesses;
  for (auto& g : duals) {
    GuessWork work;
    work.tight = complement(inst.n(), g.support);
    for (std::size_t j : work.tight) work.center.push_back(g.z[j]);
    work.free = std::move(g.support);
    guesses.push_back(std::move(work));
  }
  return guesses;
}
}  // namespace detail

/// Every independent column set I with |I| <= m, in size-then-lexicographic order,
/// with y solved from W_I^T y = c_I(eps) on |I| independent rows.
inline std::vector<DualGuess> enumerate_dual_guesses(const Instance& inst) {
  if (!inst.all_bounds_finite()) throw PreconditionError("dual guessing needs finite bounds");
  return detail::dual_guesses(inst, false);
}

/// Solves instances with finite bounds: for each dual guess, the tight variables are
/// recovered around the complementary-slackness point z_T and the support by the oracle.
inline EngineResult solve_bounded(const Instance& inst, const SolveOptions& opts = {}) {
  require_valid(inst);
  if (!inst.all_bounds_finite()) throw PreconditionError("bounded engine requires finite bounds");
  std::vector<GuessWork> guesses = detail::guesses_from_duals(inst, enumerate_dual_guesses(inst));
  const Int budget = proximity_bound(static_cast<std::int64_t>(inst.m()), inst.delta());
  return search_guesses(inst, guesses, budget, opts);
}

}  // namespace lowdim

#endif  // LOWDIM_ENGINE_BOUNDED_HPP
