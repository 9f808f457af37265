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

#include <gtest/gtest.h>

#include "lowdim/engine_bounded.hpp"
#include "lowdim/verify.hpp"

namespace lowdim {
namespace {

EpsPoly poly(std::initializer_list<Rat> coeffs, std::size_t len) {
  EpsPoly p(len);
  std::size_t k = 0;
  for (const Rat& c : coeffs) p[k++] = c;
  return p;
}

TEST(DualGuesses, SingleRowExample) {
  Instance inst{IntMat({{1, 2}}), {1, 1}, {0, 0}, {3, 3}, EqualityIndicator{{2}}};
  auto guesses = enumerate_dual_guesses(inst);
  ASSERT_EQ(guesses.size(), 3u);

  EXPECT_TRUE(guesses[0].support.empty());
  EXPECT_TRUE(guesses[0].y[0].is_zero());
  EXPECT_EQ(guesses[0].pattern, (std::vector<TightSide>{TightSide::at_lower, TightSide::at_lower}));

  const DualGuess& g = guesses[1];
  EXPECT_EQ(g.support, (std::vector<std::size_t>{0}));
  EXPECT_EQ(g.y[0], poly({1, 1}, 3));
  EXPECT_EQ(g.reduced[1], poly({-1, -2, 1}, 3));
  EXPECT_EQ(eps_sign(g.reduced[1]), Sign::negative);
  EXPECT_EQ(g.pattern[1], TightSide::at_upper);
  EXPECT_EQ(g.z[1], 3);

  EXPECT_EQ(guesses[2].y[0], poly({make_rat(1, 2), 0, make_rat(1, 2)}, 3));
  EXPECT_EQ(guesses[2].pattern[0], TightSide::at_lower);
}

TEST(DualGuesses, NegativeCostsSitAtUpper) {
  Instance inst{IntMat({{1, 1}}), {-1, 2}, {0, -1}, {4, 5}, QuadraticDistance{{0}}};
  auto guesses = enumerate_dual_guesses(inst);
  EXPECT_EQ(guesses[0].pattern, (std::vector<TightSide>{TightSide::at_upper, TightSide::at_lower}));
  EXPECT_EQ(guesses[0].z, (IntVec{4, -1}));
}

TEST(DualGuesses, IdentitySupport) {
  Instance inst{IntMat({{1, 0}, {0, 1}}), {3, -1}, {0, 0}, {1, 1}, QuadraticDistance{{0, 0}}};
  auto guesses = enumerate_dual_guesses(inst);
  ASSERT_EQ(guesses.size(), 4u);
  const DualGuess& full = guesses.back();
  EXPECT_EQ(full.support, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(full.y[0], poly({3, 1}, 3));
  EXPECT_EQ(full.y[1], poly({-1, 0, 1}, 3));
}

TEST(DualGuesses, DependentColumnsSkipped) {
  Instance inst{IntMat({{1, 2}, {2, 4}}), {0, 0}, {0, 0}, {1, 1}, QuadraticDistance{{0, 0}}};
  auto guesses = enumerate_dual_guesses(inst);
  // {}, {0}, {1}; the pair is dependent
  EXPECT_EQ(guesses.size(), 3u);
}

TEST(DualGuesses, RequireFiniteBounds) {
  Instance inst{IntMat({{1}}), {0}, {0}, {std::nullopt}, QuadraticDistance{{0}}};
  EXPECT_THROW(enumerate_dual_guesses(inst), PreconditionError);
  EXPECT_THROW(solve_bounded(inst), PreconditionError);
}

TEST(DualGuesses, OffSupportPerturbationCoefficientIsOne) {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    Profile p;
    p.n = 5;
    p.m = 1 + seed % 2;
    Instance inst = random_instance(seed, p);
    for (const DualGuess& g : enumerate_dual_guesses(inst)) {
      for (std::size_t j = 0; j < inst.n(); ++j) {
        bool in_support = std::find(g.support.begin(), g.support.end(), j) != g.support.end();
        if (in_support) {
          EXPECT_TRUE(g.reduced[j].is_zero());
        } else {
          EXPECT_EQ(g.reduced[j].coeff(j + 1), 1) << "seed " << seed;
          EXPECT_NE(eps_sign(g.reduced[j]), Sign::zero);
        }
      }
    }
  }
}

TEST(Bounded, QuadraticTieGoesToSmallerX) {
  Instance inst{IntMat({{1, 1}}), {0, 0}, {0, 0}, {1, 1}, QuadraticDistance{{1}}};
  auto r = solve_bounded(inst);
  EXPECT_EQ(r.solution.status, Status::optimal);
  EXPECT_EQ(r.solution.x, (IntVec{0, 1}));
  EXPECT_EQ(r.solution.value, ExtRat(Rat(0)));
}

TEST(Bounded, TwoRowIndicator) {
  Instance inst{IntMat({{1, 0, 1}, {0, 1, 1}}), {0, 0, 1}, {0, 0, 0}, {1, 1, 1}, EqualityIndicator{{1, 1}}};
  auto r = solve_bounded(inst);
  EXPECT_EQ(r.solution.x, (IntVec{1, 1, 0}));
  EXPECT_EQ(r.solution.value, ExtRat(Rat(0)));
}

TEST(Bounded, FrozenBox) {
  Instance inst{IntMat({{1, -2}}), {3, 1}, {2, -1}, {2, -1}, QuadraticDistance{{0}}};
  auto r = solve_bounded(inst);
  EXPECT_EQ(r.solution.x, (IntVec{2, -1}));
  EXPECT_EQ(r.solution.value, ExtRat(Rat(5 + 16)));
}

TEST(Bounded, MatchesBruteForce) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Profile p;
    p.n = 2 + seed % 5;
    p.m = 1 + seed % 2;
    Instance inst = random_instance(seed + 1000, p);
    auto r = solve_bounded(inst);
    Solution ref = brute_force_solve(inst);
    ASSERT_EQ(r.solution.value, ref.value) << "seed " << seed;
    if (ref.status == Status::infeasible) {
      EXPECT_EQ(r.solution.status, Status::infeasible);
    } else {
      EXPECT_EQ(r.solution.status, Status::optimal);
      EXPECT_EQ(evaluate(inst, r.solution.x), r.solution.value);
      EXPECT_LE(r.stats.best_radius, r.stats.full_radius.get_si());
    }
  }
}

TEST(Bounded, DroppingAGuessNeverImproves) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Profile p;
    p.n = 4;
    p.m = 1 + seed % 2;
    Instance inst = random_instance(seed + 77, p);
    std::vector<GuessWork> all;
    for (auto& g : enumerate_dual_guesses(inst)) {
      GuessWork w;
      w.tight = complement(inst.n(), g.support);
      for (std::size_t j : w.tight) w.center.push_back(g.z[j]);
      w.free = g.support;
      all.push_back(std::move(w));
    }
    const Int budget = proximity_bound(static_cast<std::int64_t>(inst.m()), inst.delta());
    ExtRat full = search_guesses(inst, all, budget, {}).solution.value;
    for (std::size_t drop = 0; drop < all.size(); ++drop) {
      std::vector<GuessWork> some;
      for (std::size_t k = 0; k < all.size(); ++k) {
        if (k != drop) some.push_back(all[k]);
      }
      ExtRat part = search_guesses(inst, some, budget, {}).solution.value;
      EXPECT_FALSE(part < full) << "seed " << seed;
    }
  }
}

TEST(Bounded, ZeroRadiusCapIsHeuristic) {
  Instance inst{IntMat({{1, 1}}), {1, 1}, {0, 0}, {3, 3}, QuadraticDistance{{4}}};
  SolveOptions opts;
  opts.radius_cap = 0;
  auto r = solve_bounded(inst, opts);
  EXPECT_EQ(r.solution.status, Status::heuristic);
  EXPECT_TRUE(r.stats.capped);
  EXPECT_EQ(r.stats.radius_used, 0);
  auto full = solve_bounded(inst);
  EXPECT_EQ(full.solution.status, Status::optimal);
  EXPECT_FALSE(full.solution.value < r.solution.value);
}

TEST(Bounded, ThreadCountDoesNotChangeResult) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Profile p;
    p.n = 5;
    p.m = 2;
    Instance inst = random_instance(seed + 500, p);
    SolveOptions four;
    four.jobs = 4;
    auto a = solve_bounded(inst);
    auto b = solve_bounded(inst, four);
    EXPECT_EQ(a.solution.x, b.solution.x);
    EXPECT_EQ(a.solution.value, b.solution.value);
    EXPECT_EQ(a.stats.guesses_explored, b.stats.guesses_explored);
    EXPECT_EQ(a.stats.targets, b.stats.targets);
    EXPECT_EQ(a.stats.best_radius, b.stats.best_radius);
  }
}

}  // namespace
}  // namespace lowdim
