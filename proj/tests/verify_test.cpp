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

#include "lowdim/verify.hpp"

namespace lowdim {
namespace {

TEST(BruteForce, QuadraticExample) {
  Instance inst{IntMat({{1, 2, 1}}), {0, 0, 0}, {0, 0, 0}, {1, 1, 1}, QuadraticDistance{{2}}};
  Solution s = brute_force_solve(inst);
  EXPECT_EQ(s.value, ExtRat(Rat(0)));
  EXPECT_EQ(s.x, (IntVec{0, 1, 0}));
  EXPECT_EQ(s.status, Status::optimal);
}

TEST(BruteForce, FrozenBox) {
  Instance inst{IntMat({{1, 1}}), {1, 1}, {3, -2}, {3, -2}, QuadraticDistance{{0}}};
  Solution s = brute_force_solve(inst);
  EXPECT_EQ(s.x, (IntVec{3, -2}));
  EXPECT_EQ(s.value, ExtRat(Rat(1 + 1)));
}

TEST(BruteForce, Infeasible) {
  Instance inst{IntMat({{2}}), {0}, {0}, {3}, EqualityIndicator{{3}}};
  Solution s = brute_force_solve(inst);
  EXPECT_EQ(s.status, Status::infeasible);
  EXPECT_TRUE(s.x.empty());
}

TEST(BruteForce, VolumeLimit) {
  Instance inst{IntMat({{1, 1, 1}}), {0, 0, 0}, {0, 0, 0}, {200, 200, 200}, QuadraticDistance{{0}}};
  EXPECT_THROW(brute_force_solve(inst), VolumeLimitExceeded);
  EXPECT_NO_THROW(brute_force_solve(inst, std::nullopt, 10'000'000));
}

TEST(BruteForce, InfiniteBoundsNeedExplicitCap) {
  Instance inst{IntMat({{1}}), {0}, {std::nullopt}, {std::nullopt}, QuadraticDistance{{5}}};
  EXPECT_THROW(brute_force_solve(inst), Error);
  Solution s = brute_force_solve(inst, 10);
  EXPECT_EQ(s.x, IntVec{5});
}

TEST(Generator, SameSeedSameInstance) {
  Profile p;
  p.n = 5;
  p.m = 2;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Instance a = random_instance(seed, p);
    Instance b = random_instance(seed, p);
    EXPECT_EQ(a.W, b.W);
    EXPECT_EQ(a.c, b.c);
    EXPECT_EQ(a.lower, b.lower);
    EXPECT_EQ(a.upper, b.upper);
    EXPECT_EQ(a.objective.index(), b.objective.index());
    EXPECT_EQ(evaluate(a, IntVec(5, 0)), evaluate(b, IntVec(5, 0)));
  }
}

TEST(Generator, PinnedStream) {
  // mt19937_64 output is fixed by the standard; this pins the rejection sampler too.
  Rng rng(42);
  std::vector<std::int64_t> draws;
  for (int i = 0; i < 8; ++i) draws.push_back(rng.uniform(-5, 5));
  Rng again(42);
  for (int i = 0; i < 8; ++i) EXPECT_EQ(again.uniform(-5, 5), draws[static_cast<std::size_t>(i)]);
  std::mt19937_64 raw;
  raw.discard(9999);
  EXPECT_EQ(raw(), 9981545732273789042ull);
}

TEST(Generator, RespectsDeltaAndBox) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Profile p;
    p.n = 6;
    p.m = 1 + seed % 2;
    p.delta = 1 + static_cast<std::int64_t>(seed % 3);
    p.nonneg = seed % 4 == 0;
    Instance inst = random_instance(seed, p);
    EXPECT_LE(inst.delta(), p.delta);
    EXPECT_TRUE(validate(inst).empty());
    for (std::size_t j = 0; j < inst.n(); ++j) {
      EXPECT_LE(*inst.lower[j], *inst.upper[j]);
      if (p.nonneg) {
        EXPECT_EQ(*inst.lower[j], 0);
        EXPECT_LE(*inst.upper[j], p.box_hi);
      } else {
        EXPECT_GE(*inst.lower[j], p.box_lo);
        EXPECT_LE(*inst.upper[j], p.box_hi);
      }
    }
  }
}

TEST(Generator, FamiliesHonored) {
  Profile p;
  p.m = 2;
  p.family = Family::separable_convex_pwl;
  EXPECT_TRUE(std::holds_alternative<SeparableConvexPwl>(random_instance(3, p).objective));
  p.family = Family::knapsack_penalty;  // needs m = 1
  EXPECT_TRUE(std::holds_alternative<QuadraticDistance>(random_instance(3, p).objective));
  p.m = 1;
  EXPECT_TRUE(std::holds_alternative<KnapsackPenalty>(random_instance(3, p).objective));
  EXPECT_EQ(parse_family("quadratic_distance"), Family::quadratic_distance);
  EXPECT_THROW(parse_family("nope"), std::invalid_argument);
}

TEST(Generator, IndicatorRoughlyHalfInfeasible) {
  Profile p;
  p.family = Family::equality_indicator;
  int infeasible = 0;
  const int total = 1000;
  for (int seed = 0; seed < total; ++seed) {
    if (brute_force_solve(random_instance(static_cast<std::uint64_t>(seed), p)).status == Status::infeasible) ++infeasible;
  }
  EXPECT_NEAR(static_cast<double>(infeasible) / total, 0.5, 0.05);
}

TEST(Generator, PlantedSensing) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t m = 1 + seed % 2;
    PlantedSensing ps = random_planted_sensing(seed, 6, m, 2);
    std::size_t fractional = 0;
    for (const Rat& v : ps.z) {
      EXPECT_TRUE(v >= 0 && v <= 1);
      if (v.get_den() != 1) ++fractional;
    }
    EXPECT_LE(fractional, m);
    EXPECT_LE(ps.W.delta(), 2);
  }
}

}  // namespace
}  // namespace lowdim
