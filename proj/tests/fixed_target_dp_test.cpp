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

#include <map>
#include <random>
#include <set>

#include "lowdim/fixed_target_dp.hpp"

namespace lowdim {
namespace {

struct Best {
  Rat cost;
  IntVec x;
};

// Every x in the box with ||x - z||_1 <= budget, keyed by W x.
std::map<IntVec, Best> exhaustive(const IntMat& w, const RatVec& c, const std::vector<Bound>& lo,
                                  const std::vector<Bound>& hi, const IntVec& z, std::int64_t budget) {
  std::map<IntVec, Best> out;
  IntVec x(lo.size());
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = *lo[j];
  while (true) {
    std::int64_t dist = 0;
    for (std::size_t j = 0; j < x.size(); ++j) dist += std::abs(x[j] - z[j]);
    if (dist <= budget) {
      IntVec key = w.apply(x);
      Rat cost = linear_cost(c, x);
      auto it = out.find(key);
      if (it == out.end() || cost < it->second.cost || (cost == it->second.cost && x < it->second.x)) {
        out[key] = Best{cost, x};
      }
    }
    std::size_t pos = x.size();
    bool done = true;
    while (pos-- > 0) {
      if (x[pos] < *hi[pos]) {
        ++x[pos];
        done = false;
        break;
      }
      x[pos] = *lo[pos];
    }
    if (done) return out;
  }
}

std::int64_t binom(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  std::int64_t r = 1;
  for (std::int64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

TEST(BallOrder, OneDimension) {
  auto pts = enumerate_target_ball(IntVec{0}, 2);
  std::vector<IntVec> want{{0}, {-1}, {1}, {-2}, {2}};
  EXPECT_EQ(pts, want);
}

TEST(BallOrder, TwoDimensionsRadiusOne) {
  auto pts = enumerate_target_ball(IntVec{0, 0}, 1);
  std::vector<IntVec> want{{0, 0}, {-1, 0}, {1, 0}, {0, -1}, {0, 1}};
  EXPECT_EQ(pts, want);
}

TEST(BallOrder, TwoDimensionsRadiusTwo) {
  auto pts = enumerate_target_ball(IntVec{0, 0}, 2);
  EXPECT_EQ(pts.size(), 13u);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) EXPECT_LE(l1_norm(pts[i]), l1_norm(pts[i + 1]));
}

TEST(BallOrder, ShiftedCenter) {
  auto pts = enumerate_target_ball(IntVec{5, -3}, 1);
  std::vector<IntVec> want{{5, -3}, {4, -3}, {6, -3}, {5, -4}, {5, -2}};
  EXPECT_EQ(pts, want);
}

TEST(BallOrder, CountsMatchClosedFormAndAreDistinct) {
  for (std::int64_t m = 1; m <= 3; ++m) {
    for (std::int64_t r = 0; r <= 6; ++r) {
      std::int64_t want = 0;
      for (std::int64_t k = 0; k <= m; ++k) want += (std::int64_t{1} << k) * binom(m, k) * binom(r, k);
      auto pts = enumerate_target_ball(IntVec(static_cast<std::size_t>(m), 0), r);
      EXPECT_EQ(static_cast<std::int64_t>(pts.size()), want) << m << " " << r;
      std::set<IntVec> uniq(pts.begin(), pts.end());
      EXPECT_EQ(uniq.size(), pts.size());
      for (std::size_t i = 0; i + 1 < pts.size(); ++i) EXPECT_TRUE(ball_before(pts[i], pts[i + 1]));
    }
  }
}

TEST(FixedTargetDp, SmallExample) {
  IntMat w({{1, 1}});
  RatVec c{1, 2};
  std::vector<Bound> lo{0, 0}, hi{2, 2};
  DpTable t = build_dp(w, c, lo, hi, IntVec{0, 0}, Int(3));
  auto r = t.query(IntVec{2});
  ASSERT_TRUE(r);
  EXPECT_EQ(r->x, (IntVec{2, 0}));
  EXPECT_EQ(r->cost, 2);
  EXPECT_FALSE(t.query(IntVec{4}));  // needs ||x||_1 = 4 > 3
  EXPECT_TRUE(t.query(IntVec{3}));
}

TEST(FixedTargetDp, ParityUnreachable) {
  IntMat w({{2}});
  std::vector<Bound> lo{0}, hi{5};
  DpTable t = build_dp(w, RatVec{0}, lo, hi, IntVec{0}, Int(5));
  EXPECT_FALSE(t.query(IntVec{3}));
  EXPECT_TRUE(t.query(IntVec{4}));
}

TEST(FixedTargetDp, ZeroBudgetOnlyCenter) {
  IntMat w({{1, 2}});
  std::vector<Bound> lo{0, 0}, hi{3, 3};
  DpTable t = build_dp(w, RatVec{1, 1}, lo, hi, IntVec{1, 1}, Int(0));
  auto res = t.reachable_residuals();
  ASSERT_EQ(res.size(), 1u);
  EXPECT_EQ(res[0], IntVec{0});
  auto r = t.query(IntVec{3});
  ASSERT_TRUE(r);
  EXPECT_EQ(r->x, (IntVec{1, 1}));
}

TEST(FixedTargetDp, BudgetDroppedWhenItCannotBind) {
  IntMat w({{1, 1}});
  std::vector<Bound> lo{0, 0}, hi{1, 1};
  DpTable loose = build_dp(w, RatVec{0, 0}, lo, hi, IntVec{0, 0}, Int(50));
  EXPECT_FALSE(loose.budget_tracked());
  EXPECT_EQ(loose.budget(), 2);
  DpTable tight = build_dp(w, RatVec{0, 0}, lo, hi, IntVec{0, 0}, Int(1));
  EXPECT_TRUE(tight.budget_tracked());
  EXPECT_FALSE(tight.query(IntVec{2}));
  EXPECT_TRUE(loose.query(IntVec{2}));
}

TEST(FixedTargetDp, HugeBudgetWithInfiniteBoundsRejected) {
  IntMat w({{1}});
  std::vector<Bound> lo{0}, hi{std::nullopt};
  Int huge = Int(1) << 80;
  EXPECT_THROW(build_dp(w, RatVec{0}, lo, hi, IntVec{0}, huge), Error);
}

TEST(FixedTargetDp, MatchesExhaustiveScan) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 250; ++trial) {
    std::size_t m = 1 + rng() % 2;
    std::size_t t = 1 + rng() % 4;
    IntMat w(m, t);
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t j = 0; j < t; ++j) w.set(r, j, static_cast<std::int64_t>(rng() % 5) - 2);
    }
    RatVec c(t);
    std::vector<Bound> lo(t), hi(t);
    IntVec z(t);
    for (std::size_t j = 0; j < t; ++j) {
      c[j] = make_rat(static_cast<std::int64_t>(rng() % 7) - 3, 1 + static_cast<std::int64_t>(rng() % 2));
      std::int64_t a = static_cast<std::int64_t>(rng() % 4) - 2;
      lo[j] = a;
      hi[j] = a + static_cast<std::int64_t>(rng() % 4);
      z[j] = *lo[j] + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(*hi[j] - *lo[j] + 1));
    }
    std::int64_t budget = static_cast<std::int64_t>(rng() % 6);
    DpTable table = build_dp(w, c, lo, hi, z, Int(budget));
    auto ref = exhaustive(w, c, lo, hi, z, budget);
    IntVec base = w.apply(z);
    // every reachable target and a ring of unreachable ones around them
    std::int64_t reach = w.delta() * budget + 2;
    for_each_ball_point(base, reach, [&](const IntVec& target) {
      auto got = table.query(target);
      auto it = ref.find(target);
      ASSERT_EQ(got.has_value(), it != ref.end()) << "trial " << trial;
      if (got) {
        EXPECT_EQ(got->cost, it->second.cost) << "trial " << trial;
        EXPECT_EQ(got->x, it->second.x) << "trial " << trial;
      }
    });
    EXPECT_EQ(table.reachable_residuals().size(), ref.size());
  }
}

TEST(FixedTargetDp, CostNonincreasingInBudget) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    IntMat w(1, 3);
    RatVec c(3);
    std::vector<Bound> lo(3, Bound(-2)), hi(3, Bound(2));
    for (std::size_t j = 0; j < 3; ++j) {
      w.set(0, j, static_cast<std::int64_t>(rng() % 5) - 2);
      c[j] = make_rat(static_cast<std::int64_t>(rng() % 9) - 4);
    }
    std::optional<Rat> prev;
    IntVec target{static_cast<std::int64_t>(rng() % 5) - 2};
    for (std::int64_t p = 0; p <= 6; ++p) {
      DpTable table = build_dp(w, c, lo, hi, IntVec{0, 0, 0}, Int(p));
      auto r = table.query(target);
      if (prev) {
        ASSERT_TRUE(r);
        EXPECT_LE(r->cost, *prev);
      }
      if (r) prev = r->cost;
    }
  }
}

}  // namespace
}  // namespace lowdim
