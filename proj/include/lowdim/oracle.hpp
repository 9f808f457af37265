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

#ifndef LOWDIM_ORACLE_HPP
#define LOWDIM_ORACLE_HPP

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lowdim/model.hpp"
#include "lowdim/numeric.hpp"

namespace lowdim {

/// Raised when a search direction has no finite bracket.
class UnboundedDomain : public Error {
 public:
  using Error::Error;
};

/// Largest offset probed by exponential bracketing.
inline constexpr std::int64_t kBracketCap = std::int64_t{1} << 62;

/// Box scans larger than this are refused rather than run.
inline constexpr std::uint64_t kMaxSubproblemBox = 10'000'000;

struct UnivariateResult {
  std::int64_t argmin = 0;
  Rat value;
};

/// Leftmost integer minimizer of a convex sequence on [lo, hi]; infinite ends are
/// bracketed by doubling probes up to kBracketCap.
inline UnivariateResult solve_univariate_convex(Bound lo, Bound hi, const std::function<Rat(std::int64_t)>& eval) {
  // rises(x): f(x+1) >= f(x). Monotone false..true on a convex sequence.
  auto rises = [&](std::int64_t x) { return eval(x + 1) >= eval(x); };

  auto bracket_right = [&](std::int64_t from) {
    for (std::int64_t step = 1;; step *= 2) {
      std::int64_t p = from + (step - 1);
      if (rises(p)) return p;
      if (step >= kBracketCap) throw UnboundedDomain("objective decreases without bound toward +inf");
    }
  };
  auto bracket_left = [&](std::int64_t from) {
    for (std::int64_t step = 1;; step *= 2) {
      std::int64_t p = from - step;
      if (!rises(p)) return p + 1;
      if (step >= kBracketCap) throw UnboundedDomain("objective does not increase toward -inf");
    }
  };

  std::int64_t a = 0;
  std::int64_t b = 0;
  if (lo && hi) {
    a = *lo;
    b = *hi;
  } else if (lo) {
    a = *lo;
    b = bracket_right(a);
  } else if (hi) {
    b = *hi;
    a = bracket_left(b);
  } else if (rises(0)) {
    b = 0;
    a = bracket_left(0);
  } else {
    a = 1;
    b = bracket_right(1);
  }
  if (a > b) throw Error("solve_univariate_convex: empty interval");

  // Smallest x in [a, b) with rises(x), else b.
  std::int64_t left = a;
  std::int64_t right = b;
  while (left < right) {
    std::int64_t mid = left + (right - left) / 2;
    if (rises(mid)) {
      right = mid;
    } else {
      left = mid + 1;
    }
  }
  return {left, eval(left)};
}

// ---------------------------------------------------------------------------

struct SubResult {
  IntVec x;  // values of the free variables, in query order
  Rat value;  // c_I x + g(W_I x + s)
};

/// Solves min c_I x + g(W_I x + s) over the box of the free variables I, |I| <= m,
/// with s = W_J z the contribution of the fixed variables. Ties go to the
/// lexicographically smallest x_I. Preparation depends only on (instance, I), so one
/// object serves every fixed contribution.
class SubproblemOracle {
 public:
  SubproblemOracle(const Instance& inst, std::vector<std::size_t> free) : inst_(&inst), free_(std::move(free)) {
    if (free_.size() > inst.m()) throw std::invalid_argument("subproblem: more free variables than rows");
    cols_ = inst.W.select_columns(free_);
    for (std::size_t i : free_) {
      lo_.push_back(inst.lower[i]);
      hi_.push_back(inst.upper[i]);
      c_.push_back(inst.c[i]);
    }
    finite_ = std::all_of(lo_.begin(), lo_.end(), [](const Bound& b) { return b.has_value(); }) &&
              std::all_of(hi_.begin(), hi_.end(), [](const Bound& b) { return b.has_value(); });
    if (finite_) {
      volume_ = 1;
      for (std::size_t k = 0; k < free_.size(); ++k) {
        std::uint64_t w = static_cast<std::uint64_t>(*hi_[k] - *lo_[k]) + 1;
        volume_ = volume_ > kMaxSubproblemBox ? volume_ : volume_ * w;
      }
    }
    prepare_independent_rows();
  }

  const std::vector<std::size_t>& free() const { return free_; }

  std::optional<SubResult> solve(std::span<const std::int64_t> s) const {
    calls_.fetch_add(1, std::memory_order_relaxed);
    const auto& obj = inst_->objective;
    if (free_.empty()) {
      ExtRat g = objective_value(obj, s);
      if (g.is_infinite()) return std::nullopt;
      return SubResult{{}, g.value()};
    }
    if (std::holds_alternative<EqualityIndicator>(obj) && full_column_rank_) return solve_indicator(s);
    const bool convex_builtin = std::holds_alternative<QuadraticDistance>(obj) ||
                                std::holds_alternative<KnapsackPenalty>(obj) ||
                                std::holds_alternative<SeparableConvexPwl>(obj);
    if (free_.size() == 1 && convex_builtin) return solve_line(s);
    if (finite_ && volume_ <= kMaxSubproblemBox) return enumerate(lo_, hi_, s);
    if (std::holds_alternative<QuadraticDistance>(obj)) return solve_quadratic_bracketed(s);
    if (finite_) throw UnboundedDomain("subproblem box too large to scan");
    throw UnboundedDomain("free variables with infinite bounds need a coercive objective; supply finite bounds");
  }

  std::uint64_t calls() const { return calls_.load(); }

 private:
  IntVec image(std::span<const std::int64_t> x, std::span<const std::int64_t> s) const {
    IntVec v(s.begin(), s.end());
    for (std::size_t r = 0; r < cols_.rows(); ++r) {
      for (std::size_t k = 0; k < x.size(); ++k) v[r] += cols_(r, k) * x[k];
    }
    return v;
  }

  ExtRat value_at(std::span<const std::int64_t> x, std::span<const std::int64_t> s) const {
    return ExtRat(linear_cost(c_, x)) + objective_value(inst_->objective, image(x, s));
  }

  std::optional<SubResult> enumerate(const std::vector<Bound>& lo, const std::vector<Bound>& hi,
                                     std::span<const std::int64_t> s) const {
    const std::size_t k = free_.size();
    IntVec x(k);
    for (std::size_t i = 0; i < k; ++i) {
      x[i] = *lo[i];
      if (*lo[i] > *hi[i]) return std::nullopt;
    }
    std::optional<SubResult> best;
    ExtRat best_value = ExtRat::infinity();
    while (true) {
      ExtRat v = value_at(x, s);
      if (v < best_value) {  // lexicographic scan: first strict improvement keeps the smallest x
        best_value = v;
        best = SubResult{x, v.value()};
      }
      std::size_t pos = k;
      while (pos > 0) {
        --pos;
        if (x[pos] < *hi[pos]) {
          ++x[pos];
          break;
        }
        x[pos] = *lo[pos];
        if (pos == 0) return best;
      }
    }
  }

  std::optional<SubResult> solve_line(std::span<const std::int64_t> s) const {
    auto eval = [&](std::int64_t t) {
      std::int64_t one[1] = {t};
      return value_at(one, s).value();
    };
    auto r = solve_univariate_convex(lo_[0], hi_[0], eval);
    return SubResult{{r.argmin}, r.value};
  }

  // Picks |I| rows of W_I that are linearly independent, if any.
  void prepare_independent_rows() {
    const std::size_t k = free_.size();
    if (k == 0) return;
    RatMat acc;
    for (std::size_t r = 0; r < cols_.rows() && rows_.size() < k; ++r) {
      RatVec row(k);
      for (std::size_t j = 0; j < k; ++j) row[j] = make_rat(cols_(r, j));
      RatMat trial = acc;
      trial.append_row(row);
      if (rank(trial) == trial.rows()) {
        acc = std::move(trial);
        rows_.push_back(r);
      }
    }
    full_column_rank_ = rows_.size() == k;
    if (full_column_rank_) square_ = acc;
  }

  // Unique candidate when W_I has full column rank.
  std::optional<SubResult> solve_indicator(std::span<const std::int64_t> s) const {
    const auto& b = std::get<EqualityIndicator>(inst_->objective).b;
    const std::size_t k = free_.size();
    std::vector<EpsPoly> rhs;
    for (std::size_t r : rows_) rhs.push_back(EpsPoly::constant(1, make_rat(b[r] - s[r])));
    auto sol = solve_square_system(square_, rhs);
    if (!sol) return std::nullopt;
    IntVec x(k);
    for (std::size_t j = 0; j < k; ++j) {
      const Rat& q = (*sol)[j][0];
      if (q.get_den() != 1 || !q.get_num().fits_slong_p()) return std::nullopt;
      x[j] = q.get_num().get_si();
      if ((lo_[j] && x[j] < *lo_[j]) || (hi_[j] && x[j] > *hi_[j])) return std::nullopt;
    }
    ExtRat v = value_at(x, s);
    if (v.is_infinite()) return std::nullopt;
    return SubResult{x, v.value()};
  }

  // Every x with f(x) <= f(x0) lies in a box derived from coercivity; scan that box.
  std::optional<SubResult> solve_quadratic_bracketed(std::span<const std::int64_t> s) const {
    if (!full_column_rank_) throw UnboundedDomain("free columns are dependent; the quadratic objective is not coercive");
    const auto& b = std::get<QuadraticDistance>(inst_->objective).b;
    const std::size_t k = free_.size();
    // y with A^T y = c_I, so c_I^T x = y^T (A x).
    RatMat at = square_.transpose();
    std::vector<EpsPoly> rhs;
    for (std::size_t j = 0; j < k; ++j) rhs.push_back(EpsPoly::constant(1, c_[j]));
    auto y = solve_square_system(at, rhs);
    // A^{-1} columns.
    std::vector<RatVec> inv(k, RatVec(k));
    for (std::size_t j = 0; j < k; ++j) {
      std::vector<EpsPoly> e(k, EpsPoly::constant(1, 0));
      e[j][0] = 1;
      auto col = solve_square_system(square_, e);
      for (std::size_t i = 0; i < k; ++i) inv[i][j] = (*col)[i][0];
    }
    RatVec d(k);
    for (std::size_t i = 0; i < k; ++i) d[i] = b[rows_[i]] - make_rat(s[rows_[i]]);
    Rat y_l1 = 0;
    Rat y_dot_d = 0;
    for (std::size_t i = 0; i < k; ++i) {
      y_l1 += abs((*y)[i][0]);
      y_dot_d += (*y)[i][0] * d[i];
    }
    IntVec x0(k);
    for (std::size_t j = 0; j < k; ++j) {
      x0[j] = 0;
      if (lo_[j]) x0[j] = std::max(x0[j], *lo_[j]);
      if (hi_[j]) x0[j] = std::min(x0[j], *hi_[j]);
    }
    Rat f0 = value_at(x0, s).value();
    // f(x) >= t^2 - |y|_1 t + y.d with t = ||A x - d||_inf; keep t where this is <= f0.
    Rat slack = f0 - y_dot_d;
    auto exceeds = [&](const Int& t) { return Rat(t * t) - y_l1 * Rat(t) > slack; };
    // t^2 - |y|_1 t is increasing from |y|_1 / 2 on; search the first exceeding integer there.
    Int lo_t;
    mpz_cdiv_q(lo_t.get_mpz_t(), y_l1.get_num_mpz_t(), y_l1.get_den_mpz_t());
    Int hi_t = lo_t + 1;
    while (!exceeds(hi_t)) hi_t *= 2;
    if (exceeds(lo_t)) {
      hi_t = lo_t;
    } else {
      while (lo_t + 1 < hi_t) {
        Int mid = (lo_t + hi_t) / 2;
        if (exceeds(mid)) {
          hi_t = mid;
        } else {
          lo_t = mid;
        }
      }
    }
    const Rat radius(hi_t);
    std::vector<Bound> lo(k);
    std::vector<Bound> hi(k);
    std::uint64_t volume = 1;
    for (std::size_t j = 0; j < k; ++j) {
      Rat center = 0;
      Rat spread = 0;
      for (std::size_t i = 0; i < k; ++i) {
        center += inv[j][i] * d[i];
        spread += abs(inv[j][i]) * radius;
      }
      Rat left = center - spread;
      Rat right = center + spread;
      Int fl;
      Int ce;
      mpz_fdiv_q(fl.get_mpz_t(), left.get_num_mpz_t(), left.get_den_mpz_t());
      mpz_cdiv_q(ce.get_mpz_t(), right.get_num_mpz_t(), right.get_den_mpz_t());
      if (!fl.fits_slong_p() || !ce.fits_slong_p()) throw UnboundedDomain("quadratic bracket overflows");
      std::int64_t l = fl.get_si();
      std::int64_t h = ce.get_si();
      if (lo_[j]) l = std::max(l, *lo_[j]);
      if (hi_[j]) h = std::min(h, *hi_[j]);
      if (l > h) return std::nullopt;
      lo[j] = l;
      hi[j] = h;
      volume *= static_cast<std::uint64_t>(h - l + 1);
      if (volume > kMaxSubproblemBox) throw UnboundedDomain("quadratic bracket too large to scan");
    }
    return enumerate(lo, hi, s);
  }

  const Instance* inst_;
  std::vector<std::size_t> free_;
  IntMat cols_;
  std::vector<Bound> lo_;
  std::vector<Bound> hi_;
  RatVec c_;
  bool finite_ = false;
  std::uint64_t volume_ = 0;
  std::vector<std::size_t> rows_;
  bool full_column_rank_ = false;
  RatMat square_;
  mutable std::atomic<std::uint64_t> calls_{0};
};

/// One-shot form of SubproblemOracle::solve.
inline std::optional<SubResult> solve_subproblem(const Instance& inst, std::span<const std::size_t> free,
                                                 std::span<const std::int64_t> fixed_contribution) {
  SubproblemOracle oracle(inst, std::vector<std::size_t>(free.begin(), free.end()));
  return oracle.solve(fixed_contribution);
}

}  // namespace lowdim

#endif  // LOWDIM_ORACLE_HPP
