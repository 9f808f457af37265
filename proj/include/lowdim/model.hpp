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

#ifndef LOWDIM_MODEL_HPP
#define LOWDIM_MODEL_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lowdim/numeric.hpp"

namespace lowdim {

/// Rational extended by +infinity.
class ExtRat {
 public:
  ExtRat() : infinite_(true) {}
  ExtRat(Rat v) : infinite_(false), value_(std::move(v)) {}  // NOLINT(google-explicit-constructor)
  static ExtRat infinity() { return ExtRat(); }

  bool is_infinite() const { return infinite_; }
  bool is_finite() const { return !infinite_; }
  const Rat& value() const {
    if (infinite_) throw Error("value() on +inf");
    return value_;
  }

  friend bool operator==(const ExtRat& a, const ExtRat& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }
  friend bool operator<(const ExtRat& a, const ExtRat& b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
  }
  friend ExtRat operator+(const ExtRat& a, const ExtRat& b) {
    if (a.infinite_ || b.infinite_) return infinity();
    return ExtRat(Rat(a.value_ + b.value_));
  }

 private:
  bool infinite_;
  Rat value_;
};

inline std::string to_string(const ExtRat& v) { return v.is_infinite() ? "+inf" : to_string(v.value()); }
inline std::ostream& operator<<(std::ostream& os, const ExtRat& v) { return os << to_string(v); }

/// A variable bound; std::nullopt is -inf for a lower bound and +inf for an upper bound.
using Bound = std::optional<std::int64_t>;

// ---------------------------------------------------------------------------
// Objective families for g.

/// g(v) = 0 if v = b, +inf otherwise.
struct EqualityIndicator {
  IntVec b;
};

/// g(v) = ||v - b||^2.
struct QuadraticDistance {
  RatVec b;
};

/// One-dimensional piecewise-linear function with integer breakpoints t_1 < ... < t_k.
/// slopes[j] applies on (t_j, t_{j+1}] with t_0 = -inf and t_{k+1} = +inf; offset is the value at 0.
struct ConvexPwl {
  IntVec breakpoints;
  RatVec slopes;
  Rat offset;

  bool is_convex() const {
    for (std::size_t j = 1; j < slopes.size(); ++j) {
      if (slopes[j] < slopes[j - 1]) return false;
    }
    return true;
  }

  Rat operator()(std::int64_t v) const {
    if (v >= 0) return offset + integral(0, v);
    return offset - integral(v, 0);
  }

  /// Left derivative at v; used as the subgradient at breakpoints.
  const Rat& left_slope(std::int64_t v) const {
    auto it = std::lower_bound(breakpoints.begin(), breakpoints.end(), v);
    return slopes[static_cast<std::size_t>(it - breakpoints.begin())];
  }

 private:
  // Integral of the slope function over [lo, hi], lo <= hi.
  Rat integral(std::int64_t lo, std::int64_t hi) const {
    Rat acc = 0;
    for (std::size_t j = 0; j < slopes.size(); ++j) {
      std::int64_t a = lo;
      std::int64_t b = hi;
      if (j > 0) a = std::max(a, breakpoints[j - 1]);
      if (j < breakpoints.size()) b = std::min(b, breakpoints[j]);
      if (b > a) acc += slopes[j] * Rat(Int(static_cast<long>(b - a)));
    }
    return acc;
  }
};

/// g(v) = sum_i pieces[i](v_i).
struct SeparableConvexPwl {
  std::vector<ConvexPwl> pieces;
};

/// a v^2 + b v + c with a >= 0.
struct QuadraticPenalty {
  Rat a;
  Rat b;
  Rat c;
  Rat operator()(std::int64_t v) const {
    Rat x = make_rat(v);
    return a * x * x + b * x + c;
  }
};

/// One-dimensional convex penalty on the used capacity (m = 1).
struct KnapsackPenalty {
  std::variant<QuadraticPenalty, ConvexPwl> penalty;
};

/// User-supplied evaluator of g. Must be pure and re-entrant.
struct ExternalOracle {
  std::function<ExtRat(std::span<const std::int64_t>)> g;
  std::string name = "external";
};

using ObjectiveSpec =
    std::variant<EqualityIndicator, QuadraticDistance, SeparableConvexPwl, KnapsackPenalty, ExternalOracle>;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

inline Rat square(const Rat& r) { return r * r; }

/// g(v) for the given objective.
inline ExtRat objective_value(const ObjectiveSpec& spec, std::span<const std::int64_t> v) {
  return std::visit(
      Overloaded{
          [&](const EqualityIndicator& o) -> ExtRat {
            return std::equal(v.begin(), v.end(), o.b.begin(), o.b.end()) ? ExtRat(Rat(0)) : ExtRat::infinity();
          },
          [&](const QuadraticDistance& o) -> ExtRat {
            Rat acc = 0;
            for (std::size_t i = 0; i < v.size(); ++i) acc += square(make_rat(v[i]) - o.b[i]);
            return acc;
          },
          [&](const SeparableConvexPwl& o) -> ExtRat {
            Rat acc = 0;
            for (std::size_t i = 0; i < v.size(); ++i) acc += o.pieces[i](v[i]);
            return acc;
          },
          [&](const KnapsackPenalty& o) -> ExtRat {
            return std::visit([&](const auto& p) -> ExtRat { return p(v[0]); }, o.penalty);
          },
          [&](const ExternalOracle& o) -> ExtRat { return o.g(v); },
      },
      spec);
}

// ---------------------------------------------------------------------------

/// min c^T x + g(W x) subject to lower <= x <= upper, x integral.
struct Instance {
  IntMat W;
  RatVec c;
  std::vector<Bound> lower;
  std::vector<Bound> upper;
  ObjectiveSpec objective;

  std::size_t n() const { return W.cols(); }
  std::size_t m() const { return W.rows(); }
  std::int64_t delta() const { return W.delta(); }

  bool all_bounds_finite() const {
    return std::all_of(lower.begin(), lower.end(), [](const Bound& b) { return b.has_value(); }) &&
           std::all_of(upper.begin(), upper.end(), [](const Bound& b) { return b.has_value(); });
  }
  bool in_bounds(std::span<const std::int64_t> x) const {
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (lower[i] && x[i] < *lower[i]) return false;
      if (upper[i] && x[i] > *upper[i]) return false;
    }
    return true;
  }
};

enum class Status { optimal, infeasible, heuristic };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::optimal:
      return "optimal";
    case Status::infeasible:
      return "infeasible";
    case Status::heuristic:
      return "heuristic";
  }
  return "?";
}

struct Solution {
  IntVec x;
  ExtRat value;
  Status status = Status::infeasible;
};

/// Shared tie-break: smaller value first, then lexicographically smaller x.
/// Infinite values never beat anything.
inline bool better(const ExtRat& va, std::span<const std::int64_t> xa, const ExtRat& vb,
                   std::span<const std::int64_t> xb) {
  if (va.is_infinite()) return false;
  if (va < vb) return true;
  if (vb < va) return false;
  return std::lexicographical_compare(xa.begin(), xa.end(), xb.begin(), xb.end());
}

/// c^T x (no bound check).
inline Rat linear_cost(const RatVec& c, std::span<const std::int64_t> x) {
  Rat acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != 0) acc += c[i] * make_rat(x[i]);
  }
  return acc;
}

/// c^T x + g(W x); +inf when x violates a bound or g is infinite.
inline ExtRat evaluate(const Instance& inst, std::span<const std::int64_t> x) {
  if (x.size() != inst.n() || !inst.in_bounds(x)) return ExtRat::infinity();
  IntVec v = inst.W.apply(x);
  return ExtRat(linear_cost(inst.c, x)) + objective_value(inst.objective, v);
}

// ---------------------------------------------------------------------------
// Validation.

struct Violation {
  std::string field;
  std::size_t index = 0;
  std::string message;
};

inline std::string to_string(const Violation& v) { return v.field + ": " + v.message; }

inline std::vector<Violation> validate(const Instance& inst) {
  std::vector<Violation> out;
  auto add = [&](std::string field, std::size_t index, std::string msg) {
    out.push_back({std::move(field), index, std::move(msg)});
  };
  const std::size_t m = inst.m();
  const std::size_t n = inst.n();
  if (m < 1) add("W", 0, "at least one row required");
  if (n < 1) add("W", 0, "at least one column required");
  std::int64_t true_delta = 0;
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) true_delta = std::max<std::int64_t>(true_delta, std::abs(inst.W(r, c)));
  }
  if (true_delta != inst.W.delta()) add("W", 0, "delta bound inconsistent with entries");
  if (inst.c.size() != n) add("c", inst.c.size(), "length " + std::to_string(inst.c.size()) + " != n");
  if (inst.lower.size() != n) add("lower", inst.lower.size(), "length mismatch");
  if (inst.upper.size() != n) add("upper", inst.upper.size(), "length mismatch");
  for (std::size_t i = 0; i < std::min({n, inst.lower.size(), inst.upper.size()}); ++i) {
    if (inst.lower[i] && inst.upper[i] && *inst.lower[i] > *inst.upper[i]) {
      add("bounds", i, "bound order at index " + std::to_string(i));
    }
  }
  auto check_pwl = [&](const ConvexPwl& p, const std::string& field, std::size_t idx) {
    if (p.slopes.size() != p.breakpoints.size() + 1) {
      add(field, idx, "slopes must have one more entry than breakpoints");
      return;
    }
    for (std::size_t j = 1; j < p.breakpoints.size(); ++j) {
      if (p.breakpoints[j] <= p.breakpoints[j - 1]) add(field, idx, "breakpoints not strictly increasing");
    }
    if (!p.is_convex()) add(field, idx, "non-convex piece");
  };
  std::visit(Overloaded{
                 [&](const EqualityIndicator& o) {
                   if (o.b.size() != m) add("objective.b", o.b.size(), "length != m");
                 },
                 [&](const QuadraticDistance& o) {
                   if (o.b.size() != m) add("objective.b", o.b.size(), "length != m");
                 },
                 [&](const SeparableConvexPwl& o) {
                   if (o.pieces.size() != m) add("objective.pieces", o.pieces.size(), "length != m");
                   for (std::size_t i = 0; i < o.pieces.size(); ++i) check_pwl(o.pieces[i], "objective.pieces", i);
                 },
                 [&](const KnapsackPenalty& o) {
                   if (m != 1) add("objective", 0, "knapsack penalty requires m = 1");
                   if (auto* q = std::get_if<QuadraticPenalty>(&o.penalty)) {
                     if (q->a < 0) add("objective.penalty", 0, "non-convex piece");
                   } else {
                     check_pwl(std::get<ConvexPwl>(o.penalty), "objective.penalty", 0);
                   }
                 },
                 [&](const ExternalOracle& o) {
                   if (!o.g) add("objective", 0, "external oracle has no evaluator");
                 },
             },
             inst.objective);
  return out;
}

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> v)
      : Error("invalid instance: " + (v.empty() ? std::string() : to_string(v.front()))), violations(std::move(v)) {}
  std::vector<Violation> violations;
};

inline void require_valid(const Instance& inst) {
  auto v = validate(inst);
  if (!v.empty()) throw ValidationError(std::move(v));
}

// ---------------------------------------------------------------------------
// Column merging.

class MergeRefused : public Error {
 public:
  using Error::Error;
};

namespace detail {
inline Bound add_bounds(const Bound& a, const Bound& b) {
  if (!a || !b) return std::nullopt;
  return *a + *b;
}
}  // namespace detail

/// Duplicate W-columns grouped into one variable with Minkowski-summed bounds.
struct MergeMap {
  std::vector<std::vector<std::size_t>> groups;  // original indices, one group per merged variable
  Instance merged;
  std::vector<Bound> original_lower;
  std::vector<Bound> original_upper;

  bool is_identity() const { return groups.size() == original_lower.size(); }

  /// Distributes each merged value over its group greedily, in index order.
  IntVec expand(std::span<const std::int64_t> merged_x) const {
    IntVec x(original_lower.size(), 0);
    for (std::size_t g = 0; g < groups.size(); ++g) {
      std::int64_t remaining = merged_x[g];
      for (std::size_t i : groups[g]) {
        std::int64_t start = 0;
        if (original_lower[i]) start = std::max(start, *original_lower[i]);
        if (original_upper[i]) start = std::min(start, *original_upper[i]);
        x[i] = start;
        remaining -= start;
      }
      for (std::size_t i : groups[g]) {
        if (remaining > 0) {
          std::int64_t room = original_upper[i] ? *original_upper[i] - x[i] : remaining;
          std::int64_t step = std::min(room, remaining);
          x[i] += step;
          remaining -= step;
        } else if (remaining < 0) {
          std::int64_t room = original_lower[i] ? x[i] - *original_lower[i] : -remaining;
          std::int64_t step = std::min(room, -remaining);
          x[i] -= step;
          remaining += step;
        }
      }
      if (remaining != 0) throw Error("expand: merged value outside group bounds");
    }
    return x;
  }
};

/// Merges variables that share a W-column. Refused when c differs inside a group.
inline MergeMap merge_duplicate_columns(const Instance& inst) {
  MergeMap map;
  map.original_lower = inst.lower;
  map.original_upper = inst.upper;
  std::map<IntVec, std::size_t> first;
  for (std::size_t j = 0; j < inst.n(); ++j) {
    auto [it, inserted] = first.emplace(inst.W.column(j), map.groups.size());
    if (inserted) {
      map.groups.push_back({j});
    } else {
      std::size_t g = it->second;
      if (inst.c[map.groups[g].front()] != inst.c[j]) {
        throw MergeRefused("cost differs within duplicate-column group at index " + std::to_string(j));
      }
      map.groups[g].push_back(j);
    }
  }
  std::vector<std::size_t> reps;
  for (const auto& g : map.groups) reps.push_back(g.front());
  Instance& out = map.merged;
  out.W = inst.W.select_columns(reps);
  out.objective = inst.objective;
  for (const auto& g : map.groups) {
    out.c.push_back(inst.c[g.front()]);
    Bound lo = inst.lower[g.front()];
    Bound hi = inst.upper[g.front()];
    for (std::size_t k = 1; k < g.size(); ++k) {
      lo = detail::add_bounds(lo, inst.lower[g[k]]);
      hi = detail::add_bounds(hi, inst.upper[g[k]]);
    }
    out.lower.push_back(lo);
    out.upper.push_back(hi);
  }
  return map;
}

/// m (2 m delta + 1)^m, the l1 proximity radius between an LP vertex and an integer optimum.
inline Int proximity_bound(std::int64_t m, std::int64_t delta) {
  Int base = Int(2) * Int(static_cast<long>(m)) * Int(static_cast<long>(delta)) + 1;
  Int p;
  mpz_pow_ui(p.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(m));
  return Int(static_cast<long>(m)) * p;
}

}  // namespace lowdim

#endif  // LOWDIM_MODEL_HPP
