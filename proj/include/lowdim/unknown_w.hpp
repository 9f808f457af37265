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

#ifndef LOWDIM_UNKNOWN_W_HPP
#define LOWDIM_UNKNOWN_W_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "lowdim/guess_search.hpp"
#include "lowdim/model.hpp"
#include "lowdim/numeric.hpp"

namespace lowdim {

/// Function and gradient access to f(x) = g(W x) with W hidden.
struct GradientOracle {
  std::size_t n = 0;
  std::size_t m = 0;  // declared row count of the hidden W
  std::int64_t delta = 0;
  bool convex = true;
  std::function<Rat(std::span<const std::int64_t>)> value;
  std::function<RatVec(std::span<const std::int64_t>)> gradient;
};

/// Raised when the oracle breaks its declared contract.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// Linearly independent gradient rows collected so far (the proxy for W).
class GradientBasis {
 public:
  explicit GradientBasis(std::size_t n) : rows_(0, n) {}

  std::size_t rank() const { return rows_.rows(); }
  std::size_t cols() const { return rows_.cols(); }
  const RatMat& rows() const { return rows_; }

  /// True if `row` is independent of the current rows, in which case it is appended.
  bool independent(const RatVec& row) const {
    RatMat trial = rows_;
    trial.append_row(row);
    return lowdim::rank(trial) == trial.rows();
  }
  bool try_insert(const RatVec& row) {
    if (!independent(row)) return false;
    rows_.append_row(row);
    return true;
  }

  RatVec image(std::span<const std::int64_t> x) const {
    RatVec v(rows_.rows());
    for (std::size_t r = 0; r < rows_.rows(); ++r) {
      for (std::size_t c = 0; c < rows_.cols(); ++c) {
        if (x[c] != 0) v[r] += rows_(r, c) * make_rat(x[c]);
      }
    }
    return v;
  }

 private:
  RatMat rows_;
};

/// B_N: every value W' x over binary x with ||x - anchor||_1 <= N, each mapped to a
/// preimage of minimal distance (ties: lexicographically smallest x).
struct BnMap {
  struct Representative {
    IntVec x;
    std::int64_t distance = 0;
  };
  IntVec anchor;
  std::int64_t budget = 0;
  std::map<RatVec, Representative> entries;
};

namespace detail {
inline bool rep_better(const BnMap::Representative& a, const BnMap::Representative& b) {
  if (a.distance != b.distance) return a.distance < b.distance;
  return a.x < b.x;
}
}  // namespace detail

/// Builds B_N by induction over the variables: layer[k] holds the values reachable with
/// at most k flips among the processed variables; variable j extends layer[k] by
/// layer[k-1] shifted by +column j (anchor bit 0) or -column j (anchor bit 1).
inline BnMap enumerate_bn(const GradientBasis& basis, std::span<const std::int64_t> anchor, std::int64_t budget) {
  const std::size_t n = anchor.size();
  BnMap out;
  out.anchor.assign(anchor.begin(), anchor.end());
  out.budget = budget;
  using Layer = std::map<RatVec, BnMap::Representative>;
  std::vector<Layer> layer(static_cast<std::size_t>(budget) + 1);
  const RatVec start = basis.image(anchor);
  for (auto& l : layer) l.emplace(start, BnMap::Representative{out.anchor, 0});

  for (std::size_t j = 0; j < n; ++j) {
    RatVec column(basis.rank());
    for (std::size_t r = 0; r < basis.rank(); ++r) column[r] = basis.rows()(r, j);
    const bool flip_down = anchor[j] == 1;
    for (std::size_t k = layer.size() - 1; k >= 1; --k) {
      for (const auto& [value, rep] : layer[k - 1]) {
        RatVec shifted = value;
        for (std::size_t r = 0; r < shifted.size(); ++r) {
          if (flip_down) {
            shifted[r] -= column[r];
          } else {
            shifted[r] += column[r];
          }
        }
        BnMap::Representative cand{rep.x, rep.distance + 1};
        cand.x[j] = 1 - cand.x[j];
        auto [it, inserted] = layer[k].try_emplace(std::move(shifted), cand);
        if (!inserted && detail::rep_better(cand, it->second)) it->second = std::move(cand);
      }
    }
  }
  out.entries = std::move(layer.back());
  return out;
}

struct UnknownWResult {
  Solution solution;
  std::size_t insertions = 0;
  std::size_t passes = 0;
  std::uint64_t evaluations = 0;
  std::size_t final_bn_size = 0;
};

/// Optimizes f over {0,1}^n from a relaxation optimum z (at most m fractional entries),
/// growing the gradient basis until a full pass over B_N adds no new row.
inline UnknownWResult solve_unknown_w(const GradientOracle& oracle, const RatVec& z, std::int64_t budget) {
  if (z.size() != oracle.n) throw std::invalid_argument("solve_unknown_w: z has wrong length");
  if (budget < 0) throw std::invalid_argument("solve_unknown_w: negative budget");
  IntVec anchor(oracle.n);
  bool integral = true;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (z[i] < 0 || z[i] > 1) throw std::invalid_argument("solve_unknown_w: z outside [0,1]");
    anchor[i] = z[i] == 1 ? 1 : 0;
    integral = integral && z[i].get_den() == 1;
  }

  UnknownWResult out;
  GradientBasis basis(oracle.n);
  auto insert = [&](const RatVec& grad) {
    if (!basis.independent(grad)) return false;
    if (basis.rank() >= oracle.m) throw ContractViolation("gradient raises the basis rank beyond the declared m");
    basis.try_insert(grad);
    ++out.insertions;
    return true;
  };
  insert(oracle.gradient(anchor));

  Solution& best = out.solution;
  while (true) {
    ++out.passes;
    BnMap bn = enumerate_bn(basis, anchor, budget);
    out.final_bn_size = bn.entries.size();
    bool grew = false;
    for (const auto& [value, rep] : bn.entries) {
      ExtRat fx(oracle.value(rep.x));
      ++out.evaluations;
      if (better(fx, rep.x, best.value, best.x)) {
        best.value = fx;
        best.x = rep.x;
      }
      if (insert(oracle.gradient(rep.x))) {
        grew = true;
        break;
      }
    }
    if (!grew) break;
  }
  const bool guaranteed = oracle.convex && (integral || budget >= static_cast<std::int64_t>(oracle.n));
  best.status = guaranteed ? Status::optimal : Status::heuristic;
  return out;
}

/// f(x) = g(W x) and its gradient W^T grad g(W x) for a known instance with c = 0.
/// Piecewise-linear pieces use the left slope at breakpoints.
inline GradientOracle make_gradient_oracle(const Instance& hidden) {
  for (const Rat& ci : hidden.c) {
    if (ci != 0) throw PreconditionError("gradient oracle adapter requires c = 0");
  }
  for (std::size_t j = 0; j < hidden.n(); ++j) {
    if (hidden.lower[j] != Bound{0} || hidden.upper[j] != Bound{1}) {
      throw PreconditionError("gradient oracle adapter requires the box [0,1]^n");
    }
  }
  const bool differentiable = std::holds_alternative<QuadraticDistance>(hidden.objective) ||
                              std::holds_alternative<SeparableConvexPwl>(hidden.objective) ||
                              std::holds_alternative<KnapsackPenalty>(hidden.objective);
  if (!differentiable) throw PreconditionError("gradient oracle adapter needs a built-in convex objective");
  GradientOracle o;
  o.n = hidden.n();
  o.m = hidden.m();
  o.delta = hidden.delta();
  auto inst = std::make_shared<const Instance>(hidden);
  o.value = [inst](std::span<const std::int64_t> x) {
    return objective_value(inst->objective, inst->W.apply(x)).value();
  };
  o.gradient = [inst](std::span<const std::int64_t> x) {
    IntVec v = inst->W.apply(x);
    RatVec outer(v.size());
    std::visit(Overloaded{
                   [&](const QuadraticDistance& q) {
                     for (std::size_t r = 0; r < v.size(); ++r) outer[r] = 2 * (make_rat(v[r]) - q.b[r]);
                   },
                   [&](const SeparableConvexPwl& p) {
                     for (std::size_t r = 0; r < v.size(); ++r) outer[r] = p.pieces[r].left_slope(v[r]);
                   },
                   [&](const KnapsackPenalty& k) {
                     if (auto* q = std::get_if<QuadraticPenalty>(&k.penalty)) {
                       outer[0] = 2 * q->a * make_rat(v[0]) + q->b;
                     } else {
                       outer[0] = std::get<ConvexPwl>(k.penalty).left_slope(v[0]);
                     }
                   },
                   [](const auto&) {},
               },
               inst->objective);
    RatVec grad(inst->n());
    for (std::size_t j = 0; j < inst->n(); ++j) {
      for (std::size_t r = 0; r < v.size(); ++r) {
        if (inst->W(r, j) != 0) grad[j] += make_rat(inst->W(r, j)) * outer[r];
      }
    }
    return grad;
  };
  return o;
}

}  // namespace lowdim

#endif  // LOWDIM_UNKNOWN_W_HPP
