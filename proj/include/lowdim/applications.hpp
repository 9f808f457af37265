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

#ifndef LOWDIM_APPLICATIONS_HPP
#define LOWDIM_APPLICATIONS_HPP

#include <utility>
#include <variant>
#include <vector>

#include "lowdim/model.hpp"
#include "lowdim/unknown_w.hpp"

namespace lowdim {

using Penalty = std::variant<QuadraticPenalty, ConvexPwl>;

/// max sum p_i x_i - g(sum w_i x_i), 0 <= x_i <= u_i, stored as the minimization of
/// its negation: W = [w], c = -p.
inline Instance build_knapsack(const RatVec& profit, const IntVec& weight, const std::vector<Bound>& upper,
                               Penalty penalty) {
  Instance inst;
  inst.W = IntMat({weight});
  for (const Rat& p : profit) inst.c.push_back(-p);
  inst.lower.assign(weight.size(), Bound{0});
  inst.upper = upper;
  inst.objective = KnapsackPenalty{std::move(penalty)};
  require_valid(inst);
  return inst;
}

/// Knapsack profit of a solution of a build_knapsack instance.
inline ExtRat knapsack_profit(const Solution& s) {
  if (s.value.is_infinite()) return ExtRat::infinity();
  return ExtRat(Rat(-s.value.value()));
}

/// min c^T x subject to A x = b and the box, as an indicator objective.
inline Instance build_equality_ilp(const IntMat& a, const IntVec& b, const RatVec& c, const std::vector<Bound>& lower,
                                   const std::vector<Bound>& upper) {
  Instance inst{a, c, lower, upper, EqualityIndicator{b}};
  require_valid(inst);
  return inst;
}

struct CompressedSensing {
  GradientOracle oracle;
  Instance hidden;  // min ||W x - b||^2 over {0,1}^n, for brute-force comparison
};

inline CompressedSensing build_compressed_sensing(const IntMat& w_hidden, const RatVec& b) {
  Instance inst;
  inst.W = w_hidden;
  inst.c.assign(w_hidden.cols(), Rat(0));
  inst.lower.assign(w_hidden.cols(), Bound{0});
  inst.upper.assign(w_hidden.cols(), Bound{1});
  inst.objective = QuadraticDistance{b};
  require_valid(inst);
  return {make_gradient_oracle(inst), inst};
}

}  // namespace lowdim

#endif  // LOWDIM_APPLICATIONS_HPP
