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

#ifndef LOWDIM_GUESS_SEARCH_HPP
#define LOWDIM_GUESS_SEARCH_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <optional>
#include <thread>
#include <vector>

#include "lowdim/fixed_target_dp.hpp"
#include "lowdim/model.hpp"
#include "lowdim/oracle.hpp"

namespace lowdim {

/// Raised when an engine is handed an instance outside its domain.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

struct SolveOptions {
  /// Largest target-ball radius explored; std::nullopt explores the full proximity radius.
  std::optional<std::int64_t> radius_cap;
  /// Graded (nearest-first) target order. Off visits reachable targets in key order.
  bool deepening = true;
  unsigned jobs = 1;
};

struct SolveStats {
  std::uint64_t guesses_explored = 0;
  std::uint64_t guesses_pruned = 0;
  std::uint64_t dp_tables = 0;
  std::uint64_t dp_states = 0;
  std::uint64_t oracle_calls = 0;
  std::uint64_t targets = 0;
  std::int64_t radius_used = 0;     // largest target distance examined
  std::int64_t best_radius = -1;    // target distance at which the returned solution was found
  Int full_radius = 0;              // m * delta * proximity_bound(m, delta)
  bool capped = false;              // some reachable target was skipped by the cap

  void absorb(const SolveStats& o) {
    guesses_explored += o.guesses_explored;
    guesses_pruned += o.guesses_pruned;
    dp_tables += o.dp_tables;
    dp_states += o.dp_states;
    oracle_calls += o.oracle_calls;
    targets += o.targets;
    radius_used = std::max(radius_used, o.radius_used);
    capped = capped || o.capped;
  }
};

struct EngineResult {
  Solution solution;
  SolveStats stats;
};

/// One guess: variables in `tight` are recovered by the DP around `center`, the rest
/// (`free`, at most m of them) by the subproblem oracle.
struct GuessWork {
  std::vector<std::size_t> tight;
  std::vector<std::size_t> free;
  IntVec center;  // values of the tight variables, aligned with `tight`
};

struct GuessOutcome {
  IntVec x;
  ExtRat value = ExtRat::infinity();
  std::int64_t radius = -1;
  SolveStats stats;
};

inline Int full_target_radius(const Instance& inst) {
  return Int(static_cast<long>(inst.m())) * Int(static_cast<long>(inst.delta())) *
         proximity_bound(static_cast<std::int64_t>(inst.m()), inst.delta());
}

/// Runs the DP for one guess and combines every reachable target in the ball with the
/// oracle's answer on the free variables.
inline GuessOutcome run_guess(const Instance& inst, const GuessWork& work, const Int& budget, const Int& full_radius,
                              const SolveOptions& opts) {
  GuessOutcome out;
  std::vector<Bound> lo;
  std::vector<Bound> hi;
  RatVec c_t;
  for (std::size_t j : work.tight) {
    lo.push_back(inst.lower[j]);
    hi.push_back(inst.upper[j]);
    c_t.push_back(inst.c[j]);
  }
  IntMat w_t = inst.W.select_columns(work.tight);
  DpTable table(w_t, c_t, lo, hi, work.center, budget);
  SubproblemOracle oracle(inst, work.free);
  out.stats.guesses_explored = 1;
  out.stats.dp_tables = 1;
  out.stats.dp_states = table.state_count();

  const IntVec base = w_t.apply(work.center);
  std::int64_t limit = full_radius.fits_slong_p() ? full_radius.get_si() : std::numeric_limits<std::int64_t>::max();
  if (opts.radius_cap && *opts.radius_cap < limit) limit = *opts.radius_cap;

  std::vector<IntVec> offsets;
  for (auto& r : table.reachable_residuals()) {
    if (l1_norm(r) <= limit) {
      offsets.push_back(std::move(r));
    } else {
      out.stats.capped = true;
    }
  }
  if (opts.deepening) {
    std::sort(offsets.begin(), offsets.end(), [](const IntVec& a, const IntVec& b) { return ball_before(a, b); });
  }

  IntVec x(inst.n(), 0);
  IntVec target(inst.m());
  for (const IntVec& offset : offsets) {
    const std::int64_t dist = l1_norm(offset);
    out.stats.radius_used = std::max(out.stats.radius_used, dist);
    ++out.stats.targets;
    auto rec = table.query_residual(offset);
    for (std::size_t r = 0; r < target.size(); ++r) target[r] = base[r] + offset[r];
    auto sub = oracle.solve(target);
    if (!sub) continue;
    for (std::size_t k = 0; k < work.tight.size(); ++k) x[work.tight[k]] = rec->x[k];
    for (std::size_t k = 0; k < work.free.size(); ++k) x[work.free[k]] = sub->x[k];
    ExtRat value(Rat(rec->cost + sub->value));
    if (better(value, x, out.value, out.x)) {
      out.value = value;
      out.x = x;
      out.radius = dist;
    }
  }
  out.stats.oracle_calls = oracle.calls();
  return out;
}

/// Runs all guesses on up to opts.jobs threads and reduces in guess order, so the
/// result does not depend on the thread count.
inline EngineResult search_guesses(const Instance& inst, const std::vector<GuessWork>& guesses, const Int& budget,
                                   const SolveOptions& opts) {
  const Int full_radius = full_target_radius(inst);
  std::vector<GuessOutcome> outcomes(guesses.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(std::max(1u, opts.jobs));
  auto worker = [&](unsigned id) {
    try {
      for (std::size_t i = next++; i < guesses.size(); i = next++) {
        outcomes[i] = run_guess(inst, guesses[i], budget, full_radius, opts);
      }
    } catch (...) {
      errors[id] = std::current_exception();
      next = guesses.size();
    }
  };
  if (opts.jobs <= 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned id = 0; id < opts.jobs; ++id) pool.emplace_back(worker, id);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  EngineResult result;
  result.stats.full_radius = full_radius;
  Solution& best = result.solution;
  for (const auto& o : outcomes) {
    result.stats.absorb(o.stats);
    if (better(o.value, o.x, best.value, best.x)) {
      best.value = o.value;
      best.x = o.x;
      result.stats.best_radius = o.radius;
    }
  }
  if (best.value.is_infinite()) {
    best.status = Status::infeasible;
    best.x.clear();
  } else {
    best.status = result.stats.capped ? Status::heuristic : Status::optimal;
  }
  return result;
}

/// Index subsets of {0..n-1} with size 0..max_size, by size then lexicographically.
inline std::vector<std::vector<std::size_t>> subsets_up_to(std::size_t n, std::size_t max_size) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t k = 0; k <= std::min(n, max_size); ++k) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      out.push_back(idx);
      std::size_t pos = k;
      while (pos > 0 && idx[pos - 1] == n - k + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t i = pos; i < k; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
  return out;
}

inline std::vector<std::size_t> complement(std::size_t n, const std::vector<std::size_t>& set) {
  std::vector<std::size_t> out;
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (k < set.size() && set[k] == i) {
      ++k;
    } else {
      out.push_back(i);
    }
  }
  return out;
}

}  // namespace lowdim

#endif  // LOWDIM_GUESS_SEARCH_HPP
