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

#ifndef LOWDIM_VERIFY_HPP
#define LOWDIM_VERIFY_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "lowdim/model.hpp"

namespace lowdim {

class VolumeLimitExceeded : public Error {
 public:
  using Error::Error;
};

inline constexpr std::uint64_t kDefaultBruteForceVolume = 1'000'000;

/// Exhaustive scan of the box in lexicographic order. Infinite bounds are replaced by
/// -cap / +cap only when a cap is given.
inline Solution brute_force_solve(const Instance& inst, std::optional<std::int64_t> cap_infinite = std::nullopt,
                                  std::uint64_t volume_limit = kDefaultBruteForceVolume) {
  require_valid(inst);
  const std::size_t n = inst.n();
  IntVec lo(n);
  IntVec hi(n);
  std::uint64_t volume = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if ((!inst.lower[i] || !inst.upper[i]) && !cap_infinite) {
      throw Error("brute force: infinite bound at index " + std::to_string(i) + " and no cap given");
    }
    lo[i] = inst.lower[i] ? *inst.lower[i] : -*cap_infinite;
    hi[i] = inst.upper[i] ? *inst.upper[i] : *cap_infinite;
    if (lo[i] > hi[i]) return Solution{};
    std::uint64_t width = static_cast<std::uint64_t>(hi[i] - lo[i]) + 1;
    if (volume > volume_limit / width) {
      throw VolumeLimitExceeded("brute force: box volume exceeds " + std::to_string(volume_limit));
    }
    volume *= width;
  }
  Solution best;
  IntVec x = lo;
  while (true) {
    ExtRat v = evaluate(inst, x);
    if (better(v, x, best.value, best.x)) {
      best.value = v;
      best.x = x;
    }
    std::size_t pos = n;
    bool done = true;
    while (pos > 0) {
      --pos;
      if (x[pos] < hi[pos]) {
        ++x[pos];
        done = false;
        break;
      }
      x[pos] = lo[pos];
    }
    if (done) break;
  }
  best.status = best.value.is_infinite() ? Status::infeasible : Status::optimal;
  if (best.value.is_infinite()) best.x.clear();
  return best;
}

// ---------------------------------------------------------------------------
// Seeded generators. Draws come from std::mt19937_64 (its output sequence is fixed by
// the standard) through rejection sampling, so instances are identical on every platform.

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(engine_());
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t r;
    do {
      r = engine_();
    } while (r >= limit);
    return lo + static_cast<std::int64_t>(r % span);
  }
  bool coin() { return uniform(0, 1) == 1; }
  Rat rational(std::int64_t lo, std::int64_t hi, std::int64_t max_den) {
    std::int64_t den = uniform(1, max_den);
    return make_rat(uniform(lo * den, hi * den), den);
  }

 private:
  std::mt19937_64 engine_;
};

enum class Family { equality_indicator, quadratic_distance, separable_convex_pwl, knapsack_penalty, mixed };

inline const char* to_string(Family f) {
  switch (f) {
    case Family::equality_indicator:
      return "equality_indicator";
    case Family::quadratic_distance:
      return "quadratic_distance";
    case Family::separable_convex_pwl:
      return "separable_convex_pwl";
    case Family::knapsack_penalty:
      return "knapsack_penalty";
    case Family::mixed:
      return "mixed";
  }
  return "?";
}

inline Family parse_family(const std::string& s) {
  for (Family f : {Family::equality_indicator, Family::quadratic_distance, Family::separable_convex_pwl,
                   Family::knapsack_penalty, Family::mixed}) {
    if (s == to_string(f)) return f;
  }
  throw std::invalid_argument("unknown objective family '" + s + "'");
}

struct Profile {
  std::size_t n = 4;
  std::size_t m = 1;
  std::int64_t delta = 2;
  std::int64_t box_lo = -2;  // bounds drawn inside [box_lo, box_hi]
  std::int64_t box_hi = 3;
  bool nonneg = false;       // lower = 0, upper drawn in [0, box_hi]
  Family family = Family::mixed;
};

namespace detail {

inline ConvexPwl random_pwl(Rng& rng, std::int64_t center) {
  ConvexPwl p;
  std::int64_t k = rng.uniform(0, 3);
  std::vector<std::int64_t> pts;
  while (static_cast<std::int64_t>(pts.size()) < k) {
    std::int64_t t = center + rng.uniform(-4, 4);
    if (std::find(pts.begin(), pts.end(), t) == pts.end()) pts.push_back(t);
  }
  std::sort(pts.begin(), pts.end());
  p.breakpoints = pts;
  for (std::int64_t j = 0; j <= k; ++j) p.slopes.push_back(rng.rational(-3, 3, 2));
  std::sort(p.slopes.begin(), p.slopes.end());
  p.offset = rng.rational(-2, 2, 2);
  return p;
}

}  // namespace detail

/// Reproducible random instance. Indicator targets are reachable with probability 1/2
/// (image of a random box point) and provably unreachable otherwise.
inline Instance random_instance(std::uint64_t seed, const Profile& profile) {
  Rng rng(seed);
  const std::size_t n = profile.n;
  const std::size_t m = profile.m;
  Instance inst;
  std::vector<std::vector<std::int64_t>> rows(m, std::vector<std::int64_t>(n));
  for (auto& row : rows) {
    for (auto& e : row) e = rng.uniform(-profile.delta, profile.delta);
  }
  inst.W = IntMat(rows);
  for (std::size_t j = 0; j < n; ++j) {
    std::int64_t a = 0;
    std::int64_t b = 0;
    if (profile.nonneg) {
      b = rng.uniform(0, profile.box_hi);
    } else {
      a = rng.uniform(profile.box_lo, profile.box_hi);
      b = rng.uniform(profile.box_lo, profile.box_hi);
      if (a > b) std::swap(a, b);
    }
    inst.lower.push_back(a);
    inst.upper.push_back(b);
    inst.c.push_back(rng.rational(-3, 3, 2));
  }

  Family family = profile.family;
  if (family == Family::mixed) {
    const std::int64_t options = m == 1 ? 4 : 3;
    family = static_cast<Family>(rng.uniform(0, options - 1));
  }
  if (family == Family::knapsack_penalty && m != 1) family = Family::quadratic_distance;

  IntVec point(n);
  for (std::size_t j = 0; j < n; ++j) point[j] = rng.uniform(*inst.lower[j], *inst.upper[j]);
  const IntVec image = inst.W.apply(point);

  switch (family) {
    case Family::equality_indicator: {
      EqualityIndicator o{image};
      if (!rng.coin()) {
        std::int64_t reach = 0;
        for (std::size_t j = 0; j < n; ++j) {
          reach += std::abs(inst.W(0, j)) * std::max(std::abs(*inst.lower[j]), std::abs(*inst.upper[j]));
        }
        o.b[0] = (rng.coin() ? 1 : -1) * (reach + 1 + rng.uniform(0, 2));
      }
      inst.objective = o;
      break;
    }
    case Family::quadratic_distance: {
      QuadraticDistance o;
      for (std::size_t r = 0; r < m; ++r) o.b.push_back(make_rat(image[r]) + rng.rational(-2, 2, 3));
      inst.objective = o;
      break;
    }
    case Family::separable_convex_pwl: {
      SeparableConvexPwl o;
      for (std::size_t r = 0; r < m; ++r) o.pieces.push_back(detail::random_pwl(rng, image[r]));
      inst.objective = o;
      break;
    }
    case Family::knapsack_penalty:
    case Family::mixed: {
      KnapsackPenalty o;
      if (rng.coin()) {
        o.penalty = QuadraticPenalty{rng.rational(0, 2, 4), rng.rational(-2, 2, 2), Rat(0)};
      } else {
        o.penalty = detail::random_pwl(rng, image[0]);
      }
      inst.objective = o;
      break;
    }
  }
  return inst;
}

/// Hidden matrix with a planted relaxation optimum: z in [0,1]^n has at most m
/// fractional entries and b = W z, so z minimizes ||W x - b||^2 over the cube.
struct PlantedSensing {
  IntMat W;
  RatVec z;
  RatVec b;
};

inline PlantedSensing random_planted_sensing(std::uint64_t seed, std::size_t n, std::size_t m, std::int64_t delta) {
  Rng rng(seed);
  std::vector<std::vector<std::int64_t>> rows(m, std::vector<std::int64_t>(n));
  for (auto& row : rows) {
    for (auto& e : row) e = rng.uniform(-delta, delta);
  }
  PlantedSensing out;
  out.W = IntMat(rows);
  const std::size_t fractional = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(std::min(n, m))));
  for (std::size_t j = 0; j < n; ++j) {
    out.z.push_back(j < fractional ? make_rat(rng.uniform(1, 3), 4) : make_rat(rng.uniform(0, 1)));
  }
  // move the fractional entries to random positions
  for (std::size_t j = n; j-- > 1;) {
    std::size_t k = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(j)));
    std::swap(out.z[j], out.z[k]);
  }
  out.b.assign(m, Rat(0));
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t j = 0; j < n; ++j) out.b[r] += make_rat(out.W(r, j)) * out.z[j];
  }
  return out;
}

}  // namespace lowdim

#endif  // LOWDIM_VERIFY_HPP
