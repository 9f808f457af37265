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

#ifndef LOWDIM_FIXED_TARGET_DP_HPP
#define LOWDIM_FIXED_TARGET_DP_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "lowdim/model.hpp"
#include "lowdim/numeric.hpp"

namespace lowdim {

inline std::int64_t l1_norm(std::span<const std::int64_t> v) {
  std::int64_t s = 0;
  for (auto e : v) s += e < 0 ? -e : e;
  return s;
}

/// Order of points inside one l1 shell: smaller |last coordinate| first, negative
/// before positive, then the remaining prefix in the same order.
inline bool shell_before(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  for (std::size_t k = a.size(); k-- > 0;) {
    std::int64_t aa = a[k] < 0 ? -a[k] : a[k];
    std::int64_t bb = b[k] < 0 ? -b[k] : b[k];
    if (aa != bb) return aa < bb;
    if (a[k] != b[k]) return a[k] < b[k];
  }
  return false;
}

/// Graded order on offsets from the ball center: by l1 norm, then shell_before.
inline bool ball_before(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  std::int64_t na = l1_norm(a);
  std::int64_t nb = l1_norm(b);
  if (na != nb) return na < nb;
  return shell_before(a, b);
}

namespace detail {
// Points of the l1 sphere of the given radius in dims [0, dims), in shell order.
inline void visit_sphere(IntVec& offset, std::size_t dims, std::int64_t radius,
                         const std::function<void(const IntVec&)>& fn) {
  if (dims == 0) {
    if (radius == 0) fn(offset);
    return;
  }
  const std::size_t last = dims - 1;
  if (dims == 1) {
    if (radius == 0) {
      offset[0] = 0;
      fn(offset);
    } else {
      offset[0] = -radius;
      fn(offset);
      offset[0] = radius;
      fn(offset);
    }
    offset[0] = 0;
    return;
  }
  for (std::int64_t j = 0; j <= radius; ++j) {
    for (std::int64_t v : j == 0 ? std::vector<std::int64_t>{0} : std::vector<std::int64_t>{-j, j}) {
      offset[last] = v;
      visit_sphere(offset, last, radius - j, fn);
    }
  }
  offset[last] = 0;
}
}  // namespace detail

/// Visits every lattice point b with ||b - center||_1 <= radius exactly once, graded by
/// distance from the center (see ball_before).
inline void for_each_ball_point(std::span<const std::int64_t> center, std::int64_t radius,
                                const std::function<void(const IntVec&)>& fn) {
  IntVec offset(center.size(), 0);
  IntVec point(center.size());
  for (std::int64_t k = 0; k <= radius; ++k) {
    detail::visit_sphere(offset, center.size(), k, [&](const IntVec& off) {
      for (std::size_t i = 0; i < off.size(); ++i) point[i] = center[i] + off[i];
      fn(point);
    });
  }
}

inline std::vector<IntVec> enumerate_target_ball(std::span<const std::int64_t> center, std::int64_t radius) {
  std::vector<IntVec> out;
  for_each_ball_point(center, radius, [&](const IntVec& p) { out.push_back(p); });
  return out;
}

// ---------------------------------------------------------------------------

/// Minimum-cost table over residual targets W_T (x_T - z_T) for all x_T in the box with
/// ||x_T - z_T||_1 <= budget. Built once per center; queried per target.
class DpTable {
 public:
  struct Key {
    IntVec residual;
    std::int64_t used = 0;
    friend bool operator<(const Key& a, const Key& b) {
      if (a.residual != b.residual) return a.residual < b.residual;
      return a.used < b.used;
    }
  };
  struct Entry {
    Rat cost;  // c_T^T (x_T - z_T) over the processed prefix
    std::int64_t deviation = 0;
    const std::pair<const Key, Entry>* pred = nullptr;
    std::size_t rank = 0;  // lexicographic rank of the deviation prefix within its stage
    std::size_t pred_rank = 0;
  };
  using Stage = std::map<Key, Entry>;

  DpTable(const IntMat& w_t, const RatVec& c_t, std::span<const Bound> lower, std::span<const Bound> upper,
          IntVec center, const Int& budget)
      : w_(w_t), c_(c_t), center_(std::move(center)) {
    const std::size_t t = w_.cols();
    if (c_.size() != t || lower.size() != t || upper.size() != t || center_.size() != t) {
      throw std::invalid_argument("build_dp: shape mismatch");
    }
    // The budget cannot bind beyond the total box width; then it is dropped from the state.
    Int width = 0;
    bool finite = true;
    for (std::size_t j = 0; j < t; ++j) {
      if (!lower[j] || !upper[j]) {
        finite = false;
        break;
      }
      width += Int(static_cast<long>(*upper[j] - *lower[j]));
    }
    Int effective = budget;
    if (finite && width < effective) effective = width;
    tracked_ = !(finite && width <= budget);
    if (!effective.fits_slong_p()) throw Error("build_dp: proximity budget does not fit in 64 bits");
    budget_ = effective.get_si();
    for (std::size_t j = 0; j < t; ++j) {
      if ((lower[j] && center_[j] < *lower[j]) || (upper[j] && center_[j] > *upper[j])) {
        throw std::invalid_argument("build_dp: center outside bounds");
      }
    }

    stages_.resize(t + 1);
    stages_[0].emplace(Key{IntVec(w_.rows(), 0), 0}, Entry{Rat(0), 0, nullptr, 0, 0});
    for (std::size_t j = 0; j < t; ++j) {
      const Stage& from = stages_[j];
      Stage& to = stages_[j + 1];
      for (const auto& node : from) {
        const auto& [key, entry] = node;
        std::int64_t room = budget_ - key.used;
        std::int64_t lo = -room;
        std::int64_t hi = room;
        if (lower[j]) lo = std::max(lo, *lower[j] - center_[j]);
        if (upper[j]) hi = std::min(hi, *upper[j] - center_[j]);
        for (std::int64_t d = lo; d <= hi; ++d) {
          Key next{key.residual, tracked_ ? key.used + (d < 0 ? -d : d) : 0};
          for (std::size_t r = 0; r < w_.rows(); ++r) next.residual[r] += w_(r, j) * d;
          Rat cost = entry.cost;
          if (d != 0) cost += c_[j] * make_rat(d);
          auto [it, inserted] = to.try_emplace(std::move(next));
          Entry& slot = it->second;
          bool take = inserted || cost < slot.cost ||
                      (cost == slot.cost && std::pair(entry.rank, d) < std::pair(slot.pred_rank, slot.deviation));
          if (take) {
            slot.cost = std::move(cost);
            slot.deviation = d;
            slot.pred = &node;
            slot.pred_rank = entry.rank;
          }
        }
      }
      assign_ranks(to);
      states_ += to.size();
    }
    for (const auto& node : stages_.back()) {
      auto [it, inserted] = finals_.try_emplace(node.first.residual, &node);
      if (!inserted && better_final(node, *it->second)) it->second = &node;
    }
  }

  DpTable(const DpTable&) = delete;
  DpTable& operator=(const DpTable&) = delete;
  DpTable(DpTable&&) = default;
  DpTable& operator=(DpTable&&) = default;

  struct Recovered {
    IntVec x;
    Rat cost;  // c_T^T x_T
  };

  /// Minimizer for W_T x_T = target, or std::nullopt when unreachable.
  std::optional<Recovered> query(std::span<const std::int64_t> target) const {
    IntVec residual(target.begin(), target.end());
    IntVec base = w_.apply(center_);
    for (std::size_t r = 0; r < residual.size(); ++r) residual[r] -= base[r];
    auto it = finals_.find(residual);
    if (it == finals_.end()) return std::nullopt;
    return reconstruct(*it->second);
  }

  /// Offsets W_T (x_T - z_T) that some feasible x_T attains.
  std::vector<IntVec> reachable_residuals() const {
    std::vector<IntVec> out;
    out.reserve(finals_.size());
    for (const auto& [residual, node] : finals_) out.push_back(residual);
    return out;
  }

  std::optional<Recovered> query_residual(const IntVec& residual) const {
    auto it = finals_.find(residual);
    if (it == finals_.end()) return std::nullopt;
    return reconstruct(*it->second);
  }

  const IntVec& center() const { return center_; }
  std::int64_t budget() const { return budget_; }
  bool budget_tracked() const { return tracked_; }
  std::int64_t ball_radius() const { return w_.delta() * budget_; }
  std::uint64_t state_count() const { return states_; }
  const std::vector<Stage>& stages() const { return stages_; }

 private:
  static void assign_ranks(Stage& stage) {
    std::vector<Entry*> order;
    order.reserve(stage.size());
    for (auto& [key, entry] : stage) order.push_back(&entry);
    std::sort(order.begin(), order.end(), [](const Entry* a, const Entry* b) {
      return std::pair(a->pred_rank, a->deviation) < std::pair(b->pred_rank, b->deviation);
    });
    for (std::size_t i = 0; i < order.size(); ++i) order[i]->rank = i;
  }

  static bool better_final(const std::pair<const Key, Entry>& a, const std::pair<const Key, Entry>& b) {
    if (a.second.cost != b.second.cost) return a.second.cost < b.second.cost;
    return a.second.rank < b.second.rank;
  }

  Recovered reconstruct(const std::pair<const Key, Entry>& last) const {
    IntVec x = center_;
    const std::pair<const Key, Entry>* node = &last;
    for (std::size_t j = x.size(); j-- > 0;) {
      x[j] += node->second.deviation;
      node = node->second.pred;
    }
    return {x, linear_cost(c_, x)};
  }

  IntMat w_;
  RatVec c_;
  IntVec center_;
  std::int64_t budget_ = 0;
  bool tracked_ = true;
  std::vector<Stage> stages_;
  std::map<IntVec, const std::pair<const Key, Entry>*> finals_;
  std::uint64_t states_ = 1;
};

inline DpTable build_dp(const IntMat& w_t, const RatVec& c_t, std::span<const Bound> lower,
                        std::span<const Bound> upper, IntVec center, const Int& budget) {
  return DpTable(w_t, c_t, lower, upper, std::move(center), budget);
}

inline std::optional<DpTable::Recovered> query_dp(const DpTable& table, std::span<const std::int64_t> target) {
  return table.query(target);
}

}  // namespace lowdim

#endif  // LOWDIM_FIXED_TARGET_DP_HPP
