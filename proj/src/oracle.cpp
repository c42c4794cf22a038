// Copyright 2026 The hstretch Authors
//
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

#include "hstretch/oracle.hpp"

#include <algorithm>
#include <numeric>

#include "hstretch/checker.hpp"
#include "hstretch/errors.hpp"

namespace hstretch::oracle {
namespace {

struct Slot {
  ItemId item;
  Role role;
  Rational size;
};

class Search {
 public:
  Search(std::vector<std::pair<ItemId, Rational>> order, const Config& cfg, int bins)
      : order_(std::move(order)), cfg_(cfg), limit_(bins),
        load_(static_cast<std::size_t>(bins)), biggest_standby_(static_cast<std::size_t>(bins)),
        contents_(static_cast<std::size_t>(bins)) {}

  bool run() { return place_item(0); }
  std::int64_t nodes() const { return nodes_; }

  StaticPacking packing() const {
    StaticPacking p;
    p.config = cfg_;
    for (int b = 0; b < used_; ++b) {
      StaticBin sb;
      sb.id = b;
      for (const Slot& s : contents_[static_cast<std::size_t>(b)]) sb.contents.push_back({s.item, s.role, s.size, false});
      p.bins.push_back(std::move(sb));
    }
    return p;
  }

 private:
  bool fits(int b, const Rational& size, bool standby) const {
    const auto ub = static_cast<std::size_t>(b);
    const Rational load = load_[ub] + size;
    const Rational big = standby ? std::max(biggest_standby_[ub], size) : biggest_standby_[ub];
    // A standby must be promotable in place: the failure set made of its
    // primary and its f-1 siblings leaves it as the only candidate.
    return load + (cfg_.eta - Rational(1)) * big <= Rational(1);
  }

  void put(int b, const Slot& s) {
    const auto ub = static_cast<std::size_t>(b);
    load_[ub] += s.size;
    contents_[ub].push_back(s);
    if (s.role == Role::Standby) {
      saved_big_.push_back(biggest_standby_[ub]);
      biggest_standby_[ub] = std::max(biggest_standby_[ub], s.size);
    }
  }

  void take(int b) {
    const auto ub = static_cast<std::size_t>(b);
    const Slot s = contents_[ub].back();
    contents_[ub].pop_back();
    load_[ub] -= s.size;
    if (s.role == Role::Standby) {
      biggest_standby_[ub] = saved_big_.back();
      saved_big_.pop_back();
    }
  }

  bool place_item(std::size_t k) {
    ++nodes_;
    if (k > 0 && !checker::check_static_validity(packing()).valid) return false;
    if (k == order_.size()) return true;
    const auto& [item, x] = order_[k];
    const int open_limit = std::min(used_ + 1, limit_);
    for (int pb = 0; pb < open_limit; ++pb) {
      if (!fits(pb, x, false)) continue;
      const int before = used_;
      used_ = std::max(used_, pb + 1);
      put(pb, {item, Role::Primary, x});
      std::vector<int> chosen;
      if (place_standbys(k, pb, 0, chosen)) return true;
      take(pb);
      used_ = before;
    }
    return false;
  }

  // Standbys of one item are interchangeable, so they go to increasing bin
  // indices.
  bool place_standbys(std::size_t k, int primary, int start, std::vector<int>& chosen) {
    const auto& [item, x] = order_[k];
    if (static_cast<int>(chosen.size()) == cfg_.f) return place_item(k + 1);
    const Rational s = x / cfg_.eta;
    const int open_limit = std::min(used_ + 1, limit_);
    const int remaining = cfg_.f - static_cast<int>(chosen.size());
    for (int b = start; b < open_limit; ++b) {
      if (b == primary || !fits(b, s, true)) continue;
      // Not enough distinct bins left for the remaining standbys.
      if (limit_ - b < remaining) break;
      const int before = used_;
      used_ = std::max(used_, b + 1);
      put(b, {item, Role::Standby, s});
      chosen.push_back(b);
      if (place_standbys(k, primary, b + 1, chosen)) return true;
      chosen.pop_back();
      take(b);
      used_ = before;
    }
    return false;
  }

  std::vector<std::pair<ItemId, Rational>> order_;
  Config cfg_;
  int limit_;
  int used_ = 0;
  std::vector<Rational> load_;
  std::vector<Rational> biggest_standby_;
  std::vector<Rational> saved_big_;
  std::vector<std::vector<Slot>> contents_;
  std::int64_t nodes_ = 0;
};

void check_sizes(const std::vector<Rational>& sizes) {
  for (const Rational& x : sizes) {
    if (x <= Rational(0) || x > Rational(1)) throw InputError("size " + x.str() + " outside (0,1]");
  }
}

}  // namespace

int lower_bound(const std::vector<Rational>& sizes, const Config& cfg) {
  if (sizes.empty()) return 0;
  Rational volume;
  for (const Rational& x : sizes) volume += x + Rational(cfg.f) * x / cfg.eta;
  std::int64_t bins = volume.floor();
  if (Rational(bins) < volume) ++bins;
  return std::max<int>(cfg.f + 1, static_cast<int>(bins));
}

OptResult optimal_packing(const std::vector<Rational>& sizes, const Config& cfg, int max_items) {
  if (static_cast<int>(sizes.size()) > max_items) {
    throw LimitExceeded("oracle limited to " + std::to_string(max_items) + " items, got " +
                        std::to_string(sizes.size()));
  }
  check_sizes(sizes);
  OptResult result;
  result.packing.config = cfg;
  if (sizes.empty()) return result;

  std::vector<std::pair<ItemId, Rational>> order;
  for (std::size_t i = 0; i < sizes.size(); ++i) order.emplace_back(static_cast<ItemId>(i), sizes[i]);
  std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.second > b.second; });

  const int upper = (cfg.f + 1) * static_cast<int>(sizes.size());
  for (int b = lower_bound(sizes, cfg); b <= upper; ++b) {
    Search search(order, cfg, b);
    const bool found = search.run();
    result.nodes += search.nodes();
    if (found) {
      result.bins = b;
      result.packing = search.packing();
      result.bins = static_cast<int>(result.packing.bins.size());
      return result;
    }
  }
  // The dedicated packing is always valid, so the loop returns before this.
  throw InvariantViolation("oracle found no packing within the dedicated bound");
}

StaticPacking dedicated_baseline(const std::vector<Rational>& sizes, const Config& cfg) {
  check_sizes(sizes);
  StaticPacking p;
  p.config = cfg;
  BinId next = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const auto item = static_cast<ItemId>(i);
    p.bins.push_back({next++, "dedicated", false, {{item, Role::Primary, sizes[i], false}}});
    for (int k = 0; k < cfg.f; ++k) {
      p.bins.push_back({next++, "dedicated", false, {{item, Role::Standby, sizes[i] / cfg.eta, false}}});
    }
  }
  return p;
}

}  // namespace hstretch::oracle
