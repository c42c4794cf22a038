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

#include "hstretch/checker.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "hstretch/classifier.hpp"
#include "hstretch/errors.hpp"

namespace hstretch::checker {
namespace {

struct ItemView {
  ItemId id = 0;
  Rational increment;  // x - x/eta
  int primary = -1;    // bin index
  std::vector<int> standbys;
};

class PromotionSearch {
 public:
  PromotionSearch(const std::vector<ItemView>& items, std::vector<Rational> slack)
      : items_(items), slack_(std::move(slack)) {}

  bool feasible(const std::vector<char>& down, std::vector<int> affected) {
    down_ = &down;
    std::sort(affected.begin(), affected.end(), [&](int a, int b) {
      const auto& ia = items_[static_cast<std::size_t>(a)];
      const auto& ib = items_[static_cast<std::size_t>(b)];
      if (ia.increment != ib.increment) return ia.increment > ib.increment;
      return ia.id < ib.id;
    });
    order_ = std::move(affected);
    work_ = slack_;
    return assign(0);
  }

 private:
  bool assign(std::size_t k) {
    if (k == order_.size()) return true;
    const ItemView& it = items_[static_cast<std::size_t>(order_[k])];
    for (int b : it.standbys) {
      if ((*down_)[static_cast<std::size_t>(b)]) continue;
      Rational& s = work_[static_cast<std::size_t>(b)];
      if (s < it.increment) continue;
      s -= it.increment;
      bool ok = assign(k + 1);
      s += it.increment;
      if (ok) return true;
    }
    return false;
  }

  const std::vector<ItemView>& items_;
  std::vector<Rational> slack_;
  std::vector<Rational> work_;
  std::vector<int> order_;
  const std::vector<char>* down_ = nullptr;
};

// Calls visit(indices) for every k-subset of [0, n) in lexicographic order;
// stops early when visit returns true.
template <typename Visit>
bool for_each_subset(int n, int k, Visit&& visit) {
  if (k > n) return false;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    if (visit(idx)) return true;
    int pos = k - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - k + pos) --pos;
    if (pos < 0) return false;
    ++idx[static_cast<std::size_t>(pos)];
    for (int i = pos + 1; i < k; ++i) idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
  }
}

}  // namespace

StaticVerdict check_static_validity(const StaticPacking& packing, std::optional<int> max_failures) {
  const Config& cfg = packing.config;
  StaticVerdict verdict;

  std::vector<const StaticBin*> bins;
  for (const auto& b : packing.bins) {
    if (b.failed) throw InputError("static validity needs a snapshot without failed bins (bin " + std::to_string(b.id) + ")");
    bins.push_back(&b);
  }
  std::sort(bins.begin(), bins.end(), [](const StaticBin* a, const StaticBin* b) { return a->id < b->id; });
  for (std::size_t i = 1; i < bins.size(); ++i) {
    if (bins[i]->id == bins[i - 1]->id) throw InputError("duplicate bin id " + std::to_string(bins[i]->id));
  }

  std::map<ItemId, ItemView> views;
  std::map<ItemId, std::vector<Rational>> standby_sizes;
  std::map<ItemId, std::vector<int>> all_bins;
  std::vector<Rational> slack;
  for (std::size_t bi = 0; bi < bins.size(); ++bi) {
    Rational load;
    for (const auto& r : bins[bi]->contents) {
      if (r.promoted) {
        verdict.structural.push_back("bin " + std::to_string(bins[bi]->id) + " holds a promoted replica of item " +
                                     std::to_string(r.item));
      }
      load += r.size;
      ItemView& v = views[r.item];
      v.id = r.item;
      all_bins[r.item].push_back(static_cast<int>(bi));
      if (r.role == Role::Primary) {
        if (v.primary >= 0) verdict.structural.push_back("item " + std::to_string(r.item) + " has two primaries");
        v.primary = static_cast<int>(bi);
        v.increment = r.size - r.size / cfg.eta;
      } else {
        v.standbys.push_back(static_cast<int>(bi));
        standby_sizes[r.item].push_back(r.size);
      }
    }
    if (load > Rational(1)) {
      verdict.structural.push_back("bin " + std::to_string(bins[bi]->id) + " overloaded: " + load.str());
    }
    slack.push_back(Rational(1) - load);
  }

  for (auto& [id, v] : views) {
    const std::string tag = "item " + std::to_string(id);
    if (v.primary < 0) {
      verdict.structural.push_back(tag + " has no primary replica");
      continue;
    }
    const Rational x = v.increment / (Rational(1) - Rational(1) / cfg.eta);
    if (x <= Rational(0) || x > Rational(1)) verdict.structural.push_back(tag + " primary size outside (0,1]");
    if (static_cast<int>(v.standbys.size()) != cfg.f) {
      verdict.structural.push_back(tag + " has " + std::to_string(v.standbys.size()) + " standbys, expected " +
                                   std::to_string(cfg.f));
    }
    for (const Rational& s : standby_sizes[id]) {
      if (s != x / cfg.eta) verdict.structural.push_back(tag + " standby size " + s.str() + " != x/eta");
    }
    auto placed = all_bins[id];
    std::sort(placed.begin(), placed.end());
    if (std::adjacent_find(placed.begin(), placed.end()) != placed.end()) {
      verdict.structural.push_back(tag + " has two replicas in one bin");
    }
  }
  if (!verdict.structural.empty()) {
    verdict.valid = false;
    return verdict;
  }

  std::vector<ItemView> items;
  std::vector<std::vector<int>> primaries_in(bins.size());
  for (auto& [id, v] : views) {
    primaries_in[static_cast<std::size_t>(v.primary)].push_back(static_cast<int>(items.size()));
    items.push_back(v);
  }

  PromotionSearch search(items, slack);
  const int n = static_cast<int>(bins.size());
  std::vector<char> down(bins.size(), 0);
  const int budget = max_failures ? std::min(*max_failures, cfg.f) : cfg.f;
  for (int k = 1; k <= budget; ++k) {
    bool found = for_each_subset(n, k, [&](const std::vector<int>& subset) {
      std::vector<int> affected;
      for (int b : subset) {
        const auto& p = primaries_in[static_cast<std::size_t>(b)];
        affected.insert(affected.end(), p.begin(), p.end());
      }
      if (affected.empty()) return false;
      for (int b : subset) down[static_cast<std::size_t>(b)] = 1;
      bool ok = search.feasible(down, std::move(affected));
      for (int b : subset) down[static_cast<std::size_t>(b)] = 0;
      if (ok) return false;
      std::vector<BinId> witness;
      for (int b : subset) witness.push_back(bins[static_cast<std::size_t>(b)]->id);
      verdict.witness = std::move(witness);
      return true;
    });
    if (found) {
      verdict.valid = false;
      return verdict;
    }
  }
  return verdict;
}

std::vector<std::string> check_runtime_invariants(const PackingState& state) {
  std::vector<std::string> out;
  const Config& cfg = state.config;
  auto fail = [&](const std::string& what) { out.push_back(what); };
  auto bin_tag = [](BinId b) { return "bin " + std::to_string(b); };

  // Failed set and per-bin loads.
  if (static_cast<int>(state.failed_bins.size()) > cfg.f) {
    fail("more than f bins failed: " + std::to_string(state.failed_bins.size()));
  }
  for (const Bin& b : state.bins) {
    if (b.failed != (state.failed_bins.count(b.id) != 0)) fail("failed_bins out of sync at " + bin_tag(b.id));
    Rational nominal;
    Rational effective;
    for (ReplicaId rid : b.contents) {
      const Replica& r = state.replicas[static_cast<std::size_t>(rid)];
      if (r.bin != b.id) fail("replica " + std::to_string(rid) + " listed in " + bin_tag(b.id) + " but hosted elsewhere");
      nominal += r.nominal;
      effective += effective_size(r, cfg);
      if (r.promoted && (b.failed || r.role != Role::Standby)) {
        fail("replica " + std::to_string(rid) + " promoted in failed bin or as a primary");
      }
      if (is_primary_kind(b.kind) != (r.role == Role::Primary)) {
        fail("replica " + std::to_string(rid) + " role does not match kind of " + bin_tag(b.id));
      }
    }
    if (nominal != b.nominal_load) fail("cached load mismatch at " + bin_tag(b.id));
    if (effective > Rational(1)) fail("load > 1 at " + bin_tag(b.id) + ": " + effective.str());
  }

  // Items: f+1 distinct bins, exactly one effective primary.
  for (const Item& it : state.items) {
    const std::string tag = "item " + std::to_string(it.id);
    if (static_cast<int>(it.replicas.size()) != cfg.f + 1) {
      fail(tag + " has " + std::to_string(it.replicas.size()) + " replicas");
      continue;
    }
    std::set<BinId> hosts;
    int effective_primaries = 0;
    for (std::size_t k = 0; k < it.replicas.size(); ++k) {
      const Replica& r = state.replicas[static_cast<std::size_t>(it.replicas[k])];
      hosts.insert(r.bin);
      if (r.rank != static_cast<int>(k)) fail(tag + " replica ranks out of order");
      if (r.nominal != (k == 0 ? it.size : it.size / cfg.eta)) fail(tag + " replica size mismatch");
      const bool live = !state.bin(r.bin).failed;
      if (live && ((r.role == Role::Primary) || r.promoted)) ++effective_primaries;
    }
    if (static_cast<int>(hosts.size()) != cfg.f + 1) fail(tag + " replicas share a bin");
    if (effective_primaries != 1) {
      fail(tag + " has " + std::to_string(effective_primaries) + " effective primaries");
    }
  }

  // Promotion mapping h.
  std::set<BinId> range;
  for (const auto& [unit, host] : state.mapping_h) {
    const std::string tag = "mapping_h[" + std::to_string(unit) + "]";
    if (!range.insert(host).second) fail("mapping_h not injective: " + bin_tag(host) + " used twice");
    if (!state.has_bin(host)) {
      fail(tag + " points to unknown bin");
      continue;
    }
    const Bin& hb = state.bin(host);
    if (hb.failed) fail(tag + " points to failed " + bin_tag(host));
    if (!hb.marked) fail(tag + " points to unmarked " + bin_tag(host));
    if (is_primary_kind(hb.kind)) fail(tag + " points to primary " + bin_tag(host));
    const Unit& u = state.units[static_cast<std::size_t>(unit)];
    if (std::find(u.standby_bins.begin(), u.standby_bins.end(), host) == u.standby_bins.end()) {
      fail(tag + " host holds no standby of the unit");
    }
    if (!state.bin(u.primary_bin).failed) fail(tag + " maps a unit whose primary bin is live");
  }
  for (const auto& [bin, unit] : state.displaced) {
    const std::string tag = "displaced[" + std::to_string(bin) + "]";
    if (!state.has_bin(bin) || !state.bin(bin).failed) {
      fail(tag + " names a live or unknown bin");
      continue;
    }
    if (state.mapping_h.count(unit) == 0) fail(tag + " names a unit without promotion");
    const Unit& u = state.units[static_cast<std::size_t>(unit)];
    if (std::find(u.standby_bins.begin(), u.standby_bins.end(), bin) == u.standby_bins.end()) {
      fail(tag + " holds no standby of unit " + std::to_string(unit));
    }
  }
  for (const Bin& b : state.bins) {
    if (b.marked && range.count(b.id) == 0) fail(bin_tag(b.id) + " marked but not in range of mapping_h");
  }
  for (const Unit& u : state.units) {
    const bool down = state.bin(u.primary_bin).failed;
    auto it = state.mapping_h.find(u.id);
    if (down && it == state.mapping_h.end()) fail("unit " + std::to_string(u.id) + " lost its primary without promotion");
    for (BinId sb : u.standby_bins) {
      const bool expect = it != state.mapping_h.end() && it->second == sb;
      for (ReplicaId rid : state.bin(sb).contents) {
        const Replica& r = state.replicas[static_cast<std::size_t>(rid)];
        if (r.unit == u.id && r.promoted != expect) {
          fail("promotion flag of replica " + std::to_string(rid) + " disagrees with mapping_h");
        }
      }
    }
  }

  // Groups: state consistency and the incomplete-group bound.
  std::map<ClassPair, int> incomplete;
  std::map<ClassPair, int> active;
  for (const Group& g : state.groups) {
    const std::string tag = "group " + std::to_string(g.id);
    bool any_failed = false;
    for (BinId b : g.member_bins()) any_failed = any_failed || state.bin(b).failed;
    if (!g.complete()) {
      ++incomplete[g.cls];
      if (any_failed != (g.state == GroupState::IncompleteUnavailable)) fail(tag + " availability state is stale");
    }
    if (g.state == GroupState::Active) {
      ++active[g.cls];
      auto it = state.active_group.find(g.cls);
      if (it == state.active_group.end() || it->second != g.id) fail(tag + " active but not selected for its class");
    }
    if (!g.small && g.complete()) {
      for (BinId b : g.primary_bins) {
        if (static_cast<int>(state.bin(b).contents.size()) != g.cls.i) fail(tag + " complete with a partial primary bin");
      }
      for (const auto& set : g.standby_sets) {
        for (BinId b : set) {
          if (static_cast<int>(state.bin(b).contents.size()) != g.cls.j) fail(tag + " complete with a partial standby bin");
        }
      }
    }
  }
  for (const auto& [cls, count] : incomplete) {
    if (count > cfg.f + 1) fail("class " + to_string(cls) + " has " + std::to_string(count) + " incomplete groups (> f+1)");
  }
  for (const auto& [cls, count] : active) {
    if (count > 1) fail("class " + to_string(cls) + " has " + std::to_string(count) + " active groups");
  }

  // Relatedness structure: related standby bins mirror each other, and a
  // primary bin shares at most one unit with any standby bin.
  std::map<BinId, std::vector<UnitId>> standby_units;
  for (const Bin& b : state.bins) {
    if (is_primary_kind(b.kind)) continue;
    std::set<UnitId> units;
    for (ReplicaId rid : b.contents) units.insert(state.replicas[static_cast<std::size_t>(rid)].unit);
    standby_units[b.id] = {units.begin(), units.end()};
  }
  for (const Unit& u : state.units) {
    for (std::size_t k = 1; k < u.standby_bins.size(); ++k) {
      if (standby_units[u.standby_bins[k]] != standby_units[u.standby_bins[0]]) {
        fail("standby bins " + std::to_string(u.standby_bins[0]) + " and " + std::to_string(u.standby_bins[k]) +
             " are related but do not mirror");
      }
    }
  }
  for (const Bin& b : state.bins) {
    if (!is_primary_kind(b.kind)) continue;
    std::set<UnitId> units;
    for (ReplicaId rid : b.contents) units.insert(state.replicas[static_cast<std::size_t>(rid)].unit);
    std::map<BinId, int> shared;
    for (UnitId u : units) {
      for (BinId sb : state.units[static_cast<std::size_t>(u)].standby_bins) {
        if (++shared[sb] > 1) fail(bin_tag(b.id) + " shares more than one unit with " + bin_tag(sb));
      }
    }
  }

  // Promotion headroom on standby bins, and super-replica capacities.
  const ClassConstants k = ClassConstants::of(cfg);
  for (const Bin& b : state.bins) {
    if (is_primary_kind(b.kind) || b.marked || b.failed) continue;
    std::map<UnitId, Rational> per_unit;
    for (ReplicaId rid : b.contents) {
      const Replica& r = state.replicas[static_cast<std::size_t>(rid)];
      per_unit[r.unit] += r.nominal;
    }
    Rational largest;
    for (const auto& [u, s] : per_unit) largest = std::max(largest, s);
    if (b.nominal_load + (cfg.eta - Rational(1)) * largest > Rational(1)) {
      fail(bin_tag(b.id) + " lacks promotion headroom");
    }
  }
  for (const Unit& u : state.units) {
    Rational members;
    for (ItemId m : u.members) members += state.items[static_cast<std::size_t>(m)].size;
    if (members != u.primary_content) fail("unit " + std::to_string(u.id) + " content out of sync");
    if (!u.super_replica) continue;
    if (u.primary_content > k.sr_primary_capacity) fail("super-replica " + std::to_string(u.id) + " over capacity");
    if (!u.open && u.primary_content <= k.small_primary_bound) {
      fail("closed super-replica " + std::to_string(u.id) + " below 1/(7-1/eta)");
    }
  }
  return out;
}

}  // namespace hstretch::checker
