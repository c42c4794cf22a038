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

#include "hstretch/engine.hpp"

#include <set>
#include <string>

#include "hstretch/classifier.hpp"
#include "hstretch/errors.hpp"

namespace hstretch::engine {
namespace {

BinId open_bin(PackingState& state, BinKind kind, const ClassPair& cls, int set_index, int position,
               std::optional<GroupId> group) {
  Bin b;
  b.id = static_cast<BinId>(state.bins.size());
  b.kind = kind;
  b.cls = cls;
  b.set_index = set_index;
  b.position = position;
  b.group = group;
  state.bins.push_back(std::move(b));
  return state.bins.back().id;
}

GroupId open_group(PackingState& state, const ClassPair& cls) {
  const int f = state.config.f;
  Group g;
  g.id = static_cast<GroupId>(state.groups.size());
  g.cls = cls;
  g.small = is_small(cls, state.config);
  g.state = GroupState::Active;
  if (g.small) {
    for (int k = 1; k <= f; ++k) {
      g.standby_sets.push_back({open_bin(state, BinKind::SmallStandby, cls, k, 0, g.id)});
    }
  } else {
    for (int w = 0; w < cls.j; ++w) {
      g.primary_bins.push_back(open_bin(state, BinKind::RegularPrimary, cls, 0, w, g.id));
    }
    for (int k = 1; k <= f; ++k) {
      std::vector<BinId> set;
      for (int z = 0; z < cls.i; ++z) set.push_back(open_bin(state, BinKind::RegularStandby, cls, k, z, g.id));
      g.standby_sets.push_back(std::move(set));
    }
  }
  state.groups.push_back(std::move(g));
  return state.groups.back().id;
}

Placement add_replica(PackingState& state, ItemId item_id, UnitId unit, int rank, BinId bin_id, int spot,
                      GroupId group) {
  Item& item = state.items[static_cast<std::size_t>(item_id)];
  Bin& bin = state.bin(bin_id);
  if (bin.failed) throw InvariantViolation("placing into failed bin " + std::to_string(bin_id));
  if (spot >= 0) {
    for (ReplicaId rid : bin.contents) {
      if (state.replicas[static_cast<std::size_t>(rid)].spot == spot) {
        throw InvariantViolation("spot " + std::to_string(spot) + " of bin " + std::to_string(bin_id) +
                                 " already occupied");
      }
    }
  }
  Replica r;
  r.id = static_cast<ReplicaId>(state.replicas.size());
  r.item = item_id;
  r.unit = unit;
  r.role = rank == 0 ? Role::Primary : Role::Standby;
  r.rank = rank;
  r.nominal = rank == 0 ? item.size : item.size / state.config.eta;
  r.bin = bin_id;
  r.spot = spot;
  bin.contents.push_back(r.id);
  bin.nominal_load += r.nominal;
  item.replicas.push_back(r.id);
  state.replicas.push_back(r);

  Placement p;
  p.item = item_id;
  p.replica = r.id;
  p.role = r.role;
  p.rank = rank;
  p.bin = bin_id;
  p.spot = spot;
  p.group = group;
  if (state.units[static_cast<std::size_t>(unit)].super_replica) p.super_replica = unit;
  return p;
}

void mark_complete(PackingState& state, GroupId gid) {
  Group& g = state.groups[static_cast<std::size_t>(gid)];
  g.state = GroupState::Complete;
  g.committed_bin.reset();
  if (auto it = state.active_group.find(g.cls); it != state.active_group.end() && it->second == gid) {
    state.active_group.erase(it);
  }
}

void refresh_group_state(PackingState& state, GroupId gid) {
  Group& g = state.groups[static_cast<std::size_t>(gid)];
  if (g.complete()) return;
  bool available = true;
  for (BinId b : g.member_bins()) {
    if (state.bin(b).failed) {
      available = false;
      break;
    }
  }
  if (!available) {
    g.state = GroupState::IncompleteUnavailable;
    return;
  }
  auto it = state.active_group.find(g.cls);
  g.state = (it != state.active_group.end() && it->second == gid) ? GroupState::Active
                                                                   : GroupState::IncompleteAvailable;
}

bool mirrors_have_room(const PackingState& state, const Group& g, const ClassConstants& k) {
  for (const auto& set : g.standby_sets) {
    for (BinId b : set) {
      if (Rational(1) - state.bin(b).nominal_load < k.small_open_threshold) return false;
    }
  }
  return true;
}

// Lowest-id free small primary bin with room for a full primary SR that holds
// no SR mirrored in `g`'s standby bins.
std::optional<BinId> pick_free_primary(const PackingState& state, const Group& g, const ClassConstants& k) {
  std::set<UnitId> related;
  for (const auto& set : g.standby_sets) {
    for (BinId b : set) {
      for (ReplicaId rid : state.bin(b).contents) related.insert(state.replicas[static_cast<std::size_t>(rid)].unit);
    }
  }
  std::set<BinId> committed;
  for (const Group& other : state.groups) {
    if (other.small && other.committed_bin) committed.insert(*other.committed_bin);
  }
  for (const Bin& b : state.bins) {
    if (b.kind != BinKind::SmallPrimary || b.failed || committed.count(b.id) != 0) continue;
    if (Rational(1) - b.nominal_load < k.sr_primary_capacity) continue;
    bool shares = false;
    for (ReplicaId rid : b.contents) {
      if (related.count(state.replicas[static_cast<std::size_t>(rid)].unit) != 0) {
        shares = true;
        break;
      }
    }
    if (!shares) return b.id;
  }
  return std::nullopt;
}

}  // namespace

std::optional<GroupId> owning_group(const PackingState& state, BinId bin) {
  const Bin& b = state.bin(bin);
  if (b.group) return b.group;
  for (const Group& g : state.groups) {
    if (g.committed_bin == bin) return g.id;
  }
  return std::nullopt;
}

GroupId ensure_active_group(PackingState& state, const ClassPair& cls) {
  if (auto it = state.active_group.find(cls); it != state.active_group.end()) {
    if (state.groups[static_cast<std::size_t>(it->second)].state == GroupState::Active) return it->second;
  }
  for (Group& g : state.groups) {
    if (g.cls == cls && g.state == GroupState::IncompleteAvailable) {
      g.state = GroupState::Active;
      state.active_group[cls] = g.id;
      return g.id;
    }
  }
  GroupId gid = open_group(state, cls);
  state.active_group[cls] = gid;
  return gid;
}

void on_bin_availability_change(PackingState& state, BinId bin) {
  if (auto gid = owning_group(state, bin)) refresh_group_state(state, *gid);
}

std::vector<Placement> place_regular(PackingState& state, ItemId item_id) {
  const ClassPair cls = state.items[static_cast<std::size_t>(item_id)].cls;
  if (is_small(cls, state.config)) throw InvariantViolation("place_regular called for a small item");
  const GroupId gid = ensure_active_group(state, cls);

  const Group& g = state.groups[static_cast<std::size_t>(gid)];
  const int t = g.items_placed;
  const int w = t % cls.j;
  const int z = t / cls.j;

  Unit u;
  u.id = static_cast<UnitId>(state.units.size());
  u.super_replica = false;
  u.group = gid;
  u.members = {item_id};
  u.primary_bin = g.primary_bins[static_cast<std::size_t>(w)];
  for (const auto& set : g.standby_sets) u.standby_bins.push_back(set[static_cast<std::size_t>(z)]);
  u.primary_content = state.items[static_cast<std::size_t>(item_id)].size;
  state.units.push_back(u);
  state.items[static_cast<std::size_t>(item_id)].unit = u.id;

  std::vector<Placement> out;
  out.push_back(add_replica(state, item_id, u.id, 0, u.primary_bin, z, gid));
  for (int k = 1; k <= state.config.f; ++k) {
    out.push_back(add_replica(state, item_id, u.id, k, u.standby_bins[static_cast<std::size_t>(k - 1)], w, gid));
  }

  Group& gm = state.groups[static_cast<std::size_t>(gid)];
  gm.items_placed += 1;
  if (gm.items_placed == cls.i * cls.j) mark_complete(state, gid);
  return out;
}

std::vector<Placement> place_small(PackingState& state, ItemId item_id) {
  const ClassPair cls = state.items[static_cast<std::size_t>(item_id)].cls;
  if (!is_small(cls, state.config)) throw InvariantViolation("place_small called for a regular item");
  const ClassConstants k = ClassConstants::of(state.config);
  const Rational size = state.items[static_cast<std::size_t>(item_id)].size;
  const Rational standby = size / state.config.eta;

  GroupId gid = 0;
  UnitId uid = 0;
  while (true) {
    gid = ensure_active_group(state, cls);
    Group& g = state.groups[static_cast<std::size_t>(gid)];
    if (g.open_unit) {
      Unit& open = state.units[static_cast<std::size_t>(*g.open_unit)];
      if (open.primary_content + size <= k.sr_primary_capacity &&
          open.primary_content / state.config.eta + standby <= k.sr_standby_capacity) {
        uid = open.id;
        break;
      }
      open.open = false;
      g.open_unit.reset();
    }
    if (!mirrors_have_room(state, g, k)) {
      mark_complete(state, gid);
      continue;
    }

    // New cohort: standby SRs on the mirroring bins, primary SR on a freshly
    // committed primary bin.
    g.committed_bin.reset();
    std::optional<BinId> target = pick_free_primary(state, g, k);
    if (!target) target = open_bin(state, BinKind::SmallPrimary, cls, 0, 0, std::nullopt);

    Group& g2 = state.groups[static_cast<std::size_t>(gid)];
    g2.committed_bin = *target;
    g2.cohorts_placed += 1;

    Unit u;
    u.id = static_cast<UnitId>(state.units.size());
    u.super_replica = true;
    u.group = gid;
    u.primary_bin = *target;
    for (const auto& set : g2.standby_sets) u.standby_bins.push_back(set.front());
    u.open = true;
    state.units.push_back(u);
    g2.open_unit = u.id;
    uid = u.id;
    break;
  }

  Unit& u = state.units[static_cast<std::size_t>(uid)];
  u.members.push_back(item_id);
  u.primary_content += size;
  state.items[static_cast<std::size_t>(item_id)].unit = uid;
  const BinId primary_bin = u.primary_bin;
  const std::vector<BinId> standby_bins = u.standby_bins;

  std::vector<Placement> out;
  out.push_back(add_replica(state, item_id, uid, 0, primary_bin, -1, gid));
  for (int r = 1; r <= state.config.f; ++r) {
    out.push_back(add_replica(state, item_id, uid, r, standby_bins[static_cast<std::size_t>(r - 1)], -1, gid));
  }
  state.groups[static_cast<std::size_t>(gid)].items_placed += 1;
  return out;
}

ArrivalReport on_arrive(PackingState& state, const Rational& size) {
  const ClassPair cls = classify(size, state.config);
  Item item;
  item.id = static_cast<ItemId>(state.items.size());
  item.size = size;
  item.cls = cls;
  state.items.push_back(item);

  ArrivalReport report;
  report.item = item.id;
  report.cls = cls;
  report.placements = is_small(cls, state.config) ? place_small(state, item.id) : place_regular(state, item.id);
  return report;
}

}  // namespace hstretch::engine
