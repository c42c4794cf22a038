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

#include "hstretch/adjuster.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "hstretch/engine.hpp"
#include "hstretch/errors.hpp"

namespace hstretch::adjuster {
namespace {

void set_promoted(PackingState& state, UnitId unit, BinId host, bool promoted) {
  for (ReplicaId rid : state.bin(host).contents) {
    Replica& r = state.replicas[static_cast<std::size_t>(rid)];
    if (r.unit == unit) r.promoted = promoted;
  }
}

// Units whose primary replica (or primary SR) lives in `bin`, ascending.
std::vector<UnitId> primary_units_in(const PackingState& state, BinId bin) {
  std::set<UnitId> units;
  for (ReplicaId rid : state.bin(bin).contents) {
    const Replica& r = state.replicas[static_cast<std::size_t>(rid)];
    if (r.role == Role::Primary) units.insert(r.unit);
  }
  return {units.begin(), units.end()};
}

std::vector<ItemId> members_of(const PackingState& state, UnitId unit) {
  return state.units[static_cast<std::size_t>(unit)].members;
}

}  // namespace

std::vector<RoleChange> on_fail(PackingState& state, BinId bin_id) {
  if (!state.has_bin(bin_id)) throw TraceError("fail of unknown bin " + std::to_string(bin_id));
  Bin& bin = state.bin(bin_id);
  if (bin.failed) throw TraceError("fail of already failed bin " + std::to_string(bin_id));
  if (static_cast<int>(state.failed_bins.size()) >= state.config.f) {
    throw TraceError("more than f=" + std::to_string(state.config.f) + " concurrent failures");
  }
  bin.failed = true;
  state.failed_bins.insert(bin_id);

  // Critical work: the promotion this bin hosted, plus its own primaries.
  std::vector<UnitId> critical;
  if (bin.marked) {
    auto it = std::find_if(state.mapping_h.begin(), state.mapping_h.end(),
                           [&](const auto& entry) { return entry.second == bin_id; });
    if (it == state.mapping_h.end()) throw InvariantViolation("marked bin " + std::to_string(bin_id) + " not in range of h");
    UnitId unit = it->first;
    set_promoted(state, unit, bin_id, false);
    state.mapping_h.erase(it);
    state.bin(bin_id).marked = false;
    state.displaced[bin_id] = unit;
    critical.push_back(unit);
  }
  if (is_primary_kind(state.bin(bin_id).kind)) {
    for (UnitId u : primary_units_in(state, bin_id)) critical.push_back(u);
  }
  std::sort(critical.begin(), critical.end());
  critical.erase(std::unique(critical.begin(), critical.end()), critical.end());

  std::vector<RoleChange> changes;
  for (UnitId unit : critical) {
    const Unit& u = state.units[static_cast<std::size_t>(unit)];
    std::optional<BinId> host;
    for (BinId candidate : u.standby_bins) {
      const Bin& c = state.bin(candidate);
      if (c.failed || c.marked) continue;
      if (!host || candidate < *host) host = candidate;
    }
    if (!host) {
      throw InvariantViolation("no unmarked live standby host for unit " + std::to_string(unit) + " after failure of bin " +
                               std::to_string(bin_id));
    }
    state.mapping_h[unit] = *host;
    state.bin(*host).marked = true;
    set_promoted(state, unit, *host, true);
    changes.push_back({unit, members_of(state, unit), bin_id, *host, Direction::Promote});
  }

  engine::on_bin_availability_change(state, bin_id);
  return changes;
}

std::vector<RoleChange> on_recover(PackingState& state, BinId bin_id) {
  if (!state.has_bin(bin_id)) throw TraceError("recover of unknown bin " + std::to_string(bin_id));
  Bin& bin = state.bin(bin_id);
  if (!bin.failed) throw TraceError("recover of live bin " + std::to_string(bin_id));
  if (bin.marked) throw InvariantViolation("failed bin " + std::to_string(bin_id) + " is marked");
  bin.failed = false;
  state.failed_bins.erase(bin_id);

  std::vector<RoleChange> changes;
  if (is_primary_kind(bin.kind)) {
    for (UnitId unit : primary_units_in(state, bin_id)) {
      auto it = state.mapping_h.find(unit);
      if (it == state.mapping_h.end()) continue;
      BinId host = it->second;
      set_promoted(state, unit, host, false);
      state.bin(host).marked = false;
      state.mapping_h.erase(it);
      std::erase_if(state.displaced, [&](const auto& entry) { return entry.second == unit; });
      changes.push_back({unit, members_of(state, unit), host, bin_id, Direction::Demote});
    }
  } else if (auto d = state.displaced.find(bin_id); d != state.displaced.end()) {
    const UnitId unit = d->second;
    state.displaced.erase(d);
    if (auto it = state.mapping_h.find(unit); it != state.mapping_h.end()) {
      const BinId from = it->second;
      set_promoted(state, unit, from, false);
      state.bin(from).marked = false;
      it->second = bin_id;
      state.bin(bin_id).marked = true;
      set_promoted(state, unit, bin_id, true);
      changes.push_back({unit, members_of(state, unit), from, bin_id, Direction::Transfer});
    }
  }

  engine::on_bin_availability_change(state, bin_id);
  return changes;
}

}  // namespace hstretch::adjuster
