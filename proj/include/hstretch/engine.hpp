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

// Harmonic-Stretch placement: class-dedicated bin groups, spot placement for
// regular items and super-replica cohorts for small items.
//
// Regular (i,j) groups hold j primary bins of i spots each and f sets of i
// standby bins of j spots each. The t-th item of a group goes to spot
// floor(t/j) of primary bin t mod j and to spot (t mod j) of standby bin
// floor(t/j) in every set, so a primary bin and a standby bin share at most
// one item.
//
// Small items are merged into super-replicas (SRs). A group of small bins is
// f mirroring standby bins plus one committed primary bin; each new SR
// cohort goes to the mirroring bins while they keep 2 eta/(7 eta - 1) of
// space, and to a primary bin that shares no SR with them.

#pragma once

#include <optional>
#include <vector>

#include "hstretch/model.hpp"

namespace hstretch::engine {

struct Placement {
  ItemId item = 0;
  ReplicaId replica = 0;
  Role role = Role::Primary;
  int rank = 0;
  BinId bin = 0;
  int spot = -1;
  GroupId group = 0;
  std::optional<UnitId> super_replica;
};

struct ArrivalReport {
  ItemId item = 0;
  ClassPair cls;
  std::vector<Placement> placements;
};

/// Classifies a new item and places its f+1 replicas. Throws InputError for
/// sizes outside (0,1].
ArrivalReport on_arrive(PackingState& state, const Rational& size);

std::vector<Placement> place_regular(PackingState& state, ItemId item);
std::vector<Placement> place_small(PackingState& state, ItemId item);

/// Returns the active group of `cls`, selecting the lowest-id incomplete
/// available group or opening a fresh one when the current choice is
/// unavailable or complete.
GroupId ensure_active_group(PackingState& state, const ClassPair& cls);

/// Recomputes the state of the group owning `bin` (including a small group
/// whose committed bin it is) after the bin's failed flag changed.
void on_bin_availability_change(PackingState& state, BinId bin);

/// Group a bin currently belongs to for availability purposes.
std::optional<GroupId> owning_group(const PackingState& state, BinId bin);

}  // namespace hstretch::engine
