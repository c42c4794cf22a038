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

// World state of a replicated packing: bins, groups, items, replicas,
// promotion units and the promotion mapping. Every mutating module (engine,
// adjuster) works on a PackingState owned by exactly one caller.

#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hstretch/rational.hpp"

namespace hstretch {

using BinId = int;
using ItemId = int;
using GroupId = int;
using UnitId = int;
using ReplicaId = int;

/// Problem parameters: at most `f` bins down at once, standby replicas are
/// `eta` times smaller than their primary.
struct Config {
  int f = 1;
  Rational eta = Rational(2);

  /// Throws InputError unless f >= 1 and eta > 1.
  static Config make(int f, Rational eta);

  friend bool operator==(const Config&, const Config&) = default;
};

/// Primary class i in [1,7] and standby class j in [1, floor(6 eta) + 1].
struct ClassPair {
  int i = 0;
  int j = 0;

  friend auto operator<=>(const ClassPair&, const ClassPair&) = default;
};

std::string to_string(const ClassPair& c);

enum class Role { Primary, Standby };

struct Replica {
  ReplicaId id = 0;
  ItemId item = 0;
  UnitId unit = 0;
  Role role = Role::Primary;
  int rank = 0;        // 0 for the primary, 1..f for standbys
  Rational nominal;    // x for the primary, x/eta for a standby
  bool promoted = false;
  BinId bin = 0;
  int spot = -1;       // spot index inside a regular bin, -1 for super-replica members

  friend bool operator==(const Replica&, const Replica&) = default;
};

enum class BinKind { RegularPrimary, RegularStandby, SmallPrimary, SmallStandby };

std::string to_string(BinKind kind);
bool is_primary_kind(BinKind kind);

struct Bin {
  BinId id = 0;
  BinKind kind = BinKind::RegularPrimary;
  ClassPair cls;
  int set_index = 0;   // standby set k (regular) or mirror rank k (small); 0 for primary bins
  int position = 0;    // w for B_w, z for beta^k_z; 0 for small bins
  std::optional<GroupId> group;  // owning group; unset for small primary bins
  std::vector<ReplicaId> contents;
  Rational nominal_load;
  bool failed = false;
  bool marked = false;

  friend bool operator==(const Bin&, const Bin&) = default;
};

enum class GroupState { Active, IncompleteAvailable, IncompleteUnavailable, Complete };

std::string to_string(GroupState s);

struct Group {
  GroupId id = 0;
  ClassPair cls;
  bool small = false;
  GroupState state = GroupState::Active;
  std::vector<BinId> primary_bins;                // B_0..B_{j-1}; empty for small groups
  std::vector<std::vector<BinId>> standby_sets;   // f sets; i bins each (regular) or 1 mirror bin (small)
  std::optional<BinId> committed_bin;             // small groups only
  int items_placed = 0;
  int cohorts_placed = 0;                         // small groups: super-replica cohorts opened here
  std::optional<UnitId> open_unit;                // small groups: cohort currently accepting items

  bool complete() const { return state == GroupState::Complete; }
  /// Every bin whose failure makes this group unavailable.
  std::vector<BinId> member_bins() const;

  friend bool operator==(const Group&, const Group&) = default;
};

struct Item {
  ItemId id = 0;
  Rational size;
  ClassPair cls;
  UnitId unit = 0;
  std::vector<ReplicaId> replicas;  // [0] primary, [k] standby of rank k

  friend bool operator==(const Item&, const Item&) = default;
};

/// The thing that gets promoted as a whole: one regular item, or one
/// super-replica cohort (a primary SR plus f mirrored standby SRs holding the
/// same small items).
struct Unit {
  UnitId id = 0;
  bool super_replica = false;
  GroupId group = 0;
  std::vector<ItemId> members;
  BinId primary_bin = 0;
  std::vector<BinId> standby_bins;  // [k-1] hosts the rank-k standby (SR)
  Rational primary_content;         // sum of member primary sizes
  bool open = false;

  friend bool operator==(const Unit&, const Unit&) = default;
};

struct PackingState {
  Config config;
  std::vector<Bin> bins;
  std::vector<Group> groups;
  std::vector<Item> items;
  std::vector<Replica> replicas;
  std::vector<Unit> units;
  std::map<UnitId, BinId> mapping_h;
  /// Failed standby bins that hosted a promotion when they went down, with
  /// the unit they hosted. The promotion moves back when the bin recovers.
  std::map<BinId, UnitId> displaced;
  std::set<BinId> failed_bins;
  /// Group most recently selected as active for each class. The group is
  /// Active only while it is also available and incomplete.
  std::map<ClassPair, GroupId> active_group;

  PackingState() = default;
  explicit PackingState(Config cfg) : config(std::move(cfg)) {}

  Bin& bin(BinId id);
  const Bin& bin(BinId id) const;
  bool has_bin(BinId id) const { return id >= 0 && static_cast<std::size_t>(id) < bins.size(); }

  friend bool operator==(const PackingState&, const PackingState&) = default;
};

/// Sum over contents of eta * nominal for promoted standbys and nominal
/// otherwise.
Rational effective_load(const Bin& bin, const PackingState& state);

/// Load a replica contributes right now.
Rational effective_size(const Replica& r, const Config& cfg);

}  // namespace hstretch
