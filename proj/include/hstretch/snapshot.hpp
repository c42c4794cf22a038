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

// Packing snapshot documents. A snapshot is a JSON object
//
//   {"config":   {"f": 2, "eta": "2/1"},
//    "bins":     [{"id": 0, "kind": "regular_primary", "class": [1,2], "set": 0,
//                  "failed": false, "marked": false, "load": "3/5",
//                  "contents": [{"replica": 0, "item": 0, "role": "primary",
//                                "rank": 0, "size": "3/5", "promoted": false,
//                                "spot": 0, "sr": null}]}],
//    "groups":   [...], "items": [...], "super_replicas": [...],
//    "mapping_h": [{"unit": 3, "items": [3], "bin": 7}],
//    "failed_bins": [...]}
//
// with every size a reduced fraction "num/den". Only "config" and "bins"
// (with item/role/size per replica) are required when reading, so foreign
// packings such as the oracle's or hand-written fixtures share the format.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hstretch/adjuster.hpp"
#include "hstretch/engine.hpp"
#include "hstretch/model.hpp"
#include <json.hpp>

namespace hstretch {

using Json = nlohmann::ordered_json;

/// Engine-agnostic view of a packing: bins holding replicas of items.
struct StaticReplica {
  ItemId item = 0;
  Role role = Role::Primary;
  Rational size;  // nominal: x for a primary, x/eta for a standby
  bool promoted = false;

  friend bool operator==(const StaticReplica&, const StaticReplica&) = default;
};

struct StaticBin {
  BinId id = 0;
  std::string kind;  // free-form label, "" for foreign packings
  bool failed = false;
  std::vector<StaticReplica> contents;

  friend bool operator==(const StaticBin&, const StaticBin&) = default;
};

struct StaticPacking {
  Config config;
  std::vector<StaticBin> bins;

  std::size_t bin_count() const { return bins.size(); }
  /// Primary size of every item, indexed by item id order of first
  /// appearance of its primary. Items without a primary are omitted.
  std::vector<std::pair<ItemId, Rational>> item_sizes() const;
};

Json to_json(const Config& cfg);
Config config_from_json(const Json& j);

Json snapshot_json(const PackingState& state);
std::string snapshot_string(const PackingState& state);

StaticPacking to_static(const PackingState& state);
Json static_json(const StaticPacking& packing);

/// Parses a snapshot document. `override_cfg` replaces the document's config
/// (required when the document has none). Throws InputError on malformed input.
StaticPacking parse_static(const Json& doc, const std::optional<Config>& override_cfg = std::nullopt);
StaticPacking parse_static(const std::string& text, const std::optional<Config>& override_cfg = std::nullopt);

Json placement_record(std::int64_t event, const engine::Placement& p);
Json role_change_record(std::int64_t event, const adjuster::RoleChange& c);

}  // namespace hstretch
