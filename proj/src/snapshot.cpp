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

#include "hstretch/snapshot.hpp"

#include <map>

#include "hstretch/errors.hpp"

namespace hstretch {
namespace {

Json class_json(const ClassPair& c) { return Json::array({c.i, c.j}); }

const char* role_name(Role r) { return r == Role::Primary ? "primary" : "standby"; }

Json optional_int(const std::optional<int>& v) { return v ? Json(*v) : Json(nullptr); }

Rational rational_field(const Json& j, const char* what) {
  try {
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  } catch (const std::exception& e) {
    throw InputError(std::string(what) + ": " + e.what());
  }
  throw InputError(std::string(what) + ": expected a \"num/den\" string");
}

}  // namespace

std::vector<std::pair<ItemId, Rational>> StaticPacking::item_sizes() const {
  std::map<ItemId, Rational> sizes;
  for (const auto& b : bins) {
    for (const auto& r : b.contents) {
      if (r.role == Role::Primary) sizes.emplace(r.item, r.size);
    }
  }
  return {sizes.begin(), sizes.end()};
}

Json to_json(const Config& cfg) {
  Json j;
  j["f"] = cfg.f;
  j["eta"] = cfg.eta.str();
  return j;
}

Config config_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("f") || !j.contains("eta")) throw InputError("config needs \"f\" and \"eta\"");
  if (!j["f"].is_number_integer()) throw InputError("config.f must be an integer");
  return Config::make(j["f"].get<int>(), rational_field(j["eta"], "config.eta"));
}

Json snapshot_json(const PackingState& state) {
  Json doc;
  doc["config"] = to_json(state.config);

  Json bins = Json::array();
  for (const Bin& b : state.bins) {
    Json jb;
    jb["id"] = b.id;
    jb["kind"] = to_string(b.kind);
    jb["class"] = class_json(b.cls);
    jb["set"] = b.set_index;
    jb["position"] = b.position;
    jb["group"] = optional_int(b.group);
    jb["failed"] = b.failed;
    jb["marked"] = b.marked;
    jb["load"] = effective_load(b, state).str();
    Json contents = Json::array();
    for (ReplicaId rid : b.contents) {
      const Replica& r = state.replicas[static_cast<std::size_t>(rid)];
      Json jr;
      jr["replica"] = r.id;
      jr["item"] = r.item;
      jr["role"] = role_name(r.role);
      jr["rank"] = r.rank;
      jr["size"] = r.nominal.str();
      jr["promoted"] = r.promoted;
      jr["spot"] = r.spot >= 0 ? Json(r.spot) : Json(nullptr);
      jr["sr"] = state.units[static_cast<std::size_t>(r.unit)].super_replica ? Json(r.unit) : Json(nullptr);
      contents.push_back(std::move(jr));
    }
    jb["contents"] = std::move(contents);
    bins.push_back(std::move(jb));
  }
  doc["bins"] = std::move(bins);

  Json groups = Json::array();
  for (const Group& g : state.groups) {
    Json jg;
    jg["id"] = g.id;
    jg["class"] = class_json(g.cls);
    jg["small"] = g.small;
    jg["state"] = to_string(g.state);
    jg["primary_bins"] = g.primary_bins;
    jg["standby_bins"] = g.standby_sets;
    jg["committed_bin"] = optional_int(g.committed_bin);
    jg["items_placed"] = g.items_placed;
    if (g.small) {
      jg["cohorts_placed"] = g.cohorts_placed;
      jg["open_sr"] = optional_int(g.open_unit);
    }
    groups.push_back(std::move(jg));
  }
  doc["groups"] = std::move(groups);

  Json items = Json::array();
  for (const Item& it : state.items) {
    Json ji;
    ji["id"] = it.id;
    ji["size"] = it.size.str();
    ji["class"] = class_json(it.cls);
    ji["unit"] = it.unit;
    items.push_back(std::move(ji));
  }
  doc["items"] = std::move(items);

  Json srs = Json::array();
  for (const Unit& u : state.units) {
    if (!u.super_replica) continue;
    Json js;
    js["id"] = u.id;
    js["group"] = u.group;
    js["open"] = u.open;
    js["members"] = u.members;
    js["primary_bin"] = u.primary_bin;
    js["standby_bins"] = u.standby_bins;
    js["primary_content"] = u.primary_content.str();
    js["standby_content"] = (u.primary_content / state.config.eta).str();
    srs.push_back(std::move(js));
  }
  doc["super_replicas"] = std::move(srs);

  Json h = Json::array();
  for (const auto& [unit, host] : state.mapping_h) {
    const Unit& u = state.units[static_cast<std::size_t>(unit)];
    Json jh;
    jh["unit"] = unit;
    jh["items"] = u.members;
    jh["primary_bin"] = u.primary_bin;
    jh["bin"] = host;
    h.push_back(std::move(jh));
  }
  doc["mapping_h"] = std::move(h);
  Json displaced = Json::array();
  for (const auto& [bin, unit] : state.displaced) displaced.push_back(Json{{"bin", bin}, {"unit", unit}});
  doc["displaced"] = std::move(displaced);
  doc["failed_bins"] = std::vector<int>(state.failed_bins.begin(), state.failed_bins.end());

  Json active = Json::array();
  for (const auto& [cls, gid] : state.active_group) {
    active.push_back(Json{{"class", class_json(cls)}, {"group", gid}});
  }
  doc["active_groups"] = std::move(active);
  return doc;
}

std::string snapshot_string(const PackingState& state) { return snapshot_json(state).dump(2) + "\n"; }

StaticPacking to_static(const PackingState& state) {
  StaticPacking p;
  p.config = state.config;
  for (const Bin& b : state.bins) {
    StaticBin sb;
    sb.id = b.id;
    sb.kind = to_string(b.kind);
    sb.failed = b.failed;
    for (ReplicaId rid : b.contents) {
      const Replica& r = state.replicas[static_cast<std::size_t>(rid)];
      sb.contents.push_back({r.item, r.role, r.nominal, r.promoted});
    }
    p.bins.push_back(std::move(sb));
  }
  return p;
}

Json static_json(const StaticPacking& packing) {
  Json doc;
  doc["config"] = to_json(packing.config);
  Json bins = Json::array();
  for (const StaticBin& b : packing.bins) {
    Json jb;
    jb["id"] = b.id;
    if (!b.kind.empty()) jb["kind"] = b.kind;
    jb["failed"] = b.failed;
    Rational load;
    Json contents = Json::array();
    for (const StaticReplica& r : b.contents) {
      load += r.promoted ? r.size * packing.config.eta : r.size;
      Json jr;
      jr["item"] = r.item;
      jr["role"] = role_name(r.role);
      jr["size"] = r.size.str();
      jr["promoted"] = r.promoted;
      contents.push_back(std::move(jr));
    }
    jb["load"] = load.str();
    jb["contents"] = std::move(contents);
    bins.push_back(std::move(jb));
  }
  doc["bins"] = std::move(bins);
  return doc;
}

StaticPacking parse_static(const Json& doc, const std::optional<Config>& override_cfg) {
  if (!doc.is_object()) throw InputError("snapshot must be a JSON object");
  StaticPacking p;
  if (override_cfg) {
    p.config = *override_cfg;
  } else if (doc.contains("config")) {
    p.config = config_from_json(doc["config"]);
  } else {
    throw InputError("snapshot has no config; pass f and eta explicitly");
  }
  if (!doc.contains("bins") || !doc["bins"].is_array()) throw InputError("snapshot needs a \"bins\" array");
  for (const Json& jb : doc["bins"]) {
    if (!jb.is_object() || !jb.contains("id") || !jb["id"].is_number_integer()) {
      throw InputError("every bin needs an integer \"id\"");
    }
    StaticBin b;
    b.id = jb["id"].get<int>();
    if (jb.contains("kind") && jb["kind"].is_string()) b.kind = jb["kind"].get<std::string>();
    if (jb.contains("failed")) b.failed = jb["failed"].get<bool>();
    if (jb.contains("contents")) {
      if (!jb["contents"].is_array()) throw InputError("bin contents must be an array");
      for (const Json& jr : jb["contents"]) {
        if (!jr.is_object() || !jr.contains("item") || !jr.contains("role") || !jr.contains("size")) {
          throw InputError("replica entries need \"item\", \"role\" and \"size\"");
        }
        StaticReplica r;
        r.item = jr["item"].get<int>();
        const std::string role = jr["role"].get<std::string>();
        if (role == "primary") {
          r.role = Role::Primary;
        } else if (role == "standby") {
          r.role = Role::Standby;
        } else {
          throw InputError("unknown replica role '" + role + "'");
        }
        r.size = rational_field(jr["size"], "replica size");
        if (jr.contains("promoted")) r.promoted = jr["promoted"].get<bool>();
        b.contents.push_back(r);
      }
    }
    p.bins.push_back(std::move(b));
  }
  return p;
}

StaticPacking parse_static(const std::string& text, const std::optional<Config>& override_cfg) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const std::exception& e) {
    throw InputError(std::string("snapshot is not valid JSON: ") + e.what());
  }
  try {
    return parse_static(doc, override_cfg);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed snapshot: ") + e.what());
  }
}

Json placement_record(std::int64_t event, const engine::Placement& p) {
  Json j;
  j["event"] = event;
  j["type"] = "place";
  j["item"] = p.item;
  j["replica"] = p.replica;
  j["role"] = role_name(p.role);
  j["rank"] = p.rank;
  j["bin"] = p.bin;
  j["spot"] = p.spot >= 0 ? Json(p.spot) : Json(nullptr);
  j["group"] = p.group;
  j["sr"] = optional_int(p.super_replica);
  return j;
}

Json role_change_record(std::int64_t event, const adjuster::RoleChange& c) {
  Json j;
  j["event"] = event;
  j["type"] = "role_change";
  switch (c.direction) {
    case adjuster::Direction::Promote: j["direction"] = "promote"; break;
    case adjuster::Direction::Demote: j["direction"] = "demote"; break;
    case adjuster::Direction::Transfer: j["direction"] = "transfer"; break;
  }
  j["unit"] = c.unit;
  j["items"] = c.items;
  j["from_bin"] = c.from_bin;
  j["to_bin"] = c.to_bin;
  return j;
}

}  // namespace hstretch
