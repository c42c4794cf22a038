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

#include "hstretch/model.hpp"

#include "hstretch/errors.hpp"

namespace hstretch {

Config Config::make(int f, Rational eta) {
  if (f < 1) throw InputError("f must be >= 1, got " + std::to_string(f));
  if (eta <= Rational(1)) throw InputError("eta must be > 1, got " + eta.str());
  Config c;
  c.f = f;
  c.eta = eta;
  return c;
}

std::string to_string(const ClassPair& c) {
  return "(" + std::to_string(c.i) + "," + std::to_string(c.j) + ")";
}

std::string to_string(BinKind kind) {
  switch (kind) {
    case BinKind::RegularPrimary: return "regular_primary";
    case BinKind::RegularStandby: return "regular_standby";
    case BinKind::SmallPrimary: return "small_primary";
    case BinKind::SmallStandby: return "small_standby";
  }
  return "unknown";
}

bool is_primary_kind(BinKind kind) {
  return kind == BinKind::RegularPrimary || kind == BinKind::SmallPrimary;
}

std::string to_string(GroupState s) {
  switch (s) {
    case GroupState::Active: return "active";
    case GroupState::IncompleteAvailable: return "incomplete_available";
    case GroupState::IncompleteUnavailable: return "incomplete_unavailable";
    case GroupState::Complete: return "complete";
  }
  return "unknown";
}

std::vector<BinId> Group::member_bins() const {
  std::vector<BinId> out = primary_bins;
  for (const auto& set : standby_sets) out.insert(out.end(), set.begin(), set.end());
  if (committed_bin) out.push_back(*committed_bin);
  return out;
}

Bin& PackingState::bin(BinId id) {
  if (!has_bin(id)) throw InputError("unknown bin " + std::to_string(id));
  return bins[static_cast<std::size_t>(id)];
}

const Bin& PackingState::bin(BinId id) const {
  if (!has_bin(id)) throw InputError("unknown bin " + std::to_string(id));
  return bins[static_cast<std::size_t>(id)];
}

Rational effective_size(const Replica& r, const Config& cfg) {
  return r.promoted ? r.nominal * cfg.eta : r.nominal;
}

Rational effective_load(const Bin& bin, const PackingState& state) {
  Rational total;
  for (ReplicaId rid : bin.contents) {
    total += effective_size(state.replicas[static_cast<std::size_t>(rid)], state.config);
  }
  return total;
}

}  // namespace hstretch
