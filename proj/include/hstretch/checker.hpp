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

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hstretch/model.hpp"
#include "hstretch/snapshot.hpp"

namespace hstretch::checker {

struct StaticVerdict {
  bool valid = true;
  /// Problems that make the packing invalid before any failure: missing or
  /// co-located replicas, wrong standby sizes, overloaded bins.
  std::vector<std::string> structural;
  /// First failure set (by size, then lexicographically by bin id) for which
  /// no overload-free promotion exists.
  std::optional<std::vector<BinId>> witness;
};

/// Decides whether `packing` survives every simultaneous failure of at most
/// f bins: for each such set, every item whose primary is down must get one
/// standby promoted in a live bin, and the extra x - x/eta per promotion
/// must fit the host's slack. Several promotions may share a host.
/// Exhaustive; meant for small packings. Throws InputError when the
/// snapshot already contains failed bins.
///
/// `max_failures` caps the failure-set size below f (defaults to f).
StaticVerdict check_static_validity(const StaticPacking& packing, std::optional<int> max_failures = std::nullopt);

/// Every structural invariant of a live engine state. Empty means healthy;
/// each entry names the invariant and the offending ids.
std::vector<std::string> check_runtime_invariants(const PackingState& state);

}  // namespace hstretch::checker
