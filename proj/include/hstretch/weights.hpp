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

// Replica weights and the two per-bin weight audits: almost every bin of a
// Harmonic-Stretch packing weighs at least 1, and no bin of any valid
// packing weighs more than 7/4.

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hstretch/model.hpp"
#include "hstretch/snapshot.hpp"

namespace hstretch::weights {

/// Weight of one replica. `size` is the replica's own nominal size (x for a
/// primary, x/eta for a standby).
Rational replica_weight(Role role, const Rational& size, const Config& cfg);

/// weight / size upper bound for the replica's class: (i+1)/i for a regular
/// primary, (eta+j)/j for a regular standby, 3/2 for a small replica.
Rational density_cap(Role role, const Rational& size, const Config& cfg);

/// Weight of a whole item: its primary plus f standbys.
Rational item_weight(const Rational& size, const Config& cfg);

/// 216 eta (f+1)(eta+f) + (5 eta + 1 + f) + f(f+1).
Rational exception_bound(const Config& cfg);

struct BinWeight {
  BinId bin = 0;
  Rational weight;
};

struct WeightReport {
  std::vector<BinWeight> bins;
  Rational total;                    // w(sigma)
  std::vector<BinId> exception_bins; // weight < 1
  Rational exception_bound;
  int bin_count = 0;
  bool exceptions_within_bound = true;  // |exception_bins| <= exception_bound
  bool count_within_bound = true;       // bin_count <= total + exception_bound

  bool ok() const { return exceptions_within_bound && count_within_bound; }
};

WeightReport audit_algorithm_packing(const StaticPacking& packing);

enum class OptBinCase {
  NoStandbyWithClassOne,
  NoStandby,
  RegularStandbyClassOne,
  RegularStandbyWithClassOne,
  RegularStandby,
  SmallStandbyWithClassOne,
  SmallStandby,
};

std::string to_string(OptBinCase c);

struct OptBinAudit {
  Rational weight;
  Rational load;
  OptBinCase kind = OptBinCase::NoStandby;
  Rational case_bound;     // bound for this kind of bin
  bool headroom = false;   // slack >= (eta-1) s for the largest standby s
  /// Set only when the headroom certificate holds: weight <= 7/4.
  std::optional<bool> within_bound;
};

/// `contents` are the bin's replicas with nominal sizes.
OptBinAudit audit_opt_bin(const std::vector<StaticReplica>& contents, const Config& cfg);

Json to_json(const WeightReport& report);
Json to_json(const OptBinAudit& audit);

}  // namespace hstretch::weights
