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

#include <cstdint>
#include <vector>

#include "hstretch/snapshot.hpp"

namespace hstretch::oracle {

inline constexpr int kDefaultMaxItems = 5;

struct OptResult {
  int bins = 0;
  StaticPacking packing;  // bins numbered 0.. in first-use order, items by input position
  std::int64_t nodes = 0; // search nodes expanded, for diagnostics
};

/// Minimum number of bins of a packing of `sizes` that survives every
/// failure set of at most f bins. Exhaustive branch and bound; throws
/// LimitExceeded when sizes.size() > max_items and InputError for sizes
/// outside (0,1].
OptResult optimal_packing(const std::vector<Rational>& sizes, const Config& cfg,
                          int max_items = kDefaultMaxItems);

/// Every replica alone in its own bin: (f+1) n bins.
StaticPacking dedicated_baseline(const std::vector<Rational>& sizes, const Config& cfg);

/// max(f+1, ceil(total replica volume)) for a nonempty input, 0 otherwise.
int lower_bound(const std::vector<Rational>& sizes, const Config& cfg);

}  // namespace hstretch::oracle
