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

#include <vector>

#include "hstretch/model.hpp"
#include "hstretch/rational.hpp"

namespace hstretch {

inline constexpr int kSmallPrimaryClass = 7;

/// floor(6 eta): the last regular standby class.
int last_regular_standby_class(const Config& cfg);
/// floor(6 eta) + 1: the standby class of small items.
int small_standby_class(const Config& cfg);
ClassPair small_class(const Config& cfg);
bool is_small(const ClassPair& c, const Config& cfg);

/// Maps a primary size in (0,1] to its (primary, standby) class pair.
/// Primary classes are the harmonic intervals (1/(i+1), 1/i] for i <= 5,
/// then (1/(7-1/eta), 1/6] and everything below. Standby classes apply the
/// stretched intervals (1/(eta+j), 1/(eta+j-1)] to size/eta.
/// Throws InputError for sizes outside (0,1].
ClassPair classify(const Rational& size, const Config& cfg);

/// Geometry derived from the class table for one configuration.
struct ClassConstants {
  Config config;
  Rational sr_primary_capacity;    // 2/(7 - 1/eta)
  Rational sr_standby_capacity;    // 2/(7 eta - 1)
  Rational small_mirror_reserved;  // 2(eta - 1)/(7 eta - 1)
  Rational small_open_threshold;   // 2 eta/(7 eta - 1)
  Rational small_primary_bound;    // 1/(7 - 1/eta): largest small primary
  Rational small_standby_bound;    // 1/(7 eta - 1): largest small standby

  static ClassConstants of(const Config& cfg);

  /// 1/i, for i in [1,6].
  Rational primary_spot_size(int i) const;
  /// 1/(j + eta - 1), for j in [1, floor(6 eta)].
  Rational standby_spot_size(int j) const;
  /// (eta - 1)/(j + eta - 1).
  Rational standby_reserved(int j) const;
};

/// Every finite endpoint of the primary and standby interval tables,
/// expressed as a primary size in (0,1]. Used by boundary-focused
/// generators and tests.
std::vector<Rational> class_boundary_sizes(const Config& cfg);

}  // namespace hstretch
