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

namespace hstretch::adjuster {

enum class Direction { Promote, Demote, Transfer };

/// One change of effective primary. For a promotion `from_bin` is the bin
/// that just failed and `to_bin` the standby bin now serving; for a demotion
/// `from_bin` is the standby bin giving up its promotion and `to_bin` the
/// recovered primary bin. A transfer moves a promotion from `from_bin` back
/// to the recovered standby bin `to_bin` that hosted it before failing.
struct RoleChange {
  UnitId unit = 0;
  std::vector<ItemId> items;
  BinId from_bin = 0;
  BinId to_bin = 0;
  Direction direction = Direction::Promote;
};

/// Marks `bin` failed and moves every effective primary it held to a
/// non-failed, unmarked standby host (lowest id first, units in ascending
/// id order). Throws TraceError when the bin is unknown or already failed or
/// when f bins are already down; throws InvariantViolation if no host exists.
std::vector<RoleChange> on_fail(PackingState& state, BinId bin);

/// Clears the failed flag. For a primary bin, every unit it holds gets its
/// primary status back and the standby host is unmarked. A standby bin that
/// hosted a promotion when it failed takes that promotion back if the unit's
/// primary is still down. Throws TraceError when the bin is not failed.
std::vector<RoleChange> on_recover(PackingState& state, BinId bin);

}  // namespace hstretch::adjuster
