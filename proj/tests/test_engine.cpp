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

#include <gtest/gtest.h>

#include <set>

#include "hstretch/adjuster.hpp"
#include "hstretch/checker.hpp"
#include "hstretch/classifier.hpp"
#include "hstretch/engine.hpp"
#include "hstretch/errors.hpp"

using namespace hstretch;

namespace {

PackingState fresh(int f, Rational eta) { return PackingState(Config::make(f, eta)); }

void expect_healthy(const PackingState& s) {
  const auto v = checker::check_runtime_invariants(s);
  EXPECT_TRUE(v.empty()) << (v.empty() ? "" : v.front());
}

// Class (2,5) needs eta > 2; with eta = 3 a size of 2/5 lands there.
const Rational kEtaThree(3);
const Rational kTwoFive(2, 5);

}  // namespace

TEST(Engine, FirstArrivalOpensGroup) {
  PackingState s = fresh(2, Rational(2));
  const auto r = engine::on_arrive(s, Rational(3, 5));
  EXPECT_EQ(r.cls, (ClassPair{1, 2}));
  ASSERT_EQ(s.groups.size(), 1u);
  EXPECT_EQ(s.bins.size(), 4u);  // j + f i = 2 + 2
  const Group& g = s.groups[0];
  EXPECT_EQ(g.primary_bins, (std::vector<BinId>{0, 1}));
  ASSERT_EQ(g.standby_sets.size(), 2u);
  EXPECT_EQ(g.standby_sets[0], (std::vector<BinId>{2}));
  EXPECT_EQ(g.standby_sets[1], (std::vector<BinId>{3}));
  ASSERT_EQ(r.placements.size(), 3u);
  EXPECT_EQ(r.placements[0].bin, 0);
  EXPECT_EQ(r.placements[0].spot, 0);
  EXPECT_EQ(r.placements[1].bin, 2);
  EXPECT_EQ(r.placements[1].spot, 0);
  EXPECT_EQ(r.placements[2].bin, 3);
  EXPECT_EQ(r.placements[2].spot, 0);
  EXPECT_EQ(g.state, GroupState::Active);
  expect_healthy(s);
}

TEST(Engine, SpotFormulaForClassTwoFive) {
  PackingState s = fresh(3, kEtaThree);
  std::vector<engine::ArrivalReport> reports;
  for (int t = 0; t < 8; ++t) reports.push_back(engine::on_arrive(s, kTwoFive));
  EXPECT_EQ(reports[0].cls, (ClassPair{2, 5}));
  EXPECT_EQ(s.bins.size(), 11u);  // j + f i = 5 + 3 * 2

  // t = 4: w = 4, z = 0. Standby sets are {5,6}, {7,8}, {9,10}.
  const auto& p4 = reports[4].placements;
  EXPECT_EQ(p4[0].bin, 4);
  EXPECT_EQ(p4[0].spot, 0);
  for (int k = 1; k <= 3; ++k) {
    EXPECT_EQ(p4[static_cast<std::size_t>(k)].bin, 5 + 2 * (k - 1));
    EXPECT_EQ(p4[static_cast<std::size_t>(k)].spot, 4);
  }
  // t = 7: w = 2, z = 1.
  const auto& p7 = reports[7].placements;
  EXPECT_EQ(p7[0].bin, 2);
  EXPECT_EQ(p7[0].spot, 1);
  for (int k = 1; k <= 3; ++k) {
    EXPECT_EQ(p7[static_cast<std::size_t>(k)].bin, 6 + 2 * (k - 1));
    EXPECT_EQ(p7[static_cast<std::size_t>(k)].spot, 2);
  }
  expect_healthy(s);
}

TEST(Engine, TenthItemCompletesTwoFiveGroup) {
  PackingState s = fresh(3, kEtaThree);
  for (int t = 0; t < 9; ++t) engine::on_arrive(s, kTwoFive);
  EXPECT_EQ(s.groups[0].state, GroupState::Active);
  engine::on_arrive(s, kTwoFive);
  EXPECT_EQ(s.groups[0].items_placed, 10);
  EXPECT_EQ(s.groups[0].state, GroupState::Complete);
  for (BinId b : s.groups[0].primary_bins) EXPECT_EQ(s.bin(b).contents.size(), 2u);
  engine::on_arrive(s, kTwoFive);
  ASSERT_EQ(s.groups.size(), 2u);
  EXPECT_EQ(s.groups[1].primary_bins.front(), 11);
  expect_healthy(s);
}

TEST(Engine, SmallestGroupIsCompleteAfterOneItem) {
  PackingState s = fresh(1, Rational(2));
  const auto r = engine::on_arrive(s, Rational(1));
  EXPECT_EQ(r.cls, (ClassPair{1, 1}));
  EXPECT_EQ(s.bins.size(), 2u);
  EXPECT_EQ(s.groups[0].state, GroupState::Complete);
  EXPECT_TRUE(s.active_group.empty());
  expect_healthy(s);
}

TEST(Engine, RejectsSizesOutsideUnitInterval) {
  PackingState s = fresh(1, Rational(2));
  EXPECT_THROW(engine::on_arrive(s, Rational(0)), InputError);
  EXPECT_THROW(engine::on_arrive(s, Rational(3, 2)), InputError);
}

TEST(Engine, SmallItemsFillFiveCohortsThenComplete) {
  // eta = 2, f = 3: SR primary capacity 4/13, standby 2/13, open threshold 4/13.
  PackingState s = fresh(3, Rational(2));
  const Rational x(2, 13);
  for (int n = 0; n < 10; ++n) engine::on_arrive(s, x);
  ASSERT_EQ(s.groups.size(), 1u);
  const Group& g0 = s.groups[0];
  EXPECT_TRUE(g0.small);
  EXPECT_EQ(g0.cohorts_placed, 5);
  for (const auto& set : g0.standby_sets) EXPECT_EQ(s.bin(set.front()).nominal_load, Rational(10, 13));

  // Five primary SRs of exactly 4/13, each on its own bin since every earlier
  // primary bin shares an SR with the mirrors.
  std::set<BinId> primaries;
  for (const Unit& u : s.units) {
    EXPECT_EQ(u.primary_content, Rational(4, 13));
    primaries.insert(u.primary_bin);
  }
  EXPECT_EQ(primaries.size(), 5u);
  expect_healthy(s);

  // Mirrors have 3/13 < 4/13 of space left: the group completes and a new
  // one recommits the first freed primary bin.
  engine::on_arrive(s, x);
  ASSERT_EQ(s.groups.size(), 2u);
  EXPECT_EQ(s.groups[0].state, GroupState::Complete);
  EXPECT_FALSE(s.groups[0].committed_bin.has_value());
  ASSERT_TRUE(s.groups[1].committed_bin.has_value());
  EXPECT_EQ(*s.groups[1].committed_bin, s.units.front().primary_bin);
  expect_healthy(s);
}

TEST(Engine, SmallCohortAcceptsExactCapacity) {
  PackingState s = fresh(1, Rational(2));
  engine::on_arrive(s, Rational(2, 13));
  engine::on_arrive(s, Rational(2, 13));
  EXPECT_EQ(s.units.size(), 1u);
  engine::on_arrive(s, Rational(1, 100));
  EXPECT_EQ(s.units.size(), 2u);
  EXPECT_FALSE(s.units[0].open);
  EXPECT_TRUE(s.units[1].open);
  expect_healthy(s);
}

TEST(Engine, LowestIdAvailableGroupIsChosen) {
  PackingState s = fresh(1, Rational(2));
  const Rational half(1, 2);  // class (2,3), 6 items per group
  engine::on_arrive(s, half);
  adjuster::on_fail(s, 0);
  engine::on_arrive(s, half);  // group 0 unavailable: group 1 opens
  adjuster::on_recover(s, 0);
  ASSERT_EQ(s.groups.size(), 2u);
  EXPECT_EQ(s.groups[0].state, GroupState::IncompleteAvailable);
  EXPECT_EQ(s.groups[1].state, GroupState::Active);

  s.groups[1].state = GroupState::IncompleteAvailable;
  s.active_group.clear();
  EXPECT_EQ(engine::ensure_active_group(s, {2, 3}), 0);
  EXPECT_EQ(s.groups[0].state, GroupState::Active);
}

TEST(Engine, RecoveredGroupIsReusedNotReplaced) {
  PackingState s = fresh(1, Rational(2));
  const Rational half(1, 2);
  engine::on_arrive(s, half);
  adjuster::on_fail(s, 0);
  EXPECT_EQ(s.groups[0].state, GroupState::IncompleteUnavailable);
  adjuster::on_recover(s, 0);
  engine::on_arrive(s, half);
  EXPECT_EQ(s.groups.size(), 1u);
  EXPECT_EQ(s.groups[0].items_placed, 2);
}

TEST(Engine, UnavailableActiveGroupForcesNewGroup) {
  PackingState s = fresh(3, kEtaThree);
  engine::on_arrive(s, kTwoFive);
  adjuster::on_fail(s, 0);
  EXPECT_EQ(s.groups[0].state, GroupState::IncompleteUnavailable);
  engine::on_arrive(s, kTwoFive);
  ASSERT_EQ(s.groups.size(), 2u);
  EXPECT_EQ(s.groups[1].state, GroupState::Active);
  expect_healthy(s);
}

TEST(Engine, CompleteGroupStaysCompleteWhenBinFails) {
  PackingState s = fresh(1, Rational(2));
  engine::on_arrive(s, Rational(1));
  adjuster::on_fail(s, 0);
  EXPECT_EQ(s.groups[0].state, GroupState::Complete);
  adjuster::on_recover(s, 0);
  EXPECT_EQ(s.groups[0].state, GroupState::Complete);
}

TEST(Engine, GroupNeedsAllBinsBackToBeAvailable) {
  PackingState s = fresh(2, Rational(2));
  const Rational half(1, 2);
  engine::on_arrive(s, half);
  engine::on_arrive(s, half);
  adjuster::on_fail(s, 0);
  adjuster::on_fail(s, 1);
  adjuster::on_recover(s, 0);
  EXPECT_EQ(s.groups[0].state, GroupState::IncompleteUnavailable);
  adjuster::on_recover(s, 1);
  EXPECT_EQ(s.groups[0].state, GroupState::Active);
}

TEST(Adjuster, FailingPlainStandbyBinChangesNoRoles) {
  PackingState s = fresh(1, Rational(2));
  engine::on_arrive(s, Rational(1, 2));
  const BinId standby = s.groups[0].standby_sets[0][0];
  EXPECT_TRUE(adjuster::on_fail(s, standby).empty());
  EXPECT_EQ(s.groups[0].state, GroupState::IncompleteUnavailable);
  EXPECT_TRUE(s.mapping_h.empty());
  EXPECT_TRUE(adjuster::on_recover(s, standby).empty());
  expect_healthy(s);
}

TEST(Adjuster, TwoPrimaryBinsOfTwoFiveGroupFail) {
  PackingState s = fresh(3, kEtaThree);
  for (int t = 0; t < 6; ++t) engine::on_arrive(s, kTwoFive);
  const auto first = adjuster::on_fail(s, 0);  // holds a_0 and a_5
  const auto second = adjuster::on_fail(s, 4); // holds a_4
  ASSERT_EQ(first.size(), 2u);
  ASSERT_EQ(second.size(), 1u);
  EXPECT_EQ(first[0].items, (std::vector<ItemId>{0}));
  EXPECT_EQ(first[1].items, (std::vector<ItemId>{5}));
  EXPECT_EQ(second[0].items, (std::vector<ItemId>{4}));
  std::set<BinId> hosts{first[0].to_bin, first[1].to_bin, second[0].to_bin};
  EXPECT_EQ(hosts.size(), 3u);
  EXPECT_EQ(first[0].to_bin, 5);
  EXPECT_EQ(first[1].to_bin, 6);
  EXPECT_EQ(second[0].to_bin, 7);
  for (BinId h : hosts) EXPECT_TRUE(s.bin(h).marked);
  expect_healthy(s);
}

TEST(Adjuster, FailedHostIsRemapped) {
  PackingState s = fresh(2, Rational(2));
  engine::on_arrive(s, Rational(3, 5));
  const auto up = adjuster::on_fail(s, 0);
  ASSERT_EQ(up.size(), 1u);
  const BinId host = up[0].to_bin;
  const auto again = adjuster::on_fail(s, host);
  ASSERT_EQ(again.size(), 1u);
  EXPECT_EQ(again[0].from_bin, host);
  EXPECT_NE(again[0].to_bin, host);
  EXPECT_FALSE(s.bin(host).marked);
  EXPECT_EQ(s.mapping_h.at(s.items[0].unit), again[0].to_bin);
  expect_healthy(s);

  // The recovered host takes its promotion back.
  const auto back = adjuster::on_recover(s, host);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].direction, adjuster::Direction::Transfer);
  EXPECT_EQ(back[0].from_bin, again[0].to_bin);
  EXPECT_EQ(back[0].to_bin, host);
  EXPECT_TRUE(s.bin(host).marked);
  EXPECT_FALSE(s.bin(again[0].to_bin).marked);
  EXPECT_TRUE(s.displaced.empty());
  expect_healthy(s);
}

TEST(Adjuster, RecoveringPrimaryBinDemotes) {
  PackingState s = fresh(2, Rational(2));
  engine::on_arrive(s, Rational(3, 5));
  engine::on_arrive(s, Rational(3, 5));
  adjuster::on_fail(s, 0);
  const auto down = adjuster::on_recover(s, 0);
  ASSERT_EQ(down.size(), 1u);
  EXPECT_EQ(down[0].direction, adjuster::Direction::Demote);
  EXPECT_EQ(down[0].to_bin, 0);
  EXPECT_TRUE(s.mapping_h.empty());
  for (const Bin& b : s.bins) EXPECT_FALSE(b.marked);
  for (const Replica& r : s.replicas) EXPECT_FALSE(r.promoted);
  expect_healthy(s);
}

TEST(Adjuster, TraceErrors) {
  PackingState s = fresh(1, Rational(2));
  engine::on_arrive(s, Rational(1, 2));
  EXPECT_THROW(adjuster::on_fail(s, 99), TraceError);
  EXPECT_THROW(adjuster::on_recover(s, 0), TraceError);
  adjuster::on_fail(s, 0);
  EXPECT_THROW(adjuster::on_fail(s, 0), TraceError);
  EXPECT_THROW(adjuster::on_fail(s, 1), TraceError);  // f = 1 already down
}

TEST(Adjuster, FailRecoverRoundTripIsExact) {
  PackingState s = fresh(2, Rational(2));
  for (const char* x : {"3/5", "1/2", "1/10", "3/10", "1/5", "2/13", "1/2", "7/10"}) {
    engine::on_arrive(s, Rational::parse(x));
  }
  adjuster::on_fail(s, 0);
  int marked = 0;
  for (BinId b = 0; b < static_cast<BinId>(s.bins.size()); ++b) {
    if (s.bin(b).failed) continue;
    marked += s.bin(b).marked ? 1 : 0;
    const PackingState before = s;
    adjuster::on_fail(s, b);
    adjuster::on_recover(s, b);
    EXPECT_TRUE(s == before) << "bin " << b;
  }
  EXPECT_GT(marked, 0);
}
