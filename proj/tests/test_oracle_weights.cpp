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

#include <random>

#include "hstretch/checker.hpp"
#include "hstretch/classifier.hpp"
#include "hstretch/errors.hpp"
#include "hstretch/oracle.hpp"
#include "hstretch/trace.hpp"
#include "hstretch/weights.hpp"

using namespace hstretch;

namespace {

std::vector<Rational> sizes(std::initializer_list<const char*> xs) {
  std::vector<Rational> out;
  for (const char* x : xs) out.push_back(Rational::parse(x));
  return out;
}

// Tries every assignment of replicas to b bins with no pruning at all.
int naive_opt(const std::vector<Rational>& xs, const Config& cfg) {
  const int per = cfg.f + 1;
  const int slots = per * static_cast<int>(xs.size());
  for (int b = 1;; ++b) {
    std::vector<int> at(static_cast<std::size_t>(slots), 0);
    while (true) {
      bool distinct = true;
      for (std::size_t i = 0; i < xs.size() && distinct; ++i) {
        for (int a = 0; a < per; ++a) {
          for (int c = a + 1; c < per; ++c) {
            if (at[i * per + a] == at[i * per + c]) distinct = false;
          }
        }
      }
      if (distinct) {
        StaticPacking p;
        p.config = cfg;
        for (int k = 0; k < b; ++k) p.bins.push_back({k, "", false, {}});
        for (std::size_t i = 0; i < xs.size(); ++i) {
          for (int a = 0; a < per; ++a) {
            const Rational size = a == 0 ? xs[i] : xs[i] / cfg.eta;
            p.bins[static_cast<std::size_t>(at[i * per + a])].contents.push_back(
                {static_cast<ItemId>(i), a == 0 ? Role::Primary : Role::Standby, size, false});
          }
        }
        if (checker::check_static_validity(p).valid) return b;
      }
      std::size_t k = 0;
      while (k < at.size() && ++at[k] == b) at[k++] = 0;
      if (k == at.size()) break;
    }
  }
}

}  // namespace

TEST(Oracle, SingleItemNeedsFPlusOneBins) {
  for (const char* x : {"1/10", "1/2", "1"}) {
    EXPECT_EQ(oracle::optimal_packing(sizes({x}), Config::make(1, Rational(2))).bins, 2);
    EXPECT_EQ(oracle::optimal_packing(sizes({x}), Config::make(2, Rational(3, 2))).bins, 3);
  }
}

TEST(Oracle, SixTenthsAndHalfNeedThreeBins) {
  const auto r = oracle::optimal_packing(sizes({"3/5", "1/2"}), Config::make(1, Rational(2)));
  EXPECT_EQ(r.bins, 3);
  EXPECT_TRUE(checker::check_static_validity(r.packing).valid);
}

TEST(Oracle, FourItemInstanceFitsInFourBins) {
  const Config cfg = Config::make(2, Rational(2));
  const auto r = oracle::optimal_packing(sizes({"2/5", "3/5", "3/10", "1/5"}), cfg);
  EXPECT_EQ(r.bins, 4);
  EXPECT_TRUE(checker::check_static_validity(r.packing).valid);
}

TEST(Oracle, AgreesWithUnprunedEnumeration) {
  std::mt19937_64 rng(3);
  const std::vector<Rational> pool = sizes({"1/10", "1/4", "2/5", "1/2", "3/5", "9/10"});
  for (int trial = 0; trial < 25; ++trial) {
    const Config cfg = Config::make(1, trial % 2 ? Rational(2) : Rational(3, 2));
    std::vector<Rational> xs;
    const int n = 1 + trial % 3;
    for (int i = 0; i < n; ++i) xs.push_back(pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)]);
    EXPECT_EQ(oracle::optimal_packing(xs, cfg).bins, naive_opt(xs, cfg)) << "trial " << trial;
  }
}

TEST(Oracle, RespectsLowerBounds) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    const Config cfg = Config::make(1 + trial % 2, Rational(2));
    std::vector<Rational> xs;
    for (int i = 0; i < 4; ++i) xs.push_back(Rational(std::uniform_int_distribution<int>(1, 10)(rng), 10));
    const auto r = oracle::optimal_packing(xs, cfg);
    EXPECT_GE(r.bins, cfg.f + 1);
    EXPECT_GE(r.bins, oracle::lower_bound(xs, cfg));
    EXPECT_LE(r.bins, (cfg.f + 1) * 4);
    EXPECT_TRUE(checker::check_static_validity(r.packing).valid);
  }
}

TEST(Oracle, RefusesLargeInstances) {
  const Config cfg = Config::make(1, Rational(2));
  const auto six = sizes({"1/2", "1/2", "1/2", "1/2", "1/2", "1/2"});
  EXPECT_THROW(oracle::optimal_packing(six, cfg), LimitExceeded);
  EXPECT_THROW(oracle::optimal_packing(sizes({"0"}), cfg), InputError);
}

TEST(Oracle, DedicatedBaseline) {
  const Config cfg = Config::make(2, Rational(2));
  const auto p = oracle::dedicated_baseline(sizes({"1/2", "1/5", "1"}), cfg);
  EXPECT_EQ(p.bins.size(), 9u);
  EXPECT_TRUE(checker::check_static_validity(p).valid);
}

TEST(Oracle, EngineNeverBeatsDedicatedOnLongInputs) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Config cfg = Config::make(1 + static_cast<int>(seed % 3), Rational(2));
    trace::GenOptions opt;
    opt.churn = 0;
    const auto t = trace::generate_trace(trace::GenMode::Random, 400, seed, cfg, opt);
    const auto r = trace::run_trace(t, cfg, false);
    EXPECT_LE(r.state.bins.size(), static_cast<std::size_t>((cfg.f + 1) * 400));
  }
}

TEST(Weights, TableValues) {
  const Config cfg = Config::make(2, Rational(2));
  EXPECT_EQ(weights::replica_weight(Role::Primary, Rational(3, 5), cfg), Rational(1));
  EXPECT_EQ(weights::replica_weight(Role::Standby, Rational(3, 10), cfg), Rational(1, 2));
  EXPECT_EQ(weights::replica_weight(Role::Standby, Rational(1, 20), cfg), Rational(3, 40));
  EXPECT_EQ(weights::replica_weight(Role::Primary, Rational(1, 10), cfg), Rational(3, 20));
}

TEST(Weights, ExceptionBound) {
  EXPECT_EQ(weights::exception_bound(Config::make(2, Rational(2))), Rational(5203));
  EXPECT_EQ(weights::exception_bound(Config::make(1, Rational(3, 2))),
            Rational(216) * Rational(3, 2) * Rational(2) * Rational(5, 2) + Rational(19, 2) + Rational(2));
}

TEST(Weights, CompleteRegularGroupBinsWeighOne) {
  const Config cfg = Config::make(1, Rational(2));
  PackingState s(cfg);
  for (int n = 0; n < 6; ++n) engine::on_arrive(s, Rational(1, 2));  // class (2,3)
  ASSERT_EQ(s.groups[0].state, GroupState::Complete);
  const auto report = weights::audit_algorithm_packing(to_static(s));
  for (const auto& b : report.bins) EXPECT_EQ(b.weight, Rational(1)) << "bin " << b.bin;
  EXPECT_TRUE(report.exception_bins.empty());
}

TEST(Weights, EmptySnapshot) {
  StaticPacking p;
  p.config = Config::make(1, Rational(2));
  const auto report = weights::audit_algorithm_packing(p);
  EXPECT_EQ(report.total, Rational(0));
  EXPECT_TRUE(report.exception_bins.empty());
  EXPECT_TRUE(report.ok());
}

TEST(Weights, DensityCaps) {
  std::mt19937_64 rng(2);
  for (const Rational eta : {Rational(3, 2), Rational(2), Rational(3)}) {
    const Config cfg = Config::make(1, eta);
    for (int n = 0; n < 2000; ++n) {
      const Rational x(std::uniform_int_distribution<int>(1, 2000)(rng), 2000);
      const bool small = is_small(classify(x, cfg), cfg);
      for (const auto& [role, size] : {std::pair{Role::Primary, x}, std::pair{Role::Standby, x / eta}}) {
        const Rational density = weights::replica_weight(role, size, cfg) / size;
        const Rational cap = weights::density_cap(role, size, cfg);
        if (small) {
          EXPECT_EQ(density, cap);
        } else {
          EXPECT_LT(density, cap) << x;
        }
      }
    }
  }
}

TEST(Weights, OptBinWithClassOnePrimaryAndSmallFill) {
  const Config cfg = Config::make(1, Rational(2));
  std::vector<StaticReplica> bin{{0, Role::Primary, Rational(3, 5), false}};
  for (int k = 0; k < 3; ++k) bin.push_back({k + 1, Role::Primary, Rational(1, 8), false});
  const auto a = weights::audit_opt_bin(bin, cfg);
  EXPECT_EQ(a.kind, weights::OptBinCase::NoStandbyWithClassOne);
  EXPECT_EQ(a.weight, Rational(1) + Rational(3, 2) * Rational(3, 8));
  ASSERT_TRUE(a.within_bound.has_value());
  EXPECT_TRUE(*a.within_bound);
}

TEST(Weights, OptBinWithClassOneStandby) {
  const Config cfg = Config::make(1, Rational(2));
  // Standby 2/5 (class 1); headroom needs slack >= 2/5.
  std::vector<StaticReplica> bin{{0, Role::Standby, Rational(2, 5), false}, {1, Role::Primary, Rational(1, 6), false}};
  const auto a = weights::audit_opt_bin(bin, cfg);
  EXPECT_EQ(a.kind, weights::OptBinCase::RegularStandbyClassOne);
  EXPECT_EQ(a.case_bound, Rational(10, 6));
  EXPECT_TRUE(a.headroom);
  EXPECT_LE(a.weight, a.case_bound);
}

TEST(Weights, OptBinWithoutHeadroomIsNotJudged) {
  const Config cfg = Config::make(1, Rational(2));
  std::vector<StaticReplica> bin{{0, Role::Standby, Rational(1, 2), false}, {1, Role::Primary, Rational(1, 2), false}};
  const auto a = weights::audit_opt_bin(bin, cfg);
  EXPECT_FALSE(a.headroom);
  EXPECT_FALSE(a.within_bound.has_value());
}
