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

#include "hstretch/classifier.hpp"
#include "hstretch/errors.hpp"
#include "hstretch/trace.hpp"

using namespace hstretch;
using trace::Event;

namespace {

int incomplete_groups(const PackingState& s, const ClassPair& cls) {
  int n = 0;
  for (const Group& g : s.groups) n += (g.cls == cls && !g.complete()) ? 1 : 0;
  return n;
}

}  // namespace

TEST(Trace, JsonlRoundTrip) {
  const trace::Trace t{Event::arrive(1, Rational(3, 5)), Event::fail(2, 4), Event::recover(3, 4)};
  const std::string text = trace::to_jsonl(t);
  EXPECT_EQ(text,
            "{\"seq\":1,\"ev\":\"arrive\",\"size\":\"3/5\"}\n"
            "{\"seq\":2,\"ev\":\"fail\",\"bin\":4}\n"
            "{\"seq\":3,\"ev\":\"recover\",\"bin\":4}\n");
  EXPECT_EQ(trace::parse_jsonl(text), t);
}

TEST(Trace, MalformedLinesCarryTheirSeq) {
  try {
    trace::parse_jsonl("{\"seq\":1,\"ev\":\"arrive\",\"size\":\"3/5\"}\n{\"seq\":2,\"ev\":\"explode\"}\n");
    FAIL() << "expected TraceError";
  } catch (const TraceError& e) {
    EXPECT_EQ(e.seq(), 2);
  }
  EXPECT_THROW(trace::parse_jsonl("not json\n"), TraceError);
  EXPECT_THROW(trace::parse_jsonl("{\"seq\":1,\"ev\":\"arrive\",\"size\":\"x\"}\n"), TraceError);
}

TEST(Trace, ValidatorRejectsTooManyFailures) {
  const Config cfg = Config::make(1, Rational(2));
  const trace::Trace t{Event::arrive(1, Rational(1, 2)), Event::fail(2, 0), Event::fail(3, 1)};
  try {
    trace::validate_trace(t, cfg);
    FAIL() << "expected TraceError";
  } catch (const TraceError& e) {
    EXPECT_EQ(e.seq(), 3);
  }
  EXPECT_THROW(trace::validate_trace({Event::recover(1, 0)}, cfg), TraceError);
  EXPECT_THROW(trace::validate_trace({Event::arrive(2, Rational(1, 2)), Event::arrive(1, Rational(1, 2))}, cfg),
               TraceError);
}

TEST(Trace, UnknownBinIsATraceError) {
  const Config cfg = Config::make(1, Rational(2));
  try {
    trace::run_trace({Event::arrive(1, Rational(1, 2)), Event::fail(2, 40)}, cfg, true);
    FAIL() << "expected TraceError";
  } catch (const TraceError& e) {
    EXPECT_EQ(e.seq(), 2);
  }
}

TEST(Trace, EmptyTrace) {
  const auto r = trace::run_trace({}, Config::make(1, Rational(3, 2)), true);
  EXPECT_EQ(r.metrics.bins, 0);
  EXPECT_TRUE(r.state.bins.empty());
  EXPECT_TRUE(r.log.empty());
}

TEST(Trace, FourItemTimeline) {
  const Config cfg = Config::make(2, Rational(2));
  trace::Simulator sim(cfg, true);
  for (const char* x : {"2/5", "3/5", "3/10", "1/5"}) sim.arrive(Rational::parse(x));
  const BinId b1 = sim.state().replicas[static_cast<std::size_t>(sim.state().items[0].replicas[0])].bin;
  const BinId b2 = sim.state().replicas[static_cast<std::size_t>(sim.state().items[1].replicas[0])].bin;
  const std::size_t placed = sim.log().size();
  EXPECT_EQ(placed, 12u);

  sim.fail(b1);
  sim.fail(b2);
  ASSERT_EQ(sim.log().size(), placed + 2);
  EXPECT_EQ(sim.log()[placed]["direction"], "promote");
  EXPECT_EQ(sim.log()[placed]["from_bin"], b1);
  EXPECT_EQ(sim.log()[placed + 1]["direction"], "promote");
  EXPECT_EQ(sim.state().mapping_h.size(), 2u);

  sim.recover(b1);
  ASSERT_EQ(sim.log().size(), placed + 3);
  EXPECT_EQ(sim.log()[placed + 2]["direction"], "demote");
  EXPECT_EQ(sim.log()[placed + 2]["to_bin"], b1);
  EXPECT_EQ(sim.state().mapping_h.size(), 1u);
  EXPECT_TRUE(sim.metrics().violations.empty());
}

TEST(Trace, GenerationIsDeterministic) {
  const Config cfg = Config::make(2, Rational(2));
  for (auto mode : {trace::GenMode::Random, trace::GenMode::AdversarialActiveKill, trace::GenMode::ClassBoundary}) {
    const auto a = trace::to_jsonl(trace::generate_trace(mode, 80, 7, cfg));
    const auto b = trace::to_jsonl(trace::generate_trace(mode, 80, 7, cfg));
    EXPECT_EQ(a, b);
    if (mode != trace::GenMode::AdversarialActiveKill) {
      EXPECT_NE(a, trace::to_jsonl(trace::generate_trace(mode, 80, 8, cfg))) << trace::to_string(mode);
    }
  }
}

TEST(Trace, ReplayIsByteIdentical) {
  const Config cfg = Config::make(3, Rational(3, 2));
  const auto t = trace::generate_trace(trace::GenMode::Random, 150, 21, cfg);
  EXPECT_EQ(snapshot_string(trace::run_trace(t, cfg, false).state), snapshot_string(trace::run_trace(t, cfg, true).state));
}

TEST(Trace, GeneratedTracesRespectTheFailureModel) {
  for (int f = 1; f <= 3; ++f) {
    const Config cfg = Config::make(f, Rational(2));
    const auto t = trace::generate_trace(trace::GenMode::Random, 200, 100 + f, cfg);
    EXPECT_NO_THROW(trace::validate_trace(t, cfg));
    const auto r = trace::run_trace(t, cfg, true);
    EXPECT_TRUE(r.metrics.violations.empty());
    EXPECT_LE(r.metrics.max_failed, f);
    EXPECT_EQ(r.metrics.arrivals, 200);
  }
}

TEST(Trace, ClassBoundaryModeHitsOneHalf) {
  const Config cfg = Config::make(1, Rational(2));
  const auto t = trace::generate_trace(trace::GenMode::ClassBoundary, 300, 4, cfg);
  bool half = false;
  for (const Event& e : t) {
    if (e.kind == trace::EventKind::Arrive && e.size == Rational(1, 2)) half = true;
  }
  EXPECT_TRUE(half);
  EXPECT_EQ(classify(Rational(1, 2), cfg), (ClassPair{2, 3}));
}

TEST(Trace, AdversarialModeSaturatesIncompleteGroups) {
  for (int f = 1; f <= 3; ++f) {
    const Config cfg = Config::make(f, Rational(2));
    const ClassPair target = classify(Rational(3, 10), cfg);
    trace::Simulator sim(cfg, true);
    int peak = 0;
    for (const Event& e : trace::generate_trace(trace::GenMode::AdversarialActiveKill, 12, 1, cfg)) {
      sim.apply(e);
      peak = std::max(peak, incomplete_groups(sim.state(), target));
    }
    EXPECT_EQ(peak, f + 1);
    EXPECT_TRUE(sim.metrics().violations.empty());
  }
}

TEST(Trace, SmallOnlyTracesStayHealthy) {
  const Config cfg = Config::make(2, Rational(3, 2));
  trace::GenOptions opt;
  opt.max_size = Rational(1, 7);
  opt.grid = 10000;
  const auto r = trace::run_trace(trace::generate_trace(trace::GenMode::Random, 300, 3, cfg, opt), cfg, true);
  EXPECT_TRUE(r.metrics.violations.empty()) << (r.metrics.violations.empty() ? "" : r.metrics.violations.front());
}
