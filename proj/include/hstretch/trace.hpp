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

// Event traces and the simulation loop.
//
// A trace is JSONL, one event per line:
//
//   {"seq":1,"ev":"arrive","size":"3/5"}
//   {"seq":2,"ev":"fail","bin":4}
//   {"seq":3,"ev":"recover","bin":4}
//
// Bin ids are the engine's creation-order ids.

#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "hstretch/model.hpp"
#include "hstretch/snapshot.hpp"

namespace hstretch::trace {

enum class EventKind { Arrive, Fail, Recover };

struct Event {
  std::int64_t seq = 0;
  EventKind kind = EventKind::Arrive;
  Rational size;  // Arrive
  BinId bin = 0;  // Fail, Recover

  static Event arrive(std::int64_t seq, Rational size) { return {seq, EventKind::Arrive, size, 0}; }
  static Event fail(std::int64_t seq, BinId bin) { return {seq, EventKind::Fail, Rational(), bin}; }
  static Event recover(std::int64_t seq, BinId bin) { return {seq, EventKind::Recover, Rational(), bin}; }

  friend bool operator==(const Event&, const Event&) = default;
};

using Trace = std::vector<Event>;

std::string to_jsonl(const Event& e);
std::string to_jsonl(const Trace& t);
/// Throws TraceError (with the line's seq when known) on malformed lines.
Trace parse_jsonl(std::istream& in);
Trace parse_jsonl(const std::string& text);

/// Model-level checks that need no engine: strictly increasing seq, arrival
/// sizes in (0,1], no fail of a failed bin, no recover of a live bin, at most
/// f bins down at any prefix. Throws TraceError naming the first bad event.
void validate_trace(const Trace& t, const Config& cfg);

struct Metrics {
  int bins = 0;
  std::int64_t events = 0;
  std::int64_t arrivals = 0;
  std::int64_t failures = 0;
  std::int64_t recoveries = 0;
  int max_failed = 0;
  std::vector<std::string> violations;
  std::optional<std::int64_t> violation_seq;  // first event after which an invariant broke
};

Json to_json(const Metrics& m);

/// Owns one packing state and feeds events to the engine and adjuster.
class Simulator {
 public:
  explicit Simulator(Config cfg, bool check_every_event = false);

  /// Applies one event. Returns the invariant violations found after it
  /// (always empty unless checking is on). Throws TraceError when the event
  /// does not fit the current state.
  std::vector<std::string> apply(const Event& e);

  ItemId arrive(const Rational& size);
  void fail(BinId bin);
  void recover(BinId bin);

  const PackingState& state() const { return state_; }
  const std::vector<Json>& log() const { return log_; }
  std::string log_jsonl() const;
  const Metrics& metrics() const { return metrics_; }

  /// Records produced by the last arrival (engine placements).
  const std::vector<engine::Placement>& last_placements() const { return last_placements_; }

 private:
  void after_event(std::int64_t seq);

  PackingState state_;
  bool check_;
  std::vector<Json> log_;
  std::vector<engine::Placement> last_placements_;
  Metrics metrics_;
  std::int64_t next_seq_ = 1;
  std::int64_t record_id_ = 0;
};

struct RunResult {
  PackingState state;
  Metrics metrics;
  std::vector<Json> log;
};

/// Validates, then replays `t`. Stops at the first event that leaves
/// invariant violations behind (only looked for when `check_every_event`).
RunResult run_trace(const Trace& t, const Config& cfg, bool check_every_event);

enum class GenMode { Random, AdversarialActiveKill, ClassBoundary };

GenMode parse_mode(const std::string& name);
std::string to_string(GenMode m);

struct GenOptions {
  std::int64_t grid = 1000;       // random sizes are k/grid
  Rational max_size = Rational(1);
  double churn = 0.3;             // chance of a fail/recover step before each arrival
  Rational target_size = Rational(3, 10);  // adversarial mode
};

/// n is the number of arrivals. Deterministic in (mode, n, seed, cfg, options).
Trace generate_trace(GenMode mode, int n, std::uint64_t seed, const Config& cfg, const GenOptions& options = {});

}  // namespace hstretch::trace
