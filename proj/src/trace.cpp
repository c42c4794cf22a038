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

#include "hstretch/trace.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <random>
#include <set>
#include <sstream>

#include "hstretch/adjuster.hpp"
#include "hstretch/checker.hpp"
#include "hstretch/classifier.hpp"
#include "hstretch/engine.hpp"
#include "hstretch/errors.hpp"

namespace hstretch::trace {

std::string to_jsonl(const Event& e) {
  Json j;
  j["seq"] = e.seq;
  switch (e.kind) {
    case EventKind::Arrive:
      j["ev"] = "arrive";
      j["size"] = e.size.str();
      break;
    case EventKind::Fail:
      j["ev"] = "fail";
      j["bin"] = e.bin;
      break;
    case EventKind::Recover:
      j["ev"] = "recover";
      j["bin"] = e.bin;
      break;
  }
  return j.dump();
}

std::string to_jsonl(const Trace& t) {
  std::string out;
  for (const Event& e : t) {
    out += to_jsonl(e);
    out += '\n';
  }
  return out;
}

Trace parse_jsonl(std::istream& in) {
  Trace t;
  std::string line;
  std::int64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) continue;
    const std::string where = "line " + std::to_string(lineno);
    Json j;
    try {
      j = Json::parse(line);
    } catch (const std::exception& e) {
      throw TraceError(where + ": not JSON");
    }
    if (!j.is_object() || !j.contains("seq") || !j["seq"].is_number_integer()) {
      throw TraceError(where + ": event needs an integer \"seq\"");
    }
    const std::int64_t seq = j["seq"].get<std::int64_t>();
    if (!j.contains("ev") || !j["ev"].is_string()) throw TraceError(seq, "event needs \"ev\"");
    const std::string ev = j["ev"].get<std::string>();
    if (ev == "arrive") {
      if (!j.contains("size") || !(j["size"].is_string() || j["size"].is_number_integer())) {
        throw TraceError(seq, "arrive needs \"size\"");
      }
      try {
        Rational size = j["size"].is_string() ? Rational::parse(j["size"].get<std::string>())
                                              : Rational(j["size"].get<std::int64_t>());
        t.push_back(Event::arrive(seq, size));
      } catch (const std::exception& e) {
        throw TraceError(seq, std::string("bad size: ") + e.what());
      }
    } else if (ev == "fail" || ev == "recover") {
      if (!j.contains("bin") || !j["bin"].is_number_integer()) throw TraceError(seq, ev + " needs an integer \"bin\"");
      const BinId bin = j["bin"].get<BinId>();
      t.push_back(ev == "fail" ? Event::fail(seq, bin) : Event::recover(seq, bin));
    } else {
      throw TraceError(seq, "unknown event kind '" + ev + "'");
    }
  }
  return t;
}

Trace parse_jsonl(const std::string& text) {
  std::istringstream in(text);
  return parse_jsonl(in);
}

void validate_trace(const Trace& t, const Config& cfg) {
  std::set<BinId> down;
  std::optional<std::int64_t> last;
  for (const Event& e : t) {
    if (last && e.seq <= *last) throw TraceError(e.seq, "seq not increasing");
    last = e.seq;
    switch (e.kind) {
      case EventKind::Arrive:
        if (e.size <= Rational(0) || e.size > Rational(1)) throw TraceError(e.seq, "size " + e.size.str() + " outside (0,1]");
        break;
      case EventKind::Fail:
        if (e.bin < 0) throw TraceError(e.seq, "negative bin id");
        if (down.count(e.bin)) throw TraceError(e.seq, "bin " + std::to_string(e.bin) + " already failed");
        if (static_cast<int>(down.size()) >= cfg.f) {
          throw TraceError(e.seq, "more than f=" + std::to_string(cfg.f) + " bins failed at once");
        }
        down.insert(e.bin);
        break;
      case EventKind::Recover:
        if (!down.count(e.bin)) throw TraceError(e.seq, "bin " + std::to_string(e.bin) + " is not failed");
        down.erase(e.bin);
        break;
    }
  }
}

Json to_json(const Metrics& m) {
  Json j;
  j["bins"] = m.bins;
  j["events"] = m.events;
  j["arrivals"] = m.arrivals;
  j["failures"] = m.failures;
  j["recoveries"] = m.recoveries;
  j["max_failed"] = m.max_failed;
  j["violations"] = m.violations;
  j["violation_seq"] = m.violation_seq ? Json(*m.violation_seq) : Json(nullptr);
  return j;
}

Simulator::Simulator(Config cfg, bool check_every_event) : state_(std::move(cfg)), check_(check_every_event) {}

std::vector<std::string> Simulator::apply(const Event& e) {
  next_seq_ = e.seq;
  try {
    switch (e.kind) {
      case EventKind::Arrive:
        arrive(e.size);
        break;
      case EventKind::Fail:
        fail(e.bin);
        break;
      case EventKind::Recover:
        recover(e.bin);
        break;
    }
  } catch (const TraceError& err) {
    if (err.seq() >= 0) throw;
    throw TraceError(e.seq, err.what());
  } catch (const InputError& err) {
    throw TraceError(e.seq, err.what());
  }
  return metrics_.violation_seq == e.seq ? metrics_.violations : std::vector<std::string>{};
}

ItemId Simulator::arrive(const Rational& size) {
  const std::int64_t seq = next_seq_;
  engine::ArrivalReport report = engine::on_arrive(state_, size);
  for (const engine::Placement& p : report.placements) log_.push_back(placement_record(seq, p));
  last_placements_ = std::move(report.placements);
  ++metrics_.arrivals;
  after_event(seq);
  return report.item;
}

void Simulator::fail(BinId bin) {
  const std::int64_t seq = next_seq_;
  for (const adjuster::RoleChange& c : adjuster::on_fail(state_, bin)) log_.push_back(role_change_record(seq, c));
  ++metrics_.failures;
  metrics_.max_failed = std::max(metrics_.max_failed, static_cast<int>(state_.failed_bins.size()));
  after_event(seq);
}

void Simulator::recover(BinId bin) {
  const std::int64_t seq = next_seq_;
  for (const adjuster::RoleChange& c : adjuster::on_recover(state_, bin)) log_.push_back(role_change_record(seq, c));
  ++metrics_.recoveries;
  after_event(seq);
}

void Simulator::after_event(std::int64_t seq) {
  ++metrics_.events;
  metrics_.bins = static_cast<int>(state_.bins.size());
  next_seq_ = seq + 1;
  if (!check_ || metrics_.violation_seq) return;
  auto violations = checker::check_runtime_invariants(state_);
  if (!violations.empty()) {
    metrics_.violations = std::move(violations);
    metrics_.violation_seq = seq;
  }
}

std::string Simulator::log_jsonl() const {
  std::string out;
  for (const Json& j : log_) {
    out += j.dump();
    out += '\n';
  }
  return out;
}

RunResult run_trace(const Trace& t, const Config& cfg, bool check_every_event) {
  validate_trace(t, cfg);
  Simulator sim(cfg, check_every_event);
  for (const Event& e : t) {
    if (!sim.apply(e).empty()) break;
  }
  return {sim.state(), sim.metrics(), sim.log()};
}

GenMode parse_mode(const std::string& name) {
  if (name == "random") return GenMode::Random;
  if (name == "adversarial-active-kill") return GenMode::AdversarialActiveKill;
  if (name == "class-boundary") return GenMode::ClassBoundary;
  throw InputError("unknown generator mode '" + name + "'");
}

std::string to_string(GenMode m) {
  switch (m) {
    case GenMode::Random: return "random";
    case GenMode::AdversarialActiveKill: return "adversarial-active-kill";
    case GenMode::ClassBoundary: return "class-boundary";
  }
  return "unknown";
}

namespace {

class Generator {
 public:
  Generator(std::uint64_t seed, const Config& cfg) : rng_(seed), sim_(cfg), cfg_(cfg) {}

  void arrive(const Rational& size) { push(Event::arrive(seq_, size)); }

  void fail(BinId bin) {
    push(Event::fail(seq_, bin));
    down_.push_back(bin);
  }

  void recover(BinId bin) {
    push(Event::recover(seq_, bin));
    down_.erase(std::find(down_.begin(), down_.end(), bin));
  }

  // One random fail or recover, respecting the f limit.
  void churn_step() {
    const auto& bins = sim_.state().bins;
    const bool can_fail = static_cast<int>(down_.size()) < cfg_.f && down_.size() < bins.size();
    const bool can_recover = !down_.empty();
    if (!can_fail && !can_recover) return;
    const bool do_fail = can_fail && (!can_recover || coin(0.5));
    if (do_fail) {
      std::vector<BinId> live;
      for (const Bin& b : bins) {
        if (!b.failed) live.push_back(b.id);
      }
      fail(live[pick(live.size())]);
    } else {
      recover(down_[pick(down_.size())]);
    }
  }

  bool coin(double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p; }
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_); }

  const std::deque<BinId>& down() const { return down_; }
  const Simulator& sim() const { return sim_; }
  Trace take() { return std::move(trace_); }

 private:
  void push(const Event& e) {
    sim_.apply(e);
    trace_.push_back(e);
    ++seq_;
  }

  std::mt19937_64 rng_;
  Simulator sim_;
  Config cfg_;
  Trace trace_;
  std::deque<BinId> down_;
  std::int64_t seq_ = 1;
};

}  // namespace

Trace generate_trace(GenMode mode, int n, std::uint64_t seed, const Config& cfg, const GenOptions& options) {
  if (n < 0) throw InputError("n must be non-negative");
  Generator g(seed, cfg);
  switch (mode) {
    case GenMode::Random: {
      if (options.grid < 1) throw InputError("grid must be positive");
      const std::int64_t top = (options.max_size * Rational(options.grid)).floor();
      if (top < 1) throw InputError("max_size too small for the size grid");
      for (int k = 0; k < n; ++k) {
        while (g.coin(options.churn)) g.churn_step();
        g.arrive(Rational(g.uniform(1, std::min(top, options.grid)), options.grid));
      }
      break;
    }
    case GenMode::ClassBoundary: {
      const std::vector<Rational> sizes = class_boundary_sizes(cfg);
      for (int k = 0; k < n; ++k) {
        while (g.coin(options.churn)) g.churn_step();
        g.arrive(sizes[g.pick(sizes.size())]);
      }
      break;
    }
    case GenMode::AdversarialActiveKill: {
      if (options.target_size <= Rational(0) || options.target_size > Rational(1)) {
        throw InputError("target size outside (0,1]");
      }
      for (int k = 0; k < n; ++k) {
        g.arrive(options.target_size);
        if (static_cast<int>(g.down().size()) < cfg.f) {
          g.fail(g.sim().last_placements().front().bin);
        } else {
          g.recover(g.down().front());
        }
      }
      break;
    }
  }
  return g.take();
}

}  // namespace hstretch::trace
