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

#include "hstretch/hstretch.h"

#include <cstdlib>
#include <cstring>
#include <sstream>
#include <string>

#include "hstretch/checker.hpp"
#include "hstretch/classifier.hpp"
#include "hstretch/errors.hpp"
#include "hstretch/oracle.hpp"
#include "hstretch/snapshot.hpp"
#include "hstretch/trace.hpp"
#include "hstretch/weights.hpp"

struct hs_engine {
  hstretch::trace::Simulator sim;
};

namespace {

using namespace hstretch;

thread_local std::string g_last_error;

template <typename Fn>
hs_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return HS_OK;
  } catch (const InputError& e) {
    g_last_error = e.what();
    return HS_ERR_INPUT;
  } catch (const TraceError& e) {
    g_last_error = e.what();
    return HS_ERR_TRACE;
  } catch (const InvariantViolation& e) {
    g_last_error = e.what();
    return HS_ERR_INVARIANT;
  } catch (const LimitExceeded& e) {
    g_last_error = e.what();
    return HS_ERR_LIMIT;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return HS_ERR_INPUT;
  } catch (const nlohmann::json::exception& e) {
    g_last_error = e.what();
    return HS_ERR_INPUT;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return HS_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return HS_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw InputError(std::string(what) + " must not be NULL");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(char** out, const std::string& s) {
  if (out != nullptr) *out = dup(s);
}

Rational rational_arg(const char* text, const char* what) {
  require(text, what);
  try {
    return Rational::parse(text);
  } catch (const std::exception& e) {
    throw InputError(std::string(what) + ": " + e.what());
  }
}

Config config_arg(int f, const char* eta) { return Config::make(f, rational_arg(eta, "eta")); }

std::optional<Config> optional_config(int f, const char* eta) {
  if (f <= 0 || eta == nullptr) return std::nullopt;
  return config_arg(f, eta);
}

std::vector<Rational> sizes_arg(const char* csv) {
  require(csv, "sizes");
  std::vector<Rational> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(rational_arg(tok.c_str(), "size"));
  }
  return out;
}

Json parse_doc(const char* text, const char* what) {
  require(text, what);
  try {
    return Json::parse(text);
  } catch (const std::exception& e) {
    throw InputError(std::string(what) + " is not valid JSON: " + e.what());
  }
}

std::string pretty(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

extern "C" {

const char* hs_last_error(void) { return g_last_error.c_str(); }

void hs_string_free(char* s) { std::free(s); }

const char* hs_version(void) { return "1.0.0"; }

hs_status hs_engine_create(int f, const char* eta, int check_every_event, hs_engine** out) {
  return guarded([&] {
    require(out, "out");
    *out = new hs_engine{trace::Simulator(config_arg(f, eta), check_every_event != 0)};
  });
}

void hs_engine_destroy(hs_engine* engine) { delete engine; }

hs_status hs_engine_arrive(hs_engine* engine, const char* size, int* item_id) {
  return guarded([&] {
    require(engine, "engine");
    const ItemId id = engine->sim.arrive(rational_arg(size, "size"));
    if (item_id != nullptr) *item_id = id;
  });
}

hs_status hs_engine_fail(hs_engine* engine, int bin) {
  return guarded([&] {
    require(engine, "engine");
    engine->sim.fail(bin);
  });
}

hs_status hs_engine_recover(hs_engine* engine, int bin) {
  return guarded([&] {
    require(engine, "engine");
    engine->sim.recover(bin);
  });
}

hs_status hs_engine_bin_count(const hs_engine* engine, int* out) {
  return guarded([&] {
    require(engine, "engine");
    require(out, "out");
    *out = static_cast<int>(engine->sim.state().bins.size());
  });
}

hs_status hs_engine_snapshot(const hs_engine* engine, char** json) {
  return guarded([&] {
    require(engine, "engine");
    require(json, "json");
    *json = dup(snapshot_string(engine->sim.state()));
  });
}

hs_status hs_engine_log(const hs_engine* engine, char** jsonl) {
  return guarded([&] {
    require(engine, "engine");
    require(jsonl, "jsonl");
    *jsonl = dup(engine->sim.log_jsonl());
  });
}

hs_status hs_engine_check(const hs_engine* engine, char** json, int* count) {
  return guarded([&] {
    require(engine, "engine");
    const auto violations = checker::check_runtime_invariants(engine->sim.state());
    if (count != nullptr) *count = static_cast<int>(violations.size());
    emit(json, Json(violations).dump() + "\n");
  });
}

hs_status hs_classify(const char* size, int f, const char* eta, int* primary_class, int* standby_class) {
  return guarded([&] {
    const ClassPair c = classify(rational_arg(size, "size"), config_arg(f, eta));
    if (primary_class != nullptr) *primary_class = c.i;
    if (standby_class != nullptr) *standby_class = c.j;
  });
}

hs_status hs_generate_trace(const char* mode, int n, uint64_t seed, int f, const char* eta, const char* options_json,
                            char** jsonl) {
  return guarded([&] {
    require(mode, "mode");
    require(jsonl, "jsonl");
    const Config cfg = config_arg(f, eta);
    trace::GenOptions opt;
    if (options_json != nullptr) {
      const Json o = parse_doc(options_json, "options");
      if (!o.is_object()) throw InputError("options must be a JSON object");
      if (o.contains("grid")) opt.grid = o["grid"].get<std::int64_t>();
      if (o.contains("max_size")) opt.max_size = rational_arg(o["max_size"].get<std::string>().c_str(), "max_size");
      if (o.contains("churn")) opt.churn = o["churn"].get<double>();
      if (o.contains("target_size")) {
        opt.target_size = rational_arg(o["target_size"].get<std::string>().c_str(), "target_size");
      }
    }
    *jsonl = dup(trace::to_jsonl(trace::generate_trace(trace::parse_mode(mode), n, seed, cfg, opt)));
  });
}

hs_status hs_run_trace(const char* jsonl, int f, const char* eta, int check_every_event, char** snapshot_json,
                       char** log_jsonl, char** metrics_json, int* violations) {
  return guarded([&] {
    require(jsonl, "trace");
    const Config cfg = config_arg(f, eta);
    const trace::RunResult r = trace::run_trace(trace::parse_jsonl(std::string(jsonl)), cfg, check_every_event != 0);
    if (violations != nullptr) *violations = static_cast<int>(r.metrics.violations.size());
    emit(snapshot_json, snapshot_string(r.state));
    if (log_jsonl != nullptr) {
      std::string out;
      for (const Json& j : r.log) out += j.dump() + "\n";
      *log_jsonl = dup(out);
    }
    emit(metrics_json, pretty(trace::to_json(r.metrics)));
  });
}

hs_status hs_validate_snapshot(const char* snapshot_json, int f, const char* eta, int* valid, char** verdict_json) {
  return guarded([&] {
    const StaticPacking p = parse_static(std::string(snapshot_json ? snapshot_json : ""), optional_config(f, eta));
    const checker::StaticVerdict v = checker::check_static_validity(p);
    if (valid != nullptr) *valid = v.valid ? 1 : 0;
    Json j;
    j["valid"] = v.valid;
    j["witness"] = v.witness ? Json(*v.witness) : Json(nullptr);
    j["structural"] = v.structural;
    emit(verdict_json, pretty(j));
  });
}

hs_status hs_optimal_packing(const char* sizes_csv, int f, const char* eta, int max_items, int* bins,
                             char** result_json) {
  return guarded([&] {
    const Config cfg = config_arg(f, eta);
    const auto sizes = sizes_arg(sizes_csv);
    const oracle::OptResult r =
        oracle::optimal_packing(sizes, cfg, max_items > 0 ? max_items : oracle::kDefaultMaxItems);
    if (bins != nullptr) *bins = r.bins;
    Json j;
    j["bins"] = r.bins;
    j["nodes"] = r.nodes;
    j["packing"] = static_json(r.packing);
    emit(result_json, pretty(j));
  });
}

hs_status hs_dedicated_packing(const char* sizes_csv, int f, const char* eta, char** snapshot_json) {
  return guarded([&] {
    const Config cfg = config_arg(f, eta);
    emit(snapshot_json, pretty(static_json(oracle::dedicated_baseline(sizes_arg(sizes_csv), cfg))));
  });
}

hs_status hs_audit_snapshot(const char* snapshot_json, int f, const char* eta, int* ok, char** report_json) {
  return guarded([&] {
    const StaticPacking p = parse_static(std::string(snapshot_json ? snapshot_json : ""), optional_config(f, eta));
    const weights::WeightReport r = weights::audit_algorithm_packing(p);
    if (ok != nullptr) *ok = r.ok() ? 1 : 0;
    emit(report_json, pretty(weights::to_json(r)));
  });
}

hs_status hs_compare(const char* jsonl, int f, const char* eta, const char* algos_csv, int max_items, char** csv) {
  return guarded([&] {
    require(jsonl, "trace");
    require(algos_csv, "algos");
    require(csv, "csv");
    const Config cfg = config_arg(f, eta);
    const trace::Trace t = trace::parse_jsonl(std::string(jsonl));
    std::vector<Rational> sizes;
    for (const trace::Event& e : t) {
      if (e.kind == trace::EventKind::Arrive) sizes.push_back(e.size);
    }
    Rational w;
    for (const Rational& x : sizes) w += weights::item_weight(x, cfg);
    const Rational bound = weights::exception_bound(cfg);

    std::ostringstream out;
    out << "algo,items,bins,w_sigma,w_over_7_4,w_plus_bound\n";
    std::stringstream ss(algos_csv);
    std::string algo;
    while (std::getline(ss, algo, ',')) {
      if (algo.empty()) continue;
      int bins = 0;
      if (algo == "hs") {
        bins = static_cast<int>(trace::run_trace(t, cfg, false).state.bins.size());
      } else if (algo == "dedicated") {
        bins = static_cast<int>(oracle::dedicated_baseline(sizes, cfg).bins.size());
      } else if (algo == "opt") {
        bins = oracle::optimal_packing(sizes, cfg, max_items > 0 ? max_items : oracle::kDefaultMaxItems).bins;
      } else {
        throw InputError("unknown algorithm '" + algo + "'");
      }
      out << algo << ',' << sizes.size() << ',' << bins << ',' << w.str() << ',' << (w / Rational(7, 4)).str() << ','
          << (w + bound).str() << '\n';
    }
    *csv = dup(out.str());
  });
}

}  // extern "C"
