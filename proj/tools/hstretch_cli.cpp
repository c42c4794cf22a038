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

// hstretch: command-line front end over the C interface.
//
// Exit codes: 0 success, 1 validation or audit failure, 2 usage or input error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hstretch/hstretch.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CString {
  char* p = nullptr;
  ~CString() { hs_string_free(p); }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

int status_exit(hs_status s) {
  switch (s) {
    case HS_OK: return kExitOk;
    case HS_ERR_INPUT:
    case HS_ERR_TRACE:
    case HS_ERR_LIMIT: return kExitUsage;
    default: return kExitFailed;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

struct Common {
  int f = 0;
  std::string eta;
  std::string config;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--f", c.f, "Maximum number of concurrently failed bins (>= 1)")->required();
  cmd->add_option("--eta", c.eta, "Primary/standby size ratio, e.g. 2 or 3/2 (> 1)")->required();
  cmd->add_option("--config", c.config, "JSON file whose keys mirror the flags");
}

// Appends "--key value" for every key of the --config file that is not given
// on the command line.
std::vector<std::string> with_config(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k] == "--config" && k + 1 < args.size()) path = args[k + 1];
    if (args[k].rfind("--config=", 0) == 0) path = args[k].substr(9);
  }
  if (path.empty()) return args;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config " + path + ": " + e.what());
  }
  if (!doc.is_object()) throw UsageError("config " + path + " must be a JSON object");
  std::vector<std::string> out = args;
  for (const auto& [key, value] : doc.items()) {
    std::string flag = "--" + key;
    for (char& ch : flag) {
      if (ch == '_') ch = '-';
    }
    bool given = false;
    for (const auto& a : args) given = given || a == flag || a.rfind(flag + "=", 0) == 0;
    if (given) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) out.push_back(flag);
    } else if (value.is_string()) {
      out.push_back(flag);
      out.push_back(value.get<std::string>());
    } else if (value.is_number() || value.is_array()) {
      std::string text;
      if (value.is_array()) {
        for (const auto& v : value) text += (text.empty() ? "" : ",") + (v.is_string() ? v.get<std::string>() : v.dump());
      } else {
        text = value.dump();
      }
      out.push_back(flag);
      out.push_back(text);
    } else {
      throw UsageError("config key '" + key + "' has an unsupported value");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online bin packing with failover replicas: Harmonic-Stretch engine, validity checker, exact oracle"};
  app.require_subcommand(1);
  app.set_version_flag("--version", hs_version());

  Common common;

  auto* classify = app.add_subcommand("classify", "Print the (primary, standby) class of a size");
  std::string size;
  classify->add_option("--size", size, "Primary size in (0,1]")->required();
  add_common(classify, common);

  auto* gen = app.add_subcommand("gen", "Generate an event trace as JSONL");
  std::string mode = "random";
  int n = 100;
  std::uint64_t seed = 1;
  std::int64_t grid = 1000;
  std::string max_size = "1";
  double churn = 0.3;
  std::string target_size = "3/10";
  std::string out_path;
  gen->add_option("--mode", mode, "random | adversarial-active-kill | class-boundary")
      ->check(CLI::IsMember({"random", "adversarial-active-kill", "class-boundary"}));
  gen->add_option("--n", n, "Number of arrivals")->check(CLI::NonNegativeNumber);
  gen->add_option("--seed", seed, "RNG seed");
  gen->add_option("--grid", grid, "Random sizes are k/grid");
  gen->add_option("--max-size", max_size, "Largest random size");
  gen->add_option("--churn", churn, "Chance of a fail/recover step before each arrival")->check(CLI::Range(0.0, 0.95));
  gen->add_option("--target-size", target_size, "Item size for adversarial-active-kill");
  gen->add_option("--out", out_path, "Output file (default stdout)");
  add_common(gen, common);

  auto* pack = app.add_subcommand("pack", "Run a trace through Harmonic-Stretch");
  std::string trace_path;
  bool check_each = false;
  std::string log_path;
  std::string metrics_path;
  pack->add_option("--trace", trace_path, "Trace file (JSONL)")->required();
  pack->add_flag("--check", check_each, "Check runtime invariants after every event");
  pack->add_option("--out", out_path, "Snapshot output (default stdout)");
  pack->add_option("--log", log_path, "Placement and role-change log (JSONL)");
  pack->add_option("--metrics", metrics_path, "Metrics output (default stdout when --out is set)");
  add_common(pack, common);

  auto* validate = app.add_subcommand("validate", "Check a packing snapshot against every failure set of <= f bins");
  std::string packing_path;
  validate->add_option("--packing", packing_path, "Snapshot JSON")->required();
  validate->add_option("--out", out_path, "Verdict output (default stdout)");
  add_common(validate, common);

  auto* opt = app.add_subcommand("opt", "Exact minimum-bin valid packing of a tiny instance");
  std::string sizes;
  int max_n = 5;
  opt->add_option("--sizes", sizes, "Comma-separated sizes, e.g. 3/5,1/2")->required();
  opt->add_option("--max-n", max_n, "Refuse instances with more items")->check(CLI::PositiveNumber);
  opt->add_flag("--dedicated", "Print the dedicated baseline instead");
  opt->add_option("--out", out_path, "Result output (default stdout)");
  add_common(opt, common);

  auto* audit = app.add_subcommand("audit", "Weight audit of an algorithm snapshot");
  audit->add_option("--packing", packing_path, "Snapshot JSON")->required();
  audit->add_option("--out", out_path, "Report output (default stdout)");
  add_common(audit, common);

  auto* compare = app.add_subcommand("compare", "CSV row per algorithm for one trace");
  std::string algos = "hs,dedicated";
  bool with_opt = false;
  compare->add_option("--trace", trace_path, "Trace file (JSONL)")->required();
  compare->add_option("--algos", algos, "Comma-separated: hs, dedicated, opt");
  compare->add_flag("--opt", with_opt, "Add the exact optimum");
  compare->add_option("--max-n", max_n, "Item limit for the optimum")->check(CLI::PositiveNumber);
  compare->add_option("--out", out_path, "CSV output (default stdout)");
  add_common(compare, common);

  std::vector<std::string> args;
  for (int k = argc - 1; k >= 1; --k) args.emplace_back(argv[k]);
  try {
    std::vector<std::string> forward(args.rbegin(), args.rend());
    forward = with_config(forward);
    args.assign(forward.rbegin(), forward.rend());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  const char* eta = common.eta.c_str();
  const int f = common.f;
  auto fail_with = [](hs_status s) {
    std::cerr << "error: " << hs_last_error() << "\n";
    return status_exit(s);
  };

  try {
    if (*classify) {
      int i = 0;
      int j = 0;
      if (hs_status s = hs_classify(size.c_str(), f, eta, &i, &j); s != HS_OK) return fail_with(s);
      std::cout << "i=" << i << " j=" << j << "\n";
      return kExitOk;
    }

    if (*gen) {
      nlohmann::json options{{"grid", grid}, {"max_size", max_size}, {"churn", churn}, {"target_size", target_size}};
      CString out;
      hs_status s = hs_generate_trace(mode.c_str(), n, seed, f, eta, options.dump().c_str(), &out.p);
      if (s != HS_OK) return fail_with(s);
      write_output(out_path, out.str());
      return kExitOk;
    }

    if (*pack) {
      const std::string trace = read_file(trace_path);
      CString snapshot;
      CString log;
      CString metrics;
      int violations = 0;
      hs_status s = hs_run_trace(trace.c_str(), f, eta, check_each ? 1 : 0, &snapshot.p, &log.p, &metrics.p, &violations);
      if (s != HS_OK) return fail_with(s);
      write_output(out_path, snapshot.str());
      if (!log_path.empty()) write_output(log_path, log.str());
      if (!metrics_path.empty()) {
        write_output(metrics_path, metrics.str());
      } else if (!out_path.empty() && out_path != "-") {
        std::cout << metrics.str();
      }
      if (violations > 0) {
        std::cerr << "invariant violations:\n" << metrics.str();
        return kExitFailed;
      }
      return kExitOk;
    }

    if (*validate) {
      const std::string doc = read_file(packing_path);
      CString verdict;
      int valid = 0;
      if (hs_status s = hs_validate_snapshot(doc.c_str(), f, eta, &valid, &verdict.p); s != HS_OK) return fail_with(s);
      write_output(out_path, verdict.str());
      return valid ? kExitOk : kExitFailed;
    }

    if (*opt) {
      CString result;
      hs_status s = HS_OK;
      if (opt->count("--dedicated") > 0) {
        s = hs_dedicated_packing(sizes.c_str(), f, eta, &result.p);
      } else {
        int bins = 0;
        s = hs_optimal_packing(sizes.c_str(), f, eta, max_n, &bins, &result.p);
      }
      if (s != HS_OK) return fail_with(s);
      write_output(out_path, result.str());
      return kExitOk;
    }

    if (*audit) {
      const std::string doc = read_file(packing_path);
      CString report;
      int ok = 0;
      if (hs_status s = hs_audit_snapshot(doc.c_str(), f, eta, &ok, &report.p); s != HS_OK) return fail_with(s);
      write_output(out_path, report.str());
      return ok ? kExitOk : kExitFailed;
    }

    if (*compare) {
      const std::string trace = read_file(trace_path);
      std::string list = algos;
      if (with_opt && list.find("opt") == std::string::npos) list += ",opt";
      CString csv;
      if (hs_status s = hs_compare(trace.c_str(), f, eta, list.c_str(), max_n, &csv.p); s != HS_OK) return fail_with(s);
      write_output(out_path, csv.str());
      return kExitOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
