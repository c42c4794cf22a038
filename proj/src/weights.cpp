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

#include "hstretch/weights.hpp"

#include <algorithm>

#include "hstretch/classifier.hpp"

namespace hstretch::weights {
namespace {

const Rational kThreeHalves(3, 2);
const Rational kSevenQuarters(7, 4);

ClassPair class_of(Role role, const Rational& size, const Config& cfg) {
  return classify(role == Role::Primary ? size : size * cfg.eta, cfg);
}

}  // namespace

Rational replica_weight(Role role, const Rational& size, const Config& cfg) {
  const ClassPair c = class_of(role, size, cfg);
  if (role == Role::Primary) return c.i < kSmallPrimaryClass ? Rational(1, c.i) : kThreeHalves * size;
  return c.j <= last_regular_standby_class(cfg) ? Rational(1, c.j) : kThreeHalves * size;
}

Rational density_cap(Role role, const Rational& size, const Config& cfg) {
  const ClassPair c = class_of(role, size, cfg);
  if (role == Role::Primary) return c.i < kSmallPrimaryClass ? Rational(c.i + 1, c.i) : kThreeHalves;
  return c.j <= last_regular_standby_class(cfg) ? (cfg.eta + Rational(c.j)) / Rational(c.j) : kThreeHalves;
}

Rational item_weight(const Rational& size, const Config& cfg) {
  return replica_weight(Role::Primary, size, cfg) +
         Rational(cfg.f) * replica_weight(Role::Standby, size / cfg.eta, cfg);
}

Rational exception_bound(const Config& cfg) {
  const Rational eta = cfg.eta;
  const Rational f(cfg.f);
  return Rational(216) * eta * (f + Rational(1)) * (eta + f) + (Rational(5) * eta + Rational(1) + f) +
         f * (f + Rational(1));
}

WeightReport audit_algorithm_packing(const StaticPacking& packing) {
  WeightReport r;
  r.exception_bound = exception_bound(packing.config);
  for (const StaticBin& b : packing.bins) {
    Rational w;
    for (const StaticReplica& rep : b.contents) w += replica_weight(rep.role, rep.size, packing.config);
    r.bins.push_back({b.id, w});
    r.total += w;
    if (w < Rational(1)) r.exception_bins.push_back(b.id);
  }
  r.bin_count = static_cast<int>(packing.bins.size());
  r.exceptions_within_bound = Rational(static_cast<std::int64_t>(r.exception_bins.size())) <= r.exception_bound;
  r.count_within_bound = Rational(r.bin_count) <= r.total + r.exception_bound;
  return r;
}

std::string to_string(OptBinCase c) {
  switch (c) {
    case OptBinCase::NoStandbyWithClassOne: return "no_standby_class1_primary";
    case OptBinCase::NoStandby: return "no_standby";
    case OptBinCase::RegularStandbyClassOne: return "regular_standby_j1";
    case OptBinCase::RegularStandbyWithClassOne: return "regular_standby_j2plus_class1_primary";
    case OptBinCase::RegularStandby: return "regular_standby_j2plus";
    case OptBinCase::SmallStandbyWithClassOne: return "small_standby_class1_primary";
    case OptBinCase::SmallStandby: return "small_standby";
  }
  return "unknown";
}

OptBinAudit audit_opt_bin(const std::vector<StaticReplica>& contents, const Config& cfg) {
  OptBinAudit a;
  bool class_one = false;
  bool any_standby = false;
  int min_regular_j = 0;
  Rational largest_standby;
  const int last = last_regular_standby_class(cfg);
  for (const StaticReplica& r : contents) {
    a.weight += replica_weight(r.role, r.size, cfg);
    a.load += r.size;
    const ClassPair c = class_of(r.role, r.size, cfg);
    if (r.role == Role::Primary) {
      class_one = class_one || c.i == 1;
      continue;
    }
    any_standby = true;
    largest_standby = std::max(largest_standby, r.size);
    if (c.j <= last && (min_regular_j == 0 || c.j < min_regular_j)) min_regular_j = c.j;
  }

  if (!any_standby) {
    a.kind = class_one ? OptBinCase::NoStandbyWithClassOne : OptBinCase::NoStandby;
  } else if (min_regular_j == 1) {
    a.kind = OptBinCase::RegularStandbyClassOne;
  } else if (min_regular_j > 1) {
    a.kind = class_one ? OptBinCase::RegularStandbyWithClassOne : OptBinCase::RegularStandby;
  } else {
    a.kind = class_one ? OptBinCase::SmallStandbyWithClassOne : OptBinCase::SmallStandby;
  }
  switch (a.kind) {
    case OptBinCase::RegularStandbyClassOne:
      a.case_bound = (Rational(3) * cfg.eta + Rational(4)) / (Rational(2) * cfg.eta + Rational(2));
      break;
    case OptBinCase::NoStandby:
    case OptBinCase::RegularStandby:
    case OptBinCase::SmallStandby:
      a.case_bound = kThreeHalves;
      break;
    default:
      a.case_bound = kSevenQuarters;
  }

  const Rational slack = Rational(1) - a.load;
  a.headroom = slack >= Rational(0) && slack >= (cfg.eta - Rational(1)) * largest_standby;
  if (a.headroom) a.within_bound = a.weight <= kSevenQuarters;
  return a;
}

Json to_json(const WeightReport& report) {
  Json j;
  Json bins = Json::array();
  for (const BinWeight& b : report.bins) bins.push_back(Json{{"bin", b.bin}, {"weight", b.weight.str()}});
  j["bin_count"] = report.bin_count;
  j["total_weight"] = report.total.str();
  j["exception_bins"] = report.exception_bins;
  j["exception_count"] = report.exception_bins.size();
  j["exception_bound"] = report.exception_bound.str();
  j["exceptions_within_bound"] = report.exceptions_within_bound;
  j["count_within_bound"] = report.count_within_bound;
  j["ok"] = report.ok();
  j["bins"] = std::move(bins);
  return j;
}

Json to_json(const OptBinAudit& audit) {
  Json j;
  j["weight"] = audit.weight.str();
  j["load"] = audit.load.str();
  j["case"] = to_string(audit.kind);
  j["case_bound"] = audit.case_bound.str();
  j["headroom"] = audit.headroom;
  j["within_bound"] = audit.within_bound ? Json(*audit.within_bound) : Json(nullptr);
  return j;
}

}  // namespace hstretch::weights
