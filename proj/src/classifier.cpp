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

#include "hstretch/classifier.hpp"

#include <algorithm>

#include "hstretch/errors.hpp"

namespace hstretch {

int last_regular_standby_class(const Config& cfg) {
  return static_cast<int>((Rational(6) * cfg.eta).floor());
}

int small_standby_class(const Config& cfg) { return last_regular_standby_class(cfg) + 1; }

ClassPair small_class(const Config& cfg) { return {kSmallPrimaryClass, small_standby_class(cfg)}; }

bool is_small(const ClassPair& c, const Config& cfg) { return c == small_class(cfg); }

ClassPair classify(const Rational& size, const Config& cfg) {
  if (size <= Rational(0) || size > Rational(1)) {
    throw InputError("item size must lie in (0,1], got " + size.str());
  }
  const Rational& eta = cfg.eta;
  ClassPair out;

  out.i = 0;
  for (int i = 1; i <= 5; ++i) {
    if (size > Rational(1, i + 1)) {
      out.i = i;
      break;
    }
  }
  if (out.i == 0) {
    out.i = size > Rational(1) / (Rational(7) - Rational(1) / eta) ? 6 : kSmallPrimaryClass;
  }

  const int last = last_regular_standby_class(cfg);
  const Rational standby = size / eta;
  out.j = 0;
  for (int j = 1; j <= last - 1; ++j) {
    if (standby > Rational(1) / (eta + Rational(j))) {
      out.j = j;
      break;
    }
  }
  if (out.j == 0) {
    out.j = standby > Rational(1) / (Rational(7) * eta - Rational(1)) ? last : last + 1;
  }
  return out;
}

ClassConstants ClassConstants::of(const Config& cfg) {
  ClassConstants c;
  c.config = cfg;
  const Rational& eta = cfg.eta;
  const Rational seven_eta_minus_one = Rational(7) * eta - Rational(1);
  c.small_primary_bound = Rational(1) / (Rational(7) - Rational(1) / eta);
  c.small_standby_bound = Rational(1) / seven_eta_minus_one;
  c.sr_primary_capacity = Rational(2) * c.small_primary_bound;
  c.sr_standby_capacity = Rational(2) / seven_eta_minus_one;
  c.small_mirror_reserved = Rational(2) * (eta - Rational(1)) / seven_eta_minus_one;
  c.small_open_threshold = Rational(2) * eta / seven_eta_minus_one;
  return c;
}

Rational ClassConstants::primary_spot_size(int i) const { return Rational(1, i); }

Rational ClassConstants::standby_spot_size(int j) const {
  return Rational(1) / (Rational(j) + config.eta - Rational(1));
}

Rational ClassConstants::standby_reserved(int j) const {
  return (config.eta - Rational(1)) / (Rational(j) + config.eta - Rational(1));
}

std::vector<Rational> class_boundary_sizes(const Config& cfg) {
  const Rational& eta = cfg.eta;
  std::vector<Rational> out;
  for (int i = 1; i <= 6; ++i) out.emplace_back(1, i);
  out.push_back(Rational(1) / (Rational(7) - Rational(1) / eta));
  const int last = last_regular_standby_class(cfg);
  // Standby endpoints 1/(eta + j - 1) for j = 1..last, mapped back to primary sizes.
  for (int j = 1; j <= last; ++j) {
    Rational primary = eta / (eta + Rational(j - 1));
    if (primary > Rational(0) && primary <= Rational(1)) out.push_back(primary);
  }
  out.push_back(eta / (Rational(7) * eta - Rational(1)));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace hstretch
