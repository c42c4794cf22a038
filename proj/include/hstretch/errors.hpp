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

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hstretch {

// Bad arguments: sizes outside (0,1], f < 1, eta <= 1, malformed snapshots.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An event sequence that breaks the failure model (more than f concurrent
// failures, recovering a live bin, unknown bin ids).
class TraceError : public std::runtime_error {
 public:
  TraceError(std::int64_t seq, const std::string& what)
      : std::runtime_error("event " + std::to_string(seq) + ": " + what), seq_(seq) {}
  explicit TraceError(const std::string& what) : std::runtime_error(what), seq_(-1) {}

  std::int64_t seq() const { return seq_; }

 private:
  std::int64_t seq_;
};

// The engine reached a state its own invariants forbid. Always a bug.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Instance too large for the exhaustive oracle.
class LimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hstretch
