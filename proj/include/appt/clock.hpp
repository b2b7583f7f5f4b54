// Copyright 2026 The APPT Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef APPT_CLOCK_HPP
#define APPT_CLOCK_HPP

#include <atomic>
#include <chrono>

#include "appt/domain.hpp"

namespace appt {

/// Injectable time source. Expiry logic never reads the wall clock
/// directly, so every time-dependent path is deterministic under test.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual Instant now() const = 0;
};

class SystemClock final : public Clock {
 public:
  Instant now() const override {
    return std::chrono::duration_cast<std::chrono::seconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
  }
};

/// Programmable clock. Reads are safe from any thread; advancement is
/// expected to be serialized by the test driver.
class TestClock final : public Clock {
 public:
  explicit TestClock(Instant start = 0) : now_(start) {}

  Instant now() const override { return now_.load(std::memory_order_acquire); }

  void advance(Instant seconds) {
    now_.fetch_add(seconds, std::memory_order_acq_rel);
  }

 private:
  std::atomic<Instant> now_;
};

}  // namespace appt

#endif  // APPT_CLOCK_HPP
