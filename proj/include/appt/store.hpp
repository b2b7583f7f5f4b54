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

#ifndef APPT_STORE_HPP
#define APPT_STORE_HPP

#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "appt/domain.hpp"

namespace appt {

struct RateKey {
  enum class Scope { PerUser, PerIp };

  Scope scope;
  std::string value;  // non-empty

  bool operator<(const RateKey& other) const {
    return std::tie(scope, value) < std::tie(other.scope, other.value);
  }
};

/// In-process store for the user table, the OTP table, and the
/// request-rate counters. One mutex serializes everything, which makes
/// issue/consume atomic per user (and globally) without further
/// machinery. Optional binary snapshots persist users and OTP rows;
/// rate counters are runtime-only.
class Store {
 public:
  Store() = default;

  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  // Validates, then inserts or replaces by username.
  void upsert_user(const UserRecord& user);

  std::optional<UserRecord> lookup_user(const std::string& username) const;

  // Expires any prior Active row for the user, then appends a fresh
  // Active row, atomically. Throws Error{UnknownUser}.
  void issue_otp(const std::string& username, Bytes otp_hash,
                 std::string token_name, Instant issued_at);

  // Atomically expires the user's Active row and returns its
  // pre-consumption snapshot. This runs before any OTP or token
  // comparison; spending the row on first attempt is the anti-replay
  // mechanism. Throws Error{UnknownUser} when the user does not exist
  // and Error{OtpAlreadyUsed} when there is no Active row to spend.
  OtpRecord consume_otp(const std::string& username);

  // Records the request, then answers whether the count for this key
  // within (now - window_s, now] is still within the limit. Denied
  // requests count toward the window too.
  bool rate_check(const RateKey& key, Instant now, int limit, int window_s);

  // Introspection for tests and the harness.
  std::optional<OtpRecord> latest_otp(const std::string& username) const;
  std::vector<OtpRecord> otp_history(const std::string& username) const;
  std::size_t active_otp_count(const std::string& username) const;
  std::size_t user_count() const;

  // Snapshot persistence. Loading replaces current users and OTP rows;
  // a missing file loads an empty store. Format documented in the
  // repository README.
  void save_snapshot(const std::string& path) const;
  void load_snapshot(const std::string& path);

 private:
  mutable std::mutex mu_;
  std::unordered_map<std::string, UserRecord> users_;
  std::unordered_map<std::string, std::vector<OtpRecord>> otp_rows_;
  std::map<RateKey, std::deque<Instant>> rate_log_;
};

}  // namespace appt

#endif  // APPT_STORE_HPP
