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

#ifndef APPT_GATE_HPP
#define APPT_GATE_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "appt/crypto.hpp"
#include "appt/delivery.hpp"
#include "appt/domain.hpp"
#include "appt/otp.hpp"
#include "appt/store.hpp"

namespace appt {

/// Human-verification predicate gating OTP issuance (the anti-flooding
/// defense). Pluggable so a real challenge service can replace the
/// test implementation.
class Challenge {
 public:
  virtual ~Challenge() = default;
  virtual bool verify(const std::string& answer) const = 0;
};

/// Accepts exactly one configured answer. Deterministic, for tests and
/// the harness.
class StaticChallenge final : public Challenge {
 public:
  explicit StaticChallenge(std::string expected)
      : expected_(std::move(expected)) {}

  bool verify(const std::string& answer) const override {
    return answer == expected_;
  }

 private:
  std::string expected_;
};

struct GateConfig {
  Instant token_ttl_s = 900;  // the 15-minute token lifetime
  otp::OtpPolicy otp_policy;
  int rate_limit = 5;
  int rate_window_s = 3600;
  bool require_secure_transport = true;
};

// Throws Error{ValidationFailed} unless token_ttl_s >= 1 and
// rate_limit >= 1 (and the OTP policy itself is valid).
void validate(const GateConfig& config);

/// Result of a successful OTP request: the encrypted machine-binding
/// token destined for the cookie, plus the delivery receipt.
struct OtpGrant {
  EncryptedToken token;
  std::uint64_t receipt = 0;
};

/// The protocol core. Flow A (request_otp) issues a one-time password
/// over an out-of-band channel and mints an encrypted token bound to
/// the requesting machine. Flow B (authenticate) admits a login only
/// when the spent OTP and the presented token agree on who and where.
///
/// The gate holds immutable config and keys; all cross-call state lives
/// in the store, so concurrent calls are safe.
class Gate {
 public:
  Gate(Store& store, Outbox& outbox, crypto::Keypair keypair,
       GateConfig config, const Challenge& challenge,
       crypto::RandomSource& rng);

  // Flow A. Check order: challenge, rate limits (per user and per IP),
  // permanent credential. Only then is the OTP generated, stored,
  // dispatched, and the token minted for (username, client_ip, now).
  // Failures throw Error with code ChallengeFailed, RateLimited,
  // BadCredentials (unknown user is indistinguishable from a wrong
  // password), or DeliveryFailed; a failed request leaves store rows
  // and the outbox untouched.
  OtpGrant request_otp(const std::string& username,
                       const std::string& permanent_secret, Channel channel,
                       const std::string& challenge_answer,
                       const std::string& client_ip, Instant now);

  // Flow B. The user's Active OTP row is spent first, before any
  // comparison, so a captured OTP dies on the first attempt no matter
  // how that attempt fails. Then, in order: OTP hash, token presence,
  // decryptability, transport security, expiry, token name, username,
  // client IP. Never throws; every failure is a Denied decision with
  // the first failing reason.
  AuthDecision authenticate(const std::string& username,
                            const std::string& otp,
                            const std::optional<EncryptedToken>& token,
                            const std::string& client_ip,
                            bool transport_secure, Instant now);

  const GateConfig& config() const { return config_; }
  const crypto::Keypair& keypair() const { return keypair_; }

 private:
  Store& store_;
  Outbox& outbox_;
  crypto::Keypair keypair_;
  GateConfig config_;
  const Challenge& challenge_;
  crypto::RandomSource& rng_;
};

}  // namespace appt

#endif  // APPT_GATE_HPP
