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

#ifndef APPT_DOMAIN_HPP
#define APPT_DOMAIN_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace appt {

// Whole seconds since an arbitrary epoch. Second precision is all the
// protocol needs; the only time constant anywhere is the 15-minute TTL.
using Instant = std::int64_t;

using Bytes = std::vector<std::uint8_t>;

enum class ErrorCode {
  KeyTooSmall,
  DelimiterInField,
  MalformedClaims,
  PayloadTooLarge,
  DecryptFailed,
  NoPrivateKey,
  InvalidPolicy,
  ValidationFailed,
  UnknownUser,
  OtpAlreadyUsed,
  BadDestination,
  MalformedCookie,
  ChallengeFailed,
  RateLimited,
  BadCredentials,
  DeliveryFailed,
  UnknownScenario,
  ConfigError,
  IoError,
};

const char* to_string(ErrorCode code);

/// Exception carrying one of the enumerated error codes above. Every
/// throwing operation in this library throws Error; the code is stable
/// and test-assertable, the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// A provisioned user. The permanent credential is stored only as a
/// salted hash, never in the clear.
struct UserRecord {
  std::string username;
  Bytes permanent_credential_hash;
  std::string mobile;
  std::string email;

  bool operator==(const UserRecord&) const = default;
};

// Throws Error{ValidationFailed} unless: username is non-empty with no
// control characters, mobile is 7-15 digits, email has exactly one '@'
// with non-empty local and domain parts.
void validate(const UserRecord& user);

bool is_valid_mobile(std::string_view mobile);
bool is_valid_email(std::string_view email);

enum class OtpStatus { Active, Expired };

const char* to_string(OtpStatus status);

/// One issued one-time password. At most one Active record exists per
/// username at any instant; status only ever moves Active -> Expired.
struct OtpRecord {
  std::string username;
  Bytes otp_hash;
  OtpStatus status = OtpStatus::Active;
  std::string token_name;
  Instant issued_at = 0;

  bool operator==(const OtpRecord&) const = default;
};

// Version tag carried as the first line of every canonical claims
// encoding. Decoders reject anything else.
inline constexpr std::string_view kClaimsVersion = "APPT1";

/// Decrypted payload of a machine-binding token. The version tag is
/// implicit (kClaimsVersion); encode_claims writes it, decode_claims
/// enforces it.
struct TokenClaims {
  std::string token_name;
  std::string host_username;
  std::string email;
  std::string host_ip;
  Instant issued_at = 0;
  Instant expires_at = 0;

  bool operator==(const TokenClaims&) const = default;
};

/// Ciphertext of a canonical claims encoding, plus its base-64 transport
/// form. Build through the factories so the two stay in sync.
struct EncryptedToken {
  Bytes ciphertext;
  std::string encoded;

  static EncryptedToken from_ciphertext(Bytes raw);
  // Strict standard-alphabet base-64 with padding; throws
  // Error{MalformedCookie} on anything else.
  static EncryptedToken from_encoded(const std::string& text);

  bool operator==(const EncryptedToken&) const = default;
};

enum class DenyReason {
  BadCredentials,
  ChallengeFailed,
  RateLimited,
  UnknownUser,
  OtpMismatch,
  OtpAlreadyUsed,
  TokenMissing,
  TokenUndecryptable,
  TokenExpired,
  TokenNameMismatch,
  UserMismatch,
  MachineMismatch,
  InsecureTransport,
};

// All deny reasons, in declaration order. Handy for coverage checks.
const std::vector<DenyReason>& all_deny_reasons();

const char* to_string(DenyReason reason);
std::optional<DenyReason> deny_reason_from_string(std::string_view name);

/// Outcome of an authentication attempt: Granted with a session id, or
/// Denied with exactly one reason. The private constructor makes the
/// exactly-one-of invariant structural.
class AuthDecision {
 public:
  static AuthDecision make_granted(std::string session_id);
  static AuthDecision make_denied(DenyReason reason);

  bool granted() const { return session_id_.has_value(); }

  // Throws std::logic_error when called on the wrong variant.
  const std::string& session_id() const;
  DenyReason reason() const;

  bool operator==(const AuthDecision&) const = default;

 private:
  AuthDecision() = default;

  std::optional<std::string> session_id_;
  std::optional<DenyReason> reason_;
};

}  // namespace appt

#endif  // APPT_DOMAIN_HPP
