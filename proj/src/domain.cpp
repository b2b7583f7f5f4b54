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

#include "appt/domain.hpp"

#include <algorithm>
#include <cctype>

#include "appt/base64.hpp"

namespace appt {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::KeyTooSmall: return "KeyTooSmall";
    case ErrorCode::DelimiterInField: return "DelimiterInField";
    case ErrorCode::MalformedClaims: return "MalformedClaims";
    case ErrorCode::PayloadTooLarge: return "PayloadTooLarge";
    case ErrorCode::DecryptFailed: return "DecryptFailed";
    case ErrorCode::NoPrivateKey: return "NoPrivateKey";
    case ErrorCode::InvalidPolicy: return "InvalidPolicy";
    case ErrorCode::ValidationFailed: return "ValidationFailed";
    case ErrorCode::UnknownUser: return "UnknownUser";
    case ErrorCode::OtpAlreadyUsed: return "OtpAlreadyUsed";
    case ErrorCode::BadDestination: return "BadDestination";
    case ErrorCode::MalformedCookie: return "MalformedCookie";
    case ErrorCode::ChallengeFailed: return "ChallengeFailed";
    case ErrorCode::RateLimited: return "RateLimited";
    case ErrorCode::BadCredentials: return "BadCredentials";
    case ErrorCode::DeliveryFailed: return "DeliveryFailed";
    case ErrorCode::UnknownScenario: return "UnknownScenario";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_valid_mobile(std::string_view mobile) {
  if (mobile.size() < 7 || mobile.size() > 15) return false;
  return std::all_of(mobile.begin(), mobile.end(), [](unsigned char c) {
    return std::isdigit(c) != 0;
  });
}

bool is_valid_email(std::string_view email) {
  const auto at = email.find('@');
  if (at == std::string_view::npos) return false;
  if (email.find('@', at + 1) != std::string_view::npos) return false;
  return at > 0 && at + 1 < email.size();
}

void validate(const UserRecord& user) {
  if (user.username.empty()) {
    throw Error(ErrorCode::ValidationFailed, "username must be non-empty");
  }
  for (unsigned char c : user.username) {
    if (std::iscntrl(c) != 0) {
      throw Error(ErrorCode::ValidationFailed,
                  "username must not contain control characters");
    }
  }
  if (!is_valid_mobile(user.mobile)) {
    throw Error(ErrorCode::ValidationFailed,
                "mobile must be 7-15 digits: " + user.mobile);
  }
  if (!is_valid_email(user.email)) {
    throw Error(ErrorCode::ValidationFailed,
                "email must have one '@' with non-empty parts: " + user.email);
  }
}

const char* to_string(OtpStatus status) {
  return status == OtpStatus::Active ? "Active" : "Expired";
}

EncryptedToken EncryptedToken::from_ciphertext(Bytes raw) {
  EncryptedToken token;
  token.encoded = base64_encode(raw);
  token.ciphertext = std::move(raw);
  return token;
}

EncryptedToken EncryptedToken::from_encoded(const std::string& text) {
  auto decoded = base64_decode(text);
  if (!decoded) {
    throw Error(ErrorCode::MalformedCookie,
                "token value is not valid base-64");
  }
  EncryptedToken token;
  token.ciphertext = std::move(*decoded);
  token.encoded = text;
  return token;
}

const std::vector<DenyReason>& all_deny_reasons() {
  static const std::vector<DenyReason> kAll = {
      DenyReason::BadCredentials,    DenyReason::ChallengeFailed,
      DenyReason::RateLimited,       DenyReason::UnknownUser,
      DenyReason::OtpMismatch,       DenyReason::OtpAlreadyUsed,
      DenyReason::TokenMissing,      DenyReason::TokenUndecryptable,
      DenyReason::TokenExpired,      DenyReason::TokenNameMismatch,
      DenyReason::UserMismatch,      DenyReason::MachineMismatch,
      DenyReason::InsecureTransport,
  };
  return kAll;
}

const char* to_string(DenyReason reason) {
  switch (reason) {
    case DenyReason::BadCredentials: return "BadCredentials";
    case DenyReason::ChallengeFailed: return "ChallengeFailed";
    case DenyReason::RateLimited: return "RateLimited";
    case DenyReason::UnknownUser: return "UnknownUser";
    case DenyReason::OtpMismatch: return "OtpMismatch";
    case DenyReason::OtpAlreadyUsed: return "OtpAlreadyUsed";
    case DenyReason::TokenMissing: return "TokenMissing";
    case DenyReason::TokenUndecryptable: return "TokenUndecryptable";
    case DenyReason::TokenExpired: return "TokenExpired";
    case DenyReason::TokenNameMismatch: return "TokenNameMismatch";
    case DenyReason::UserMismatch: return "UserMismatch";
    case DenyReason::MachineMismatch: return "MachineMismatch";
    case DenyReason::InsecureTransport: return "InsecureTransport";
  }
  return "Unknown";
}

std::optional<DenyReason> deny_reason_from_string(std::string_view name) {
  for (DenyReason reason : all_deny_reasons()) {
    if (name == to_string(reason)) return reason;
  }
  return std::nullopt;
}

AuthDecision AuthDecision::make_granted(std::string session_id) {
  AuthDecision decision;
  decision.session_id_ = std::move(session_id);
  return decision;
}

AuthDecision AuthDecision::make_denied(DenyReason reason) {
  AuthDecision decision;
  decision.reason_ = reason;
  return decision;
}

const std::string& AuthDecision::session_id() const {
  if (!session_id_) {
    throw std::logic_error("session_id() on a denied decision");
  }
  return *session_id_;
}

DenyReason AuthDecision::reason() const {
  if (!reason_) {
    throw std::logic_error("reason() on a granted decision");
  }
  return *reason_;
}

}  // namespace appt
