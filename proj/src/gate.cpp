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

#include "appt/gate.hpp"

namespace appt {

namespace {

std::string destination_for(const UserRecord& user, Channel channel) {
  return channel == Channel::Sms ? user.mobile : user.email;
}

bool destination_shape_ok(Channel channel, const std::string& destination) {
  return channel == Channel::Sms ? is_valid_mobile(destination)
                                 : is_valid_email(destination);
}

}  // namespace

void validate(const GateConfig& config) {
  if (config.token_ttl_s < 1) {
    throw Error(ErrorCode::ValidationFailed, "token_ttl_s must be >= 1");
  }
  if (config.rate_limit < 1) {
    throw Error(ErrorCode::ValidationFailed, "rate_limit must be >= 1");
  }
  otp::validate(config.otp_policy);
}

Gate::Gate(Store& store, Outbox& outbox, crypto::Keypair keypair,
           GateConfig config, const Challenge& challenge,
           crypto::RandomSource& rng)
    : store_(store),
      outbox_(outbox),
      keypair_(std::move(keypair)),
      config_(std::move(config)),
      challenge_(challenge),
      rng_(rng) {
  validate(config_);
}

OtpGrant Gate::request_otp(const std::string& username,
                           const std::string& permanent_secret,
                           Channel channel,
                           const std::string& challenge_answer,
                           const std::string& client_ip, Instant now) {
  // Challenge first: an automated flood burns out here without touching
  // credentials or the rate window.
  if (!challenge_.verify(challenge_answer)) {
    throw Error(ErrorCode::ChallengeFailed, "challenge answer rejected");
  }

  const bool user_ok =
      store_.rate_check({RateKey::Scope::PerUser, username}, now,
                        config_.rate_limit, config_.rate_window_s);
  const bool ip_ok =
      store_.rate_check({RateKey::Scope::PerIp, client_ip}, now,
                        config_.rate_limit, config_.rate_window_s);
  if (!user_ok || !ip_ok) {
    throw Error(ErrorCode::RateLimited, "request rate limit exceeded");
  }

  const auto user = store_.lookup_user(username);
  // Unknown user and wrong password are indistinguishable from outside.
  if (!user || !crypto::verify_salted_hash(permanent_secret,
                                           user->permanent_credential_hash)) {
    throw Error(ErrorCode::BadCredentials, "credential check failed");
  }

  const std::string destination = destination_for(*user, channel);
  if (!destination_shape_ok(channel, destination)) {
    throw Error(ErrorCode::DeliveryFailed,
                "stored destination unusable for the requested channel");
  }

  const std::string one_time_password =
      otp::generate_otp(config_.otp_policy, rng_);
  const std::string token_name = crypto::random_token_name(rng_);

  store_.issue_otp(username, crypto::salted_hash(one_time_password, rng_),
                   token_name, now);

  std::uint64_t receipt = 0;
  try {
    const Instant minutes = (config_.token_ttl_s + 30) / 60;
    receipt = outbox_.dispatch(channel, destination,
                               "APPT code: " + one_time_password + " (valid " +
                                   std::to_string(minutes) + " min)",
                               now);
  } catch (const Error&) {
    throw Error(ErrorCode::DeliveryFailed, "could not dispatch the code");
  }

  TokenClaims claims;
  claims.token_name = token_name;
  claims.host_username = username;
  claims.email = user->email;
  claims.host_ip = client_ip;
  claims.issued_at = now;
  claims.expires_at = now + config_.token_ttl_s;

  return OtpGrant{crypto::encrypt_token(claims, keypair_), receipt};
}

AuthDecision Gate::authenticate(const std::string& username,
                                const std::string& otp,
                                const std::optional<EncryptedToken>& token,
                                const std::string& client_ip,
                                bool transport_secure, Instant now) {
  // Spend the OTP before anything is compared. A phished password dies
  // on the first attempt, successful or not.
  OtpRecord snapshot;
  try {
    snapshot = store_.consume_otp(username);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::UnknownUser) {
      return AuthDecision::make_denied(DenyReason::UnknownUser);
    }
    return AuthDecision::make_denied(DenyReason::OtpAlreadyUsed);
  }

  if (!crypto::verify_salted_hash(otp, snapshot.otp_hash)) {
    return AuthDecision::make_denied(DenyReason::OtpMismatch);
  }

  if (!token) {
    return AuthDecision::make_denied(DenyReason::TokenMissing);
  }

  TokenClaims claims;
  try {
    claims = crypto::decrypt_token(*token, keypair_);
  } catch (const Error&) {
    return AuthDecision::make_denied(DenyReason::TokenUndecryptable);
  }

  if (config_.require_secure_transport && !transport_secure) {
    return AuthDecision::make_denied(DenyReason::InsecureTransport);
  }

  if (claims.expires_at <= now) {
    return AuthDecision::make_denied(DenyReason::TokenExpired);
  }

  if (claims.token_name != snapshot.token_name) {
    return AuthDecision::make_denied(DenyReason::TokenNameMismatch);
  }

  if (claims.host_username != username) {
    return AuthDecision::make_denied(DenyReason::UserMismatch);
  }

  if (claims.host_ip != client_ip) {
    return AuthDecision::make_denied(DenyReason::MachineMismatch);
  }

  return AuthDecision::make_granted(crypto::random_session_id(rng_));
}

}  // namespace appt
