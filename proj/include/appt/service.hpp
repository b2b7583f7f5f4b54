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

#ifndef APPT_SERVICE_HPP
#define APPT_SERVICE_HPP

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_set>

#include <json.hpp>

#include "appt/clock.hpp"
#include "appt/crypto.hpp"
#include "appt/delivery.hpp"
#include "appt/gate.hpp"
#include "appt/store.hpp"

namespace appt {

inline constexpr std::string_view kCookieName = "APPTSecureCookie";

// `APPTSecureCookie=<encoded>; Max-Age=<n>; Path=/; Secure; HttpOnly`,
// attribute order fixed.
std::string emit_cookie(const EncryptedToken& token, int max_age_s = 900);

// Extracts the APPTSecureCookie value from a standard Cookie request
// header. Absent when no such pair exists; throws Error{MalformedCookie}
// when the value is present but not valid base-64.
std::optional<EncryptedToken> parse_cookie(const std::string& cookie_header);

struct ServiceConfig {
  std::string listen_addr = "127.0.0.1:8443";
  std::string tls_cert_path;
  std::string tls_key_path;
  std::string token_public_key_path;
  std::string token_private_key_path;
  Instant token_ttl_s = 900;
  int rate_limit = 5;
  int rate_window_s = 3600;
  int otp_length = 7;
  std::string challenge_expected_answer;
  std::string trusted_proxy;
  std::string outbox_sink_path;
  std::string snapshot_path;

  // Strict: unknown keys and wrong types are Error{ConfigError}.
  static ServiceConfig from_json(const nlohmann::json& doc);
  static ServiceConfig from_file(const std::string& path);

  // Splits listen_addr into host and port. Throws Error{ConfigError}.
  std::pair<std::string, int> listen_host_port() const;
};

/// Transport-independent service core: owns the store, outbox, gate,
/// and session registry, and maps each endpoint to a status code, JSON
/// body, and optional Set-Cookie. The HTTP listener and the in-process
/// scenario harness are both thin adapters over this.
class App {
 public:
  struct HttpResult {
    int status = 0;
    nlohmann::json body;
    std::optional<std::string> set_cookie;
  };

  App(ServiceConfig config, crypto::Keypair keypair,
      std::shared_ptr<Clock> clock,
      std::shared_ptr<crypto::RandomSource> rng);

  // POST /getpassword {username, password, channel, challenge_answer}
  // -> 200 {receipt} + Set-Cookie | 401/429 {reason} | 400 on bad JSON.
  HttpResult getpassword(const nlohmann::json& request,
                         const std::string& client_ip);

  // POST /login {username, otp} with Cookie header
  // -> 200 {session_id} | 401 {reason}.
  HttpResult login(const nlohmann::json& request,
                   const std::optional<std::string>& cookie_header,
                   const std::string& client_ip, bool transport_secure);

  // GET /protected with Authorization: Bearer <session_id>.
  HttpResult protected_resource(
      const std::optional<std::string>& authorization);

  // POST /admin/users {username, password, mobile, email}; only
  // reachable from loopback. Persists a snapshot when configured.
  HttpResult admin_add_user(const nlohmann::json& request,
                            const std::string& peer_ip);

  Store& store() { return store_; }
  Outbox& outbox() { return outbox_; }
  Gate& gate() { return *gate_; }
  Clock& clock() { return *clock_; }
  const ServiceConfig& config() const { return config_; }

 private:
  ServiceConfig config_;
  Store store_;
  Outbox outbox_;
  StaticChallenge challenge_;
  std::shared_ptr<Clock> clock_;
  std::shared_ptr<crypto::RandomSource> rng_;
  std::unique_ptr<Gate> gate_;

  std::mutex sessions_mu_;
  std::unordered_set<std::string> sessions_;
};

/// One HTTP(S) listener bound to an App. transport_secure is a property
/// of the listener: TLS reports true, plaintext reports false. A
/// forwarded client address is honored only when the peer is the
/// configured trusted proxy.
class HttpListener {
 public:
  struct Options {
    std::string host = "127.0.0.1";
    int port = 0;  // 0 picks a free port
    bool tls = false;
    // Inline PEM material wins over paths when both are set.
    std::string cert_pem;
    std::string key_pem;
    std::string cert_path;
    std::string key_path;
    std::string trusted_proxy;
  };

  HttpListener(App& app, Options options);
  ~HttpListener();

  HttpListener(const HttpListener&) = delete;
  HttpListener& operator=(const HttpListener&) = delete;

  // Binds and serves on a background thread; returns false when the
  // bind fails. port() is valid afterwards.
  bool start();
  void stop();
  int port() const { return port_; }
  bool tls() const { return options_.tls; }

 private:
  struct Impl;

  App& app_;
  Options options_;
  int port_ = 0;
  std::unique_ptr<Impl> impl_;
};

}  // namespace appt

#endif  // APPT_SERVICE_HPP
