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

#include "appt/service.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <openssl/pem.h>
#include <openssl/x509.h>

namespace appt {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

bool is_loopback(const std::string& addr) {
  return addr == "127.0.0.1" || addr == "::1" || addr == "localhost";
}

std::optional<std::string> get_string(const nlohmann::json& doc,
                                      const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end() || !it->is_string()) return std::nullopt;
  return it->get<std::string>();
}

App::HttpResult bad_request(const std::string& detail) {
  return {400, {{"reason", "MalformedRequest"}, {"detail", detail}}, {}};
}

}  // namespace

std::string emit_cookie(const EncryptedToken& token, int max_age_s) {
  std::string header;
  header.append(kCookieName);
  header.push_back('=');
  header.append(token.encoded);
  header.append("; Max-Age=");
  header.append(std::to_string(max_age_s));
  header.append("; Path=/; Secure; HttpOnly");
  return header;
}

std::optional<EncryptedToken> parse_cookie(const std::string& cookie_header) {
  std::size_t pos = 0;
  while (pos <= cookie_header.size()) {
    std::size_t end = cookie_header.find(';', pos);
    if (end == std::string::npos) end = cookie_header.size();
    const std::string pair = trim(
        std::string_view(cookie_header).substr(pos, end - pos));
    pos = end + 1;
    const auto eq = pair.find('=');
    if (eq == std::string::npos) continue;
    if (std::string_view(pair).substr(0, eq) != kCookieName) continue;
    // Throws Error{MalformedCookie} when the value is not base-64.
    return EncryptedToken::from_encoded(pair.substr(eq + 1));
  }
  return std::nullopt;
}

ServiceConfig ServiceConfig::from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) {
    throw Error(ErrorCode::ConfigError, "config root must be a JSON object");
  }
  ServiceConfig config;
  for (const auto& [key, value] : doc.items()) {
    try {
      if (key == "listen_addr") {
        config.listen_addr = value.get<std::string>();
      } else if (key == "tls_cert_path") {
        config.tls_cert_path = value.get<std::string>();
      } else if (key == "tls_key_path") {
        config.tls_key_path = value.get<std::string>();
      } else if (key == "token_public_key_path") {
        config.token_public_key_path = value.get<std::string>();
      } else if (key == "token_private_key_path") {
        config.token_private_key_path = value.get<std::string>();
      } else if (key == "token_ttl_s") {
        config.token_ttl_s = value.get<Instant>();
      } else if (key == "rate_limit") {
        config.rate_limit = value.get<int>();
      } else if (key == "rate_window_s") {
        config.rate_window_s = value.get<int>();
      } else if (key == "otp_length") {
        config.otp_length = value.get<int>();
      } else if (key == "challenge_expected_answer") {
        config.challenge_expected_answer = value.get<std::string>();
      } else if (key == "trusted_proxy") {
        config.trusted_proxy = value.get<std::string>();
      } else if (key == "outbox_sink_path") {
        config.outbox_sink_path = value.get<std::string>();
      } else if (key == "snapshot_path") {
        config.snapshot_path = value.get<std::string>();
      } else {
        throw Error(ErrorCode::ConfigError, "unknown config key: " + key);
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ConfigError,
                  "bad value for " + key + ": " + e.what());
    }
  }
  return config;
}

ServiceConfig ServiceConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::ConfigError, "cannot open config: " + path);
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError,
                "config is not valid JSON: " + std::string(e.what()));
  }
  return from_json(doc);
}

std::pair<std::string, int> ServiceConfig::listen_host_port() const {
  const auto colon = listen_addr.rfind(':');
  if (colon == std::string::npos || colon + 1 == listen_addr.size()) {
    throw Error(ErrorCode::ConfigError,
                "listen_addr must be host:port, got " + listen_addr);
  }
  int port = 0;
  const char* begin = listen_addr.data() + colon + 1;
  const char* end = listen_addr.data() + listen_addr.size();
  const auto [ptr, ec] = std::from_chars(begin, end, port);
  if (ec != std::errc{} || ptr != end || port < 0 || port > 65535) {
    throw Error(ErrorCode::ConfigError,
                "bad port in listen_addr: " + listen_addr);
  }
  return {listen_addr.substr(0, colon), port};
}

App::App(ServiceConfig config, crypto::Keypair keypair,
         std::shared_ptr<Clock> clock,
         std::shared_ptr<crypto::RandomSource> rng)
    : config_(std::move(config)),
      outbox_(config_.outbox_sink_path),
      challenge_(config_.challenge_expected_answer),
      clock_(std::move(clock)),
      rng_(std::move(rng)) {
  if (config_.challenge_expected_answer.empty()) {
    throw Error(ErrorCode::ConfigError,
                "challenge_expected_answer must be configured");
  }
  if (!config_.snapshot_path.empty()) {
    store_.load_snapshot(config_.snapshot_path);
  }
  GateConfig gate_config;
  gate_config.token_ttl_s = config_.token_ttl_s;
  gate_config.otp_policy.length = config_.otp_length;
  gate_config.rate_limit = config_.rate_limit;
  gate_config.rate_window_s = config_.rate_window_s;
  gate_ = std::make_unique<Gate>(store_, outbox_, std::move(keypair),
                                 gate_config, challenge_, *rng_);
}

App::HttpResult App::getpassword(const nlohmann::json& request,
                                 const std::string& client_ip) {
  const auto username = get_string(request, "username");
  const auto password = get_string(request, "password");
  const auto channel_name = get_string(request, "channel");
  const auto challenge_answer = get_string(request, "challenge_answer");
  if (!username || !password || !channel_name || !challenge_answer) {
    return bad_request(
        "username, password, channel, challenge_answer are required");
  }
  const auto channel = channel_from_string(*channel_name);
  if (!channel) {
    return bad_request("channel must be \"sms\" or \"email\"");
  }

  try {
    const OtpGrant grant =
        gate_->request_otp(*username, *password, *channel, *challenge_answer,
                           client_ip, clock_->now());
    return {200,
            {{"receipt", grant.receipt}},
            emit_cookie(grant.token, static_cast<int>(config_.token_ttl_s))};
  } catch (const Error& e) {
    switch (e.code()) {
      case ErrorCode::RateLimited:
        return {429, {{"reason", to_string(e.code())}}, {}};
      case ErrorCode::ChallengeFailed:
      case ErrorCode::BadCredentials:
        return {401, {{"reason", to_string(e.code())}}, {}};
      case ErrorCode::DeliveryFailed:
        return {502, {{"reason", to_string(e.code())}}, {}};
      default:
        throw;
    }
  }
}

App::HttpResult App::login(const nlohmann::json& request,
                           const std::optional<std::string>& cookie_header,
                           const std::string& client_ip,
                           bool transport_secure) {
  const auto username = get_string(request, "username");
  const auto otp = get_string(request, "otp");
  if (!username || !otp) {
    return bad_request("username and otp are required");
  }

  std::optional<EncryptedToken> token;
  if (cookie_header) {
    try {
      token = parse_cookie(*cookie_header);
    } catch (const Error&) {
      // A present-but-undecodable cookie must not short-circuit the
      // flow: the OTP still has to be spent first. Hand the gate a
      // token that cannot decrypt.
      token = EncryptedToken{};
    }
  }

  const AuthDecision decision =
      gate_->authenticate(*username, *otp, token, client_ip, transport_secure,
                          clock_->now());
  if (!decision.granted()) {
    return {401, {{"reason", to_string(decision.reason())}}, {}};
  }
  {
    std::lock_guard lock(sessions_mu_);
    sessions_.insert(decision.session_id());
  }
  return {200, {{"session_id", decision.session_id()}}, {}};
}

App::HttpResult App::protected_resource(
    const std::optional<std::string>& authorization) {
  constexpr std::string_view kBearer = "Bearer ";
  if (authorization && authorization->size() > kBearer.size() &&
      std::string_view(*authorization).substr(0, kBearer.size()) == kBearer) {
    const std::string session_id = authorization->substr(kBearer.size());
    std::lock_guard lock(sessions_mu_);
    if (sessions_.count(session_id) != 0) {
      return {200, {{"ok", true}}, {}};
    }
  }
  return {401, {{"reason", "Unauthorized"}}, {}};
}

App::HttpResult App::admin_add_user(const nlohmann::json& request,
                                    const std::string& peer_ip) {
  if (!is_loopback(peer_ip)) {
    return {403, {{"reason", "Forbidden"}}, {}};
  }
  const auto username = get_string(request, "username");
  const auto password = get_string(request, "password");
  const auto mobile = get_string(request, "mobile");
  const auto email = get_string(request, "email");
  if (!username || !password || !mobile || !email) {
    return bad_request("username, password, mobile, email are required");
  }

  UserRecord user;
  user.username = *username;
  user.permanent_credential_hash = crypto::salted_hash(*password, *rng_);
  user.mobile = *mobile;
  user.email = *email;
  try {
    store_.upsert_user(user);
  } catch (const Error& e) {
    return {400, {{"reason", to_string(e.code())}, {"detail", e.what()}}, {}};
  }
  if (!config_.snapshot_path.empty()) {
    store_.save_snapshot(config_.snapshot_path);
  }
  return {201, {{"username", user.username}}, {}};
}

// ---------------------------------------------------------------------------
// HTTP adapter

struct HttpListener::Impl {
  std::unique_ptr<httplib::Server> server;
  std::thread worker;
};

namespace {

struct X509Free {
  void operator()(X509* cert) const { X509_free(cert); }
};
struct PkeyFree {
  void operator()(EVP_PKEY* key) const { EVP_PKEY_free(key); }
};

std::unique_ptr<httplib::Server> make_tls_server(
    const HttpListener::Options& options) {
  if (!options.cert_pem.empty()) {
    std::unique_ptr<BIO, decltype(&BIO_free)> cert_bio(
        BIO_new_mem_buf(options.cert_pem.data(),
                        static_cast<int>(options.cert_pem.size())),
        BIO_free);
    std::unique_ptr<BIO, decltype(&BIO_free)> key_bio(
        BIO_new_mem_buf(options.key_pem.data(),
                        static_cast<int>(options.key_pem.size())),
        BIO_free);
    std::unique_ptr<X509, X509Free> cert(
        PEM_read_bio_X509(cert_bio.get(), nullptr, nullptr, nullptr));
    std::unique_ptr<EVP_PKEY, PkeyFree> key(
        PEM_read_bio_PrivateKey(key_bio.get(), nullptr, nullptr, nullptr));
    if (!cert || !key) {
      throw Error(ErrorCode::ConfigError, "cannot parse TLS material");
    }
    // SSL_CTX_use_* take their own references; ours drop at scope end.
    return std::make_unique<httplib::SSLServer>(cert.get(), key.get());
  }
  return std::make_unique<httplib::SSLServer>(options.cert_path.c_str(),
                                              options.key_path.c_str());
}

}  // namespace

HttpListener::HttpListener(App& app, Options options)
    : app_(app), options_(std::move(options)), impl_(new Impl) {
  impl_->server = options_.tls ? make_tls_server(options_)
                               : std::make_unique<httplib::Server>();
  if (!impl_->server->is_valid()) {
    throw Error(ErrorCode::ConfigError, "listener setup failed");
  }

  auto* server = impl_->server.get();
  const bool secure = options_.tls;
  const std::string trusted_proxy = options_.trusted_proxy;

  auto client_ip = [trusted_proxy](const httplib::Request& req) {
    if (!trusted_proxy.empty() && req.remote_addr == trusted_proxy &&
        req.has_header("X-Forwarded-For")) {
      const std::string forwarded = req.get_header_value("X-Forwarded-For");
      return trim(forwarded.substr(0, forwarded.find(',')));
    }
    return req.remote_addr;
  };

  auto reply = [](httplib::Response& res, const App::HttpResult& result) {
    res.status = result.status;
    if (result.set_cookie) {
      res.set_header("Set-Cookie", *result.set_cookie);
    }
    res.set_content(result.body.dump(), "application/json");
  };

  auto parse_body = [](const httplib::Request& req)
      -> std::optional<nlohmann::json> {
    nlohmann::json doc = nlohmann::json::parse(req.body, nullptr, false);
    if (doc.is_discarded()) return std::nullopt;
    return doc;
  };

  server->Post("/getpassword", [this, client_ip, reply, parse_body](
                                   const httplib::Request& req,
                                   httplib::Response& res) {
    const auto body = parse_body(req);
    if (!body) {
      reply(res, {400, {{"reason", "MalformedRequest"}}, {}});
      return;
    }
    reply(res, app_.getpassword(*body, client_ip(req)));
  });

  server->Post("/login", [this, client_ip, reply, parse_body, secure](
                             const httplib::Request& req,
                             httplib::Response& res) {
    const auto body = parse_body(req);
    if (!body) {
      reply(res, {400, {{"reason", "MalformedRequest"}}, {}});
      return;
    }
    std::optional<std::string> cookie;
    if (req.has_header("Cookie")) {
      cookie = req.get_header_value("Cookie");
    }
    reply(res, app_.login(*body, cookie, client_ip(req), secure));
  });

  server->Get("/protected", [this, reply](const httplib::Request& req,
                                          httplib::Response& res) {
    std::optional<std::string> authorization;
    if (req.has_header("Authorization")) {
      authorization = req.get_header_value("Authorization");
    }
    reply(res, app_.protected_resource(authorization));
  });

  server->Post("/admin/users", [this, reply, parse_body](
                                   const httplib::Request& req,
                                   httplib::Response& res) {
    const auto body = parse_body(req);
    if (!body) {
      reply(res, {400, {{"reason", "MalformedRequest"}}, {}});
      return;
    }
    // Deliberately the raw peer address: the loopback gate must not be
    // forwardable through a proxy header.
    reply(res, app_.admin_add_user(*body, req.remote_addr));
  });
}

HttpListener::~HttpListener() { stop(); }

bool HttpListener::start() {
  auto* server = impl_->server.get();
  if (options_.port == 0) {
    port_ = server->bind_to_any_port(options_.host);
    if (port_ <= 0) return false;
  } else {
    if (!server->bind_to_port(options_.host, options_.port)) return false;
    port_ = options_.port;
  }
  impl_->worker = std::thread([server] { server->listen_after_bind(); });
  server->wait_until_ready();
  return true;
}

void HttpListener::stop() {
  if (impl_ && impl_->server && impl_->server->is_running()) {
    impl_->server->stop();
  }
  if (impl_ && impl_->worker.joinable()) {
    impl_->worker.join();
  }
}

}  // namespace appt
