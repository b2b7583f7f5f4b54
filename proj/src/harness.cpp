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

#include "appt/harness.hpp"

#include <functional>
#include <map>
#include <sstream>

#include <httplib.h>

#include "appt/service.hpp"

namespace appt::harness {

namespace {

constexpr char kVictim[] = "aqwert";
constexpr char kVictimPassword[] = "P2323!23";
constexpr char kVictimMobile[] = "9689563581";
constexpr char kVictimEmail[] = "aqwr@yml.co";
constexpr char kVictimIp[] = "10.0.0.5";

constexpr char kAttacker[] = "mallory";
constexpr char kAttackerIp[] = "172.16.0.9";

constexpr char kChallengeAnswer[] = "two words";

struct FlowA {
  bool issued = false;
  std::string outcome;
  std::uint64_t receipt = 0;
  std::optional<std::string> cookie;  // "APPTSecureCookie=..." pair
};

struct FlowB {
  bool granted = false;
  std::string outcome;  // "granted" or a deny reason name
};

/// Backend-independent view of the service for scenario scripts: the
/// two protocol flows, the victim's phone/mailbox, the clock, and the
/// white-box hooks the tampering audit needs.
class Driver {
 public:
  virtual ~Driver() = default;

  virtual void add_user(const std::string& username,
                        const std::string& password,
                        const std::string& mobile,
                        const std::string& email) = 0;
  virtual FlowA request_otp(const std::string& username,
                            const std::string& password, Channel channel,
                            const std::string& answer,
                            const std::string& ip) = 0;
  virtual FlowB login(const std::string& username, const std::string& otp,
                      const std::optional<std::string>& cookie,
                      const std::string& ip, bool secure) = 0;
  virtual std::vector<OutboundMessage> drain_outbox() = 0;
  virtual void advance_clock(Instant seconds) = 0;
  virtual Instant now() = 0;

  // White-box hooks. Crafting uses only the service's *public* key;
  // reading the live token name stands in for hypothetical server-side
  // knowledge during binding audits.
  virtual std::string craft_cookie(const TokenClaims& claims) = 0;
  virtual std::string active_token_name(const std::string& username) = 0;
};

std::string cookie_pair_from_set_cookie(const std::string& set_cookie) {
  return set_cookie.substr(0, set_cookie.find(';'));
}

class InProcessDriver final : public Driver {
 public:
  InProcessDriver(App& app, TestClock& clock) : app_(app), clock_(clock) {}

  void add_user(const std::string& username, const std::string& password,
                const std::string& mobile, const std::string& email) override {
    const auto result = app_.admin_add_user({{"username", username},
                                             {"password", password},
                                             {"mobile", mobile},
                                             {"email", email}},
                                            "127.0.0.1");
    if (result.status != 201) {
      throw Error(ErrorCode::ValidationFailed,
                  "provisioning failed: " + result.body.dump());
    }
  }

  FlowA request_otp(const std::string& username, const std::string& password,
                    Channel channel, const std::string& answer,
                    const std::string& ip) override {
    const auto result = app_.getpassword({{"username", username},
                                          {"password", password},
                                          {"channel", to_string(channel)},
                                          {"challenge_answer", answer}},
                                         ip);
    FlowA flow;
    if (result.status == 200) {
      flow.issued = true;
      flow.receipt = result.body.at("receipt").get<std::uint64_t>();
      flow.outcome = "otp-issued receipt=" + std::to_string(flow.receipt);
      flow.cookie = cookie_pair_from_set_cookie(result.set_cookie.value());
    } else {
      flow.outcome = result.body.at("reason").get<std::string>();
    }
    return flow;
  }

  FlowB login(const std::string& username, const std::string& otp,
              const std::optional<std::string>& cookie, const std::string& ip,
              bool secure) override {
    const auto result = app_.login({{"username", username}, {"otp", otp}},
                                   cookie, ip, secure);
    if (result.status == 200) return {true, "granted"};
    return {false, result.body.at("reason").get<std::string>()};
  }

  std::vector<OutboundMessage> drain_outbox() override {
    return app_.outbox().drain();
  }

  void advance_clock(Instant seconds) override { clock_.advance(seconds); }

  Instant now() override { return clock_.now(); }

  std::string craft_cookie(const TokenClaims& claims) override {
    const auto token =
        crypto::encrypt_token(claims, app_.gate().keypair().public_part());
    return std::string(kCookieName) + "=" + token.encoded;
  }

  std::string active_token_name(const std::string& username) override {
    const auto row = app_.store().latest_otp(username);
    if (!row) throw Error(ErrorCode::UnknownUser, "no OTP row for " + username);
    return row->token_name;
  }

 private:
  App& app_;
  TestClock& clock_;
};

/// Replays the same scripts through loopback listeners: a TLS one for
/// ordinary traffic and a plaintext one for the insecure-transport
/// steps. Actor addresses ride in X-Forwarded-For, which the listeners
/// trust only because 127.0.0.1 is configured as the proxy.
class HttpDriver final : public Driver {
 public:
  HttpDriver(App& app, TestClock& clock) : in_process_(app, clock) {
    const auto tls_material = crypto::make_self_signed_cert("appt-harness");

    HttpListener::Options tls_options;
    tls_options.tls = true;
    tls_options.cert_pem = tls_material.cert_pem;
    tls_options.key_pem = tls_material.key_pem;
    tls_options.trusted_proxy = "127.0.0.1";
    tls_listener_ = std::make_unique<HttpListener>(app, tls_options);

    HttpListener::Options plain_options;
    plain_options.trusted_proxy = "127.0.0.1";
    plain_listener_ = std::make_unique<HttpListener>(app, plain_options);

    if (!tls_listener_->start() || !plain_listener_->start()) {
      throw Error(ErrorCode::IoError, "cannot start loopback listeners");
    }

    tls_client_ = std::make_unique<httplib::SSLClient>("127.0.0.1",
                                                       tls_listener_->port());
    tls_client_->enable_server_certificate_verification(false);
    plain_client_ = std::make_unique<httplib::Client>("127.0.0.1",
                                                      plain_listener_->port());
  }

  ~HttpDriver() override {
    if (tls_listener_) tls_listener_->stop();
    if (plain_listener_) plain_listener_->stop();
  }

  void add_user(const std::string& username, const std::string& password,
                const std::string& mobile, const std::string& email) override {
    const nlohmann::json body = {{"username", username},
                                 {"password", password},
                                 {"mobile", mobile},
                                 {"email", email}};
    const auto result = tls_client_->Post("/admin/users", body.dump(),
                                          "application/json");
    if (!result || result->status != 201) {
      throw Error(ErrorCode::ValidationFailed, "provisioning failed over HTTP");
    }
  }

  FlowA request_otp(const std::string& username, const std::string& password,
                    Channel channel, const std::string& answer,
                    const std::string& ip) override {
    const nlohmann::json body = {{"username", username},
                                 {"password", password},
                                 {"channel", to_string(channel)},
                                 {"challenge_answer", answer}};
    httplib::Headers headers = {{"X-Forwarded-For", ip}};
    const auto result = tls_client_->Post("/getpassword", headers, body.dump(),
                                          "application/json");
    if (!result) {
      throw Error(ErrorCode::IoError, "getpassword request failed");
    }
    FlowA flow;
    const auto doc = nlohmann::json::parse(result->body);
    if (result->status == 200) {
      flow.issued = true;
      flow.receipt = doc.at("receipt").get<std::uint64_t>();
      flow.outcome = "otp-issued receipt=" + std::to_string(flow.receipt);
      flow.cookie =
          cookie_pair_from_set_cookie(result->get_header_value("Set-Cookie"));
    } else {
      flow.outcome = doc.at("reason").get<std::string>();
    }
    return flow;
  }

  FlowB login(const std::string& username, const std::string& otp,
              const std::optional<std::string>& cookie, const std::string& ip,
              bool secure) override {
    const nlohmann::json body = {{"username", username}, {"otp", otp}};
    httplib::Headers headers = {{"X-Forwarded-For", ip}};
    if (cookie) headers.emplace("Cookie", *cookie);
    const auto result =
        secure ? tls_client_->Post("/login", headers, body.dump(),
                                   "application/json")
               : plain_client_->Post("/login", headers, body.dump(),
                                     "application/json");
    if (!result) {
      throw Error(ErrorCode::IoError, "login request failed");
    }
    const auto doc = nlohmann::json::parse(result->body);
    if (result->status == 200) return {true, "granted"};
    return {false, doc.at("reason").get<std::string>()};
  }

  std::vector<OutboundMessage> drain_outbox() override {
    return in_process_.drain_outbox();
  }

  void advance_clock(Instant seconds) override {
    in_process_.advance_clock(seconds);
  }

  Instant now() override { return in_process_.now(); }

  std::string craft_cookie(const TokenClaims& claims) override {
    return in_process_.craft_cookie(claims);
  }

  std::string active_token_name(const std::string& username) override {
    return in_process_.active_token_name(username);
  }

 private:
  InProcessDriver in_process_;
  std::unique_ptr<HttpListener> tls_listener_;
  std::unique_ptr<HttpListener> plain_listener_;
  std::unique_ptr<httplib::SSLClient> tls_client_;
  std::unique_ptr<httplib::Client> plain_client_;
};

// ---------------------------------------------------------------------------
// Script helpers

void step(ScenarioReport& report, std::string actor, std::string action,
          std::string outcome) {
  report.steps.push_back(
      {std::move(actor), std::move(action), std::move(outcome)});
}

void provision_victim(Driver& driver, ScenarioReport& report) {
  driver.add_user(kVictim, kVictimPassword, kVictimMobile, kVictimEmail);
  step(report, "system", "provision user aqwert from the login table",
       "created");
}

FlowA victim_request(Driver& driver, ScenarioReport& report,
                     const std::string& action) {
  const FlowA flow = driver.request_otp(kVictim, kVictimPassword, Channel::Sms,
                                        kChallengeAnswer, kVictimIp);
  step(report, "victim", action, flow.outcome);
  return flow;
}

std::string code_from_body(const std::string& body) {
  constexpr std::string_view kPrefix = "APPT code: ";
  constexpr std::string_view kSuffix = " (valid";
  const auto start = body.find(kPrefix);
  const auto end = body.find(kSuffix);
  if (start != 0 || end == std::string::npos) {
    throw Error(ErrorCode::DeliveryFailed, "unexpected message body: " + body);
  }
  return body.substr(kPrefix.size(), end - kPrefix.size());
}

// Drains the victim's phone and returns the latest code.
std::string read_code(Driver& driver, ScenarioReport& report,
                      const std::string& actor, const std::string& action) {
  const auto messages = driver.drain_outbox();
  if (messages.empty()) {
    throw Error(ErrorCode::DeliveryFailed, "expected a delivered code");
  }
  step(report, actor, action, "code received out of band");
  return code_from_body(messages.back().body);
}

FlowB login_step(Driver& driver, ScenarioReport& report,
                 const std::string& actor, const std::string& action,
                 const std::string& username, const std::string& otp,
                 const std::optional<std::string>& cookie,
                 const std::string& ip, bool secure = true) {
  const FlowB flow = driver.login(username, otp, cookie, ip, secure);
  step(report, actor, action, flow.outcome);
  return flow;
}

// Fresh OTP for the victim whose code the attacker is assumed to have
// phished; returns {code, cookie}.
std::pair<std::string, std::string> phished_round(Driver& driver,
                                                  ScenarioReport& report) {
  const FlowA flow =
      victim_request(driver, report, "victim requests a new code");
  const std::string code = read_code(driver, report, "victim",
                                     "victim reads the SMS; the forged site "
                                     "captures what the victim types");
  return {code, flow.cookie.value()};
}

TokenClaims base_claims(Driver& driver, const std::string& token_name,
                        const std::string& username, const std::string& email,
                        const std::string& ip) {
  TokenClaims claims;
  claims.token_name = token_name;
  claims.host_username = username;
  claims.email = email;
  claims.host_ip = ip;
  claims.issued_at = driver.now();
  claims.expires_at = driver.now() + 900;
  return claims;
}

// ---------------------------------------------------------------------------
// Scenarios

void scenario_forged_site(Driver& driver, ScenarioReport& report) {
  provision_victim(driver, report);

  login_step(driver, report, "attacker",
             "probes the login with a username that was never provisioned",
             "administrator", "letmein1!", std::nullopt, kAttackerIp);

  const FlowA guessed = driver.request_otp(
      kVictim, "guessed-pw-1", Channel::Sms, kChallengeAnswer, kAttackerIp);
  step(report, "attacker",
       "requests a code for the victim with a guessed password",
       guessed.outcome);

  const auto [otp1, cookie1] = phished_round(driver, report);
  (void)cookie1;

  login_step(driver, report, "attacker",
             "replays the phished code from the forged-site host (no token "
             "cookie)",
             kVictim, otp1, std::nullopt, kAttackerIp);
  login_step(driver, report, "attacker", "retries the same replay", kVictim,
             otp1, std::nullopt, kAttackerIp);

  const auto [otp2, cookie2] = phished_round(driver, report);
  (void)otp2;
  (void)cookie2;
  login_step(driver, report, "attacker",
             "replays the older phished code against the fresh one", kVictim,
             otp1, std::nullopt, kAttackerIp);

  const FlowA final_round =
      victim_request(driver, report, "victim requests another code");
  const std::string otp3 =
      read_code(driver, report, "victim", "victim reads the SMS privately");
  const FlowB legit =
      login_step(driver, report, "victim", "victim logs in from own machine",
                 kVictim, otp3, final_round.cookie, kVictimIp);
  report.legit_user_outcome =
      legit.granted ? "granted after re-requesting a code" : legit.outcome;
}

void scenario_token_ip_mismatch(Driver& driver, ScenarioReport& report) {
  provision_victim(driver, report);

  auto [otp1, cookie1] = phished_round(driver, report);
  step(report, "attacker",
       "steals the token cookie and the code from the victim's machine",
       "captured");
  login_step(driver, report, "attacker",
             "replays code and stolen token from the attacker host", kVictim,
             otp1, cookie1, kAttackerIp);

  auto [otp2, cookie2] = phished_round(driver, report);
  login_step(driver, report, "attacker",
             "replays from the victim's address over a downgraded plaintext "
             "connection",
             kVictim, otp2, cookie2, kVictimIp, /*secure=*/false);

  const FlowA final_round =
      victim_request(driver, report, "victim requests another code");
  const std::string otp3 =
      read_code(driver, report, "victim", "victim reads the SMS privately");
  const FlowB legit = login_step(driver, report, "victim",
                                 "victim logs in from own machine over TLS",
                                 kVictim, otp3, final_round.cookie, kVictimIp);
  report.legit_user_outcome = legit.granted ? "granted" : legit.outcome;
}

void scenario_expired_token(Driver& driver, ScenarioReport& report) {
  provision_victim(driver, report);

  auto [otp1, cookie1] = phished_round(driver, report);
  driver.advance_clock(901);
  step(report, "system", "clock advances 901 s past the mint time", "elapsed");
  login_step(driver, report, "attacker",
             "replays the stolen code and token after expiry", kVictim, otp1,
             cookie1, kVictimIp);

  const FlowA fresh =
      victim_request(driver, report, "victim requests a fresh code");
  const std::string otp2 =
      read_code(driver, report, "victim", "victim reads the SMS privately");
  driver.advance_clock(899);
  step(report, "system", "clock advances 899 s, inside the token lifetime",
       "elapsed");
  const FlowB legit = login_step(driver, report, "victim",
                                 "victim logs in just before expiry", kVictim,
                                 otp2, fresh.cookie, kVictimIp);
  report.legit_user_outcome =
      legit.granted ? "granted at 899 s" : legit.outcome;
}

void scenario_otp_reuse(Driver& driver, ScenarioReport& report) {
  provision_victim(driver, report);

  const FlowA first = victim_request(driver, report, "victim requests a code");
  const std::string otp1 =
      read_code(driver, report, "victim", "victim reads the SMS");
  const FlowB legit =
      login_step(driver, report, "victim", "victim logs in", kVictim, otp1,
                 first.cookie, kVictimIp);
  report.legit_user_outcome = legit.granted ? "granted" : legit.outcome;

  step(report, "attacker",
       "captures the used code and the token cookie after the fact",
       "captured");
  login_step(driver, report, "attacker",
             "replays the already-used code with the stolen token from the "
             "victim's address",
             kVictim, otp1, first.cookie, kVictimIp);

  const auto [otp2, cookie2] = phished_round(driver, report);
  (void)cookie2;
  login_step(driver, report, "attacker",
             "pairs the stale stolen token with the freshly phished code",
             kVictim, otp2, first.cookie, kVictimIp);
}

void scenario_tampered_token(Driver& driver, ScenarioReport& report) {
  provision_victim(driver, report);

  for (const std::size_t position : {std::size_t{0}, std::size_t{128}}) {
    auto [otp, cookie] = phished_round(driver, report);
    const std::string prefix = std::string(kCookieName) + "=";
    auto token = EncryptedToken::from_encoded(cookie.substr(prefix.size()));
    token.ciphertext[position] ^= 0x01;
    const auto flipped = EncryptedToken::from_ciphertext(token.ciphertext);
    login_step(driver, report, "attacker",
               "replays with ciphertext byte " + std::to_string(position) +
                   " flipped, hunting a valid variant",
               kVictim, otp, prefix + flipped.encoded, kVictimIp);
  }

  {
    auto [otp, cookie] = phished_round(driver, report);
    (void)cookie;
    // The public key is public; anyone can mint claims. Without the
    // token name, which never leaves the server and the encrypted
    // cookie, the guess has 128 bits to get right.
    crypto::SystemRandom entropy;
    const auto crafted = driver.craft_cookie(
        base_claims(driver, crypto::random_token_name(entropy), kVictim,
                    kVictimEmail, kAttackerIp));
    login_step(driver, report, "attacker",
               "forges a token with the public key and a guessed token name",
               kVictim, otp, crafted, kAttackerIp);
  }

  {
    auto [otp, cookie] = phished_round(driver, report);
    (void)cookie;
    const auto crafted = driver.craft_cookie(
        base_claims(driver, driver.active_token_name(kVictim), kAttacker,
                    kVictimEmail, kVictimIp));
    login_step(driver, report, "auditor",
               "audit: forged claims with the live token name but a different "
               "username (inner binding layer)",
               kVictim, otp, crafted, kVictimIp);
  }

  const FlowA fresh =
      victim_request(driver, report, "victim requests another code");
  const std::string otp_final =
      read_code(driver, report, "victim", "victim reads the SMS privately");
  const FlowB legit =
      login_step(driver, report, "victim", "victim logs in normally", kVictim,
                 otp_final, fresh.cookie, kVictimIp);
  report.legit_user_outcome = legit.granted ? "granted" : legit.outcome;
}

void scenario_flood(Driver& driver, ScenarioReport& report) {
  provision_victim(driver, report);

  const FlowA first_attempt = driver.request_otp(
      kVictim, kVictimPassword, Channel::Sms, "not the words", kAttackerIp);
  step(report, "attacker", "requests a code with a wrong challenge answer",
       first_attempt.outcome);
  int challenge_failures = first_attempt.outcome == "ChallengeFailed" ? 1 : 0;
  for (int i = 0; i < 99; ++i) {
    const FlowA attempt = driver.request_otp(
        kVictim, kVictimPassword, Channel::Sms, "not the words", kAttackerIp);
    if (attempt.outcome == "ChallengeFailed") ++challenge_failures;
  }
  step(report, "attacker",
       "keeps flooding the code request, 100 wrong-challenge attempts in "
       "total",
       challenge_failures == 100 ? "ChallengeFailed x100"
                                 : "unexpected outcomes");
  step(report, "system", "victim's phone inspected after the flood",
       driver.drain_outbox().empty() ? "no messages sent"
                                     : "messages leaked");

  int issued = 0;
  std::string outcome_after_limit;
  for (int i = 0; i < 6; ++i) {
    const FlowA attempt =
        driver.request_otp(kVictim, kVictimPassword, Channel::Sms,
                           kChallengeAnswer, kAttackerIp);
    if (attempt.issued) {
      ++issued;
    } else {
      outcome_after_limit = attempt.outcome;
    }
  }
  step(report, "attacker",
       "solves the challenge and hammers the code request with phished "
       "credentials",
       "otp-issued x" + std::to_string(issued));
  step(report, "attacker", "sixth request inside the window",
       outcome_after_limit.empty() ? "otp-issued" : outcome_after_limit);
  step(report, "system", "victim's phone inspected again",
       std::to_string(driver.drain_outbox().size()) +
           " nuisance messages, bounded by the rate limit");

  const FlowA while_limited = driver.request_otp(
      kVictim, kVictimPassword, Channel::Sms, kChallengeAnswer, kVictimIp);
  step(report, "victim", "victim requests a code while the window is hot",
       while_limited.outcome);

  driver.advance_clock(3601);
  step(report, "system", "rate window passes", "elapsed");
  const FlowA recovered =
      victim_request(driver, report, "victim requests a code after the window");
  const std::string otp =
      read_code(driver, report, "victim", "victim reads the SMS");
  const FlowB legit =
      login_step(driver, report, "victim", "victim logs in", kVictim, otp,
                 recovered.cookie, kVictimIp);
  report.legit_user_outcome =
      legit.granted ? "rate limited during the flood, granted after the "
                      "window reset"
                    : legit.outcome;
}

void scenario_happy_path(Driver& driver, ScenarioReport& report) {
  provision_victim(driver, report);
  const FlowA flow =
      victim_request(driver, report, "victim requests a code over SMS");
  const std::string otp =
      read_code(driver, report, "victim", "victim reads the SMS");
  const FlowB legit = login_step(
      driver, report, "victim",
      "victim logs in with the code and the minted token", kVictim, otp,
      flow.cookie, kVictimIp);
  report.legit_user_outcome = legit.granted ? "granted" : legit.outcome;
}

struct ScenarioEntry {
  ScenarioInfo info;
  std::function<void(Driver&, ScenarioReport&)> run;
};

const std::vector<ScenarioEntry>& registry() {
  static const std::vector<ScenarioEntry> kScenarios = {
      {{"forged-site-otp-replay",
        "victim's code is phished via a fake form and replayed from the "
        "attacker host without the token"},
       scenario_forged_site},
      {{"token-ip-mismatch",
        "attacker steals both the cookie and the code, replays from another "
        "machine and over plaintext"},
       scenario_token_ip_mismatch},
      {{"expired-token",
        "a legitimate token is replayed 901 s after minting"},
       scenario_expired_token},
      {{"otp-reuse",
        "attacker replays a code the victim already used successfully"},
       scenario_otp_reuse},
      {{"tampered-token",
        "attacker flips ciphertext bytes and forges claims hunting a valid "
        "token"},
       scenario_tampered_token},
      {{"flood-otp-requests",
        "attacker hammers the code request, with wrong challenge answers and "
        "beyond the rate limit"},
       scenario_flood},
      {{"happy-path",
        "control: the legitimate user completes both flows"},
       scenario_happy_path},
  };
  return kScenarios;
}

}  // namespace

const char* to_string(Verdict verdict) {
  return verdict == Verdict::AttackBlocked ? "AttackBlocked"
                                           : "AttackSucceeded";
}

std::vector<ScenarioInfo> list_scenarios() {
  std::vector<ScenarioInfo> out;
  out.reserve(registry().size());
  for (const auto& entry : registry()) out.push_back(entry.info);
  return out;
}

ScenarioReport run_scenario(const std::string& name, std::uint64_t seed,
                            const RunOptions& options) {
  const ScenarioEntry* entry = nullptr;
  for (const auto& candidate : registry()) {
    if (candidate.info.name == name) {
      entry = &candidate;
      break;
    }
  }
  if (entry == nullptr) {
    throw Error(ErrorCode::UnknownScenario, "no scenario named " + name);
  }

  ServiceConfig config;
  config.challenge_expected_answer = kChallengeAnswer;

  auto clock = std::make_shared<TestClock>(0);
  auto rng = std::make_shared<crypto::SeededRandom>(seed);
  App app(config, crypto::Keypair::generate(2048), clock, rng);

  ScenarioReport report;
  report.scenario = name;

  if (options.over_http) {
    HttpDriver driver(app, *clock);
    entry->run(driver, report);
  } else {
    InProcessDriver driver(app, *clock);
    entry->run(driver, report);
  }

  report.verdict = Verdict::AttackBlocked;
  for (const auto& step : report.steps) {
    if (step.actor == "attacker" && step.outcome == "granted") {
      report.verdict = Verdict::AttackSucceeded;
    }
  }
  return report;
}

nlohmann::json to_json(const ScenarioReport& report) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& step : report.steps) {
    steps.push_back({{"actor", step.actor},
                     {"action", step.action},
                     {"outcome", step.outcome}});
  }
  return {{"scenario", report.scenario},
          {"steps", steps},
          {"verdict", to_string(report.verdict)},
          {"legit_user_outcome", report.legit_user_outcome}};
}

std::string render_text(const ScenarioReport& report) {
  std::ostringstream out;
  out << "scenario: " << report.scenario << "\n";
  std::size_t actor_width = 0;
  for (const auto& step : report.steps) {
    actor_width = std::max(actor_width, step.actor.size());
  }
  int index = 1;
  for (const auto& step : report.steps) {
    out << "  " << index++ << ". [" << step.actor
        << std::string(actor_width - step.actor.size(), ' ') << "] "
        << step.action << " -> " << step.outcome << "\n";
  }
  out << "legit user: " << report.legit_user_outcome << "\n";
  out << "verdict: " << to_string(report.verdict) << "\n";
  return out.str();
}

}  // namespace appt::harness
