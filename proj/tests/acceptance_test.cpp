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
//
// End-to-end acceptance suite. Each test is one acceptance criterion;
// the custom main prints one PASS/FAIL line per criterion.

#include <gtest/gtest.h>
#include <httplib.h>

#include <array>
#include <atomic>
#include <bit>
#include <map>
#include <set>
#include <thread>

#include "appt/gate.hpp"
#include "appt/harness.hpp"
#include "appt/otp.hpp"
#include "appt/service.hpp"
#include "test_support.hpp"

namespace appt {
namespace {

using testing::code_from_body;
using testing::kAnswer;
using testing::kClientIp;
using testing::kEmail;
using testing::kMobile;
using testing::kOtherIp;
using testing::kPassword;
using testing::kUser;
using testing::random_claims;
using testing::sample_claims;
using testing::shared_keypair;

// Shared fixture pieces -----------------------------------------------------

struct GateRig {
  Store store;
  Outbox outbox;
  StaticChallenge challenge{kAnswer};
  crypto::SystemRandom rng;
  Gate gate{store, outbox, shared_keypair(), GateConfig{}, challenge, rng};

  GateRig() {
    UserRecord user;
    user.username = kUser;
    user.permanent_credential_hash = crypto::salted_hash(kPassword, rng);
    user.mobile = kMobile;
    user.email = kEmail;
    store.upsert_user(user);
  }

  struct Issued {
    std::string otp;
    EncryptedToken token;
  };

  Issued issue(Instant now) {
    const OtpGrant grant =
        gate.request_otp(kUser, kPassword, Channel::Sms, kAnswer, kClientIp,
                         now);
    const auto messages = outbox.drain();
    EXPECT_FALSE(messages.empty());
    return {code_from_body(messages.back().body), grant.token};
  }
};

// Criterion 1 ---------------------------------------------------------------
// 1,000 randomized valid claims survive both round trips unchanged.

TEST(Acceptance, Criterion01_CryptoRoundTrips) {
  std::mt19937_64 engine(101);
  int codec_failures = 0;
  int envelope_failures = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const TokenClaims claims = random_claims(engine);
    if (crypto::decode_claims(crypto::encode_claims(claims)) != claims) {
      ++codec_failures;
    }
    const EncryptedToken token =
        crypto::encrypt_token(claims, shared_keypair());
    if (crypto::decrypt_token(token, shared_keypair()) != claims) {
      ++envelope_failures;
    }
  }
  EXPECT_EQ(codec_failures, 0);
  EXPECT_EQ(envelope_failures, 0);
}

// Criterion 2 ---------------------------------------------------------------
// Every single-byte ciphertext mutation of a valid 2048-bit token fails.

TEST(Acceptance, Criterion02_TamperResistance) {
  const EncryptedToken token =
      crypto::encrypt_token(sample_claims(), shared_keypair());
  ASSERT_EQ(token.ciphertext.size(), 256u);
  int failed = 0;
  int parseable = 0;
  for (std::size_t position = 0; position < 256; ++position) {
    Bytes mutated = token.ciphertext;
    mutated[position] ^= 0xff;
    try {
      (void)crypto::decrypt_token(EncryptedToken::from_ciphertext(mutated),
                                  shared_keypair());
      ++parseable;
    } catch (const Error&) {
      ++failed;
    }
  }
  EXPECT_EQ(failed, 256);
  EXPECT_EQ(parseable, 0);
}

// Criterion 3 ---------------------------------------------------------------
// At most one Granted per issued OTP, exactly one under a 16-way race.

TEST(Acceptance, Criterion03_SingleUseOtp) {
  // Randomized sequential attempt mixes.
  {
    GateRig rig;
    std::mt19937_64 engine(33);
    std::uniform_int_distribution<int> attempts(2, 10);
    std::uniform_int_distribution<int> flavor(0, 3);
    for (int round = 0; round < 30; ++round) {
      const Instant base = round * 10000;
      const auto issued = rig.issue(base);
      int granted = 0;
      for (int i = 0, n = attempts(engine); i < n; ++i) {
        AuthDecision decision = [&] {
          switch (flavor(engine)) {
            case 0:
              return rig.gate.authenticate(kUser, issued.otp, issued.token,
                                           kClientIp, true, base + 1);
            case 1:
              return rig.gate.authenticate(kUser, "wrong!1", issued.token,
                                           kClientIp, true, base + 1);
            case 2:
              return rig.gate.authenticate(kUser, issued.otp, std::nullopt,
                                           kClientIp, true, base + 1);
            default:
              return rig.gate.authenticate(kUser, issued.otp, issued.token,
                                           kOtherIp, true, base + 1);
          }
        }();
        if (decision.granted()) ++granted;
      }
      ASSERT_LE(granted, 1) << "round " << round;
    }
  }

  // Sixteen concurrent identical valid logins: exactly one winner.
  {
    GateRig rig;
    const auto issued = rig.issue(0);
    std::atomic<int> granted{0};
    std::atomic<int> already_used{0};
    std::vector<std::thread> threads;
    for (int i = 0; i < 16; ++i) {
      threads.emplace_back([&] {
        const AuthDecision decision = rig.gate.authenticate(
            kUser, issued.otp, issued.token, kClientIp, true, 1);
        if (decision.granted()) {
          granted.fetch_add(1);
        } else if (decision.reason() == DenyReason::OtpAlreadyUsed) {
          already_used.fetch_add(1);
        }
      });
    }
    for (auto& thread : threads) thread.join();
    EXPECT_EQ(granted.load(), 1);
    EXPECT_EQ(already_used.load(), 15);
  }
}

// Criterion 4 ---------------------------------------------------------------
// A failed attempt spends the OTP: the later "correct" attempt is dead.

TEST(Acceptance, Criterion04_ReplaySpendOrdering) {
  {
    GateRig rig;
    const auto issued = rig.issue(0);
    const AuthDecision missing = rig.gate.authenticate(
        kUser, issued.otp, std::nullopt, kClientIp, true, 1);
    ASSERT_FALSE(missing.granted());
    EXPECT_EQ(missing.reason(), DenyReason::TokenMissing);
    const AuthDecision retry = rig.gate.authenticate(
        kUser, issued.otp, issued.token, kClientIp, true, 2);
    ASSERT_FALSE(retry.granted());
    EXPECT_EQ(retry.reason(), DenyReason::OtpAlreadyUsed);
  }
  {
    GateRig rig;
    const auto issued = rig.issue(0);
    Bytes mangled = issued.token.ciphertext;
    mangled[0] ^= 0x01;
    const AuthDecision invalid = rig.gate.authenticate(
        kUser, issued.otp, EncryptedToken::from_ciphertext(mangled), kClientIp,
        true, 1);
    ASSERT_FALSE(invalid.granted());
    EXPECT_EQ(invalid.reason(), DenyReason::TokenUndecryptable);
    const AuthDecision retry = rig.gate.authenticate(
        kUser, issued.otp, issued.token, kClientIp, true, 2);
    EXPECT_EQ(retry.reason(), DenyReason::OtpAlreadyUsed);
  }
}

// Criterion 5 ---------------------------------------------------------------
// TTL 900 s: alive at issued+899, expired at issued+901.

TEST(Acceptance, Criterion05_ExpiryBoundary) {
  GateRig rig;
  auto issued = rig.issue(0);
  const AuthDecision before = rig.gate.authenticate(
      kUser, issued.otp, issued.token, kClientIp, true, 899);
  EXPECT_TRUE(before.granted()) << "899 s must pass the expiry check";

  issued = rig.issue(10000);
  const AuthDecision after = rig.gate.authenticate(
      kUser, issued.otp, issued.token, kClientIp, true, 10000 + 901);
  ASSERT_FALSE(after.granted());
  EXPECT_EQ(after.reason(), DenyReason::TokenExpired);
}

// Criterion 6 ---------------------------------------------------------------
// Single-field claim mutations re-encrypted under the service key each
// produce their specific denial.

TEST(Acceptance, Criterion06_MachineBinding) {
  const struct {
    const char* field;
    void (*mutate)(TokenClaims&);
    DenyReason expected;
  } cases[] = {
      {"token_name",
       [](TokenClaims& c) {
         c.token_name[0] = c.token_name[0] == '0' ? '1' : '0';
       },
       DenyReason::TokenNameMismatch},
      {"host_username", [](TokenClaims& c) { c.host_username += "x"; },
       DenyReason::UserMismatch},
      {"host_ip", [](TokenClaims& c) { c.host_ip = "172.16.0.9"; },
       DenyReason::MachineMismatch},
      {"expires_at", [](TokenClaims& c) { c.expires_at = c.issued_at - 1; },
       DenyReason::TokenExpired},
  };
  for (const auto& mutation : cases) {
    GateRig rig;
    const auto issued = rig.issue(0);
    TokenClaims claims = crypto::decrypt_token(issued.token, shared_keypair());
    mutation.mutate(claims);
    const EncryptedToken forged =
        crypto::encrypt_token(claims, shared_keypair().public_part());
    const AuthDecision decision =
        rig.gate.authenticate(kUser, issued.otp, forged, kClientIp, true, 1);
    ASSERT_FALSE(decision.granted()) << mutation.field;
    EXPECT_EQ(decision.reason(), mutation.expected) << mutation.field;
  }
}

// Criterion 7 ---------------------------------------------------------------
// Wrong challenges never reach delivery; the window caps correct ones.

TEST(Acceptance, Criterion07_FloodDefense) {
  GateRig rig;
  for (int i = 0; i < 100; ++i) {
    try {
      rig.gate.request_otp(kUser, kPassword, Channel::Sms, "wrong answer",
                           kClientIp, 0);
      FAIL() << "challenge should have failed";
    } catch (const Error& e) {
      ASSERT_EQ(e.code(), ErrorCode::ChallengeFailed);
    }
  }
  EXPECT_EQ(rig.outbox.pending(), 0u) << "flood must not dispatch";

  int issued = 0;
  int limited = 0;
  for (int i = 0; i < 6; ++i) {
    try {
      rig.gate.request_otp(kUser, kPassword, Channel::Sms, kAnswer, kClientIp,
                           0);
      ++issued;
    } catch (const Error& e) {
      ASSERT_EQ(e.code(), ErrorCode::RateLimited);
      ++limited;
    }
  }
  EXPECT_EQ(issued, 5);   // the configured rate limit
  EXPECT_EQ(limited, 1);  // the (limit+1)-th request
  EXPECT_EQ(rig.outbox.pending(), 5u) << "denied request dispatched";
}

// Criterion 8 ---------------------------------------------------------------
// Full happy path over a TLS loopback listener, then the replay 401.

TEST(Acceptance, Criterion08_EndToEndOverHttp) {
  ServiceConfig config;
  config.challenge_expected_answer = kAnswer;
  App app(config, shared_keypair(), std::make_shared<TestClock>(),
          std::make_shared<crypto::SystemRandom>());

  const auto material = crypto::make_self_signed_cert("appt-acceptance");
  HttpListener::Options options;
  options.tls = true;
  options.cert_pem = material.cert_pem;
  options.key_pem = material.key_pem;
  options.trusted_proxy = "127.0.0.1";
  HttpListener listener(app, options);
  ASSERT_TRUE(listener.start());

  httplib::SSLClient client("127.0.0.1", listener.port());
  client.enable_server_certificate_verification(false);

  const nlohmann::json user = {{"username", kUser},
                               {"password", kPassword},
                               {"mobile", kMobile},
                               {"email", kEmail}};
  auto provisioned =
      client.Post("/admin/users", user.dump(), "application/json");
  ASSERT_TRUE(provisioned);
  ASSERT_EQ(provisioned->status, 201);

  const nlohmann::json request = {{"username", kUser},
                                  {"password", kPassword},
                                  {"channel", "sms"},
                                  {"challenge_answer", kAnswer}};
  httplib::Headers from_victim = {{"X-Forwarded-For", kClientIp}};
  auto issued = client.Post("/getpassword", from_victim, request.dump(),
                            "application/json");
  ASSERT_TRUE(issued);
  ASSERT_EQ(issued->status, 200) << issued->body;
  ASSERT_TRUE(nlohmann::json::parse(issued->body).contains("receipt"));
  const std::string set_cookie = issued->get_header_value("Set-Cookie");
  const std::string cookie = set_cookie.substr(0, set_cookie.find(';'));

  const auto messages = app.outbox().drain();
  ASSERT_EQ(messages.size(), 1u);
  ASSERT_EQ(messages[0].destination, kMobile);
  const std::string otp = code_from_body(messages[0].body);

  httplib::Headers login_headers = {{"X-Forwarded-For", kClientIp},
                                    {"Cookie", cookie}};
  const nlohmann::json login = {{"username", kUser}, {"otp", otp}};
  auto granted =
      client.Post("/login", login_headers, login.dump(), "application/json");
  ASSERT_TRUE(granted);
  ASSERT_EQ(granted->status, 200) << granted->body;
  const std::string session_id =
      nlohmann::json::parse(granted->body).at("session_id");
  EXPECT_FALSE(session_id.empty());

  auto replay =
      client.Post("/login", login_headers, login.dump(), "application/json");
  ASSERT_TRUE(replay);
  EXPECT_EQ(replay->status, 401);
  listener.stop();
}

// Criterion 9 ---------------------------------------------------------------
// All seven scenarios: expected verdicts and reasons, deterministic for
// seeds 1-5, and full coverage of the denial vocabulary.

TEST(Acceptance, Criterion09_AttackScenarios) {
  const std::map<std::string, std::vector<std::string>> expected_outcomes = {
      {"forged-site-otp-replay",
       {"TokenMissing", "OtpAlreadyUsed", "OtpMismatch", "BadCredentials",
        "UnknownUser"}},
      {"token-ip-mismatch", {"MachineMismatch", "InsecureTransport"}},
      {"expired-token", {"TokenExpired"}},
      {"otp-reuse", {"OtpAlreadyUsed", "TokenNameMismatch"}},
      {"tampered-token",
       {"TokenUndecryptable", "TokenNameMismatch", "UserMismatch"}},
      {"flood-otp-requests",
       {"ChallengeFailed", "ChallengeFailed x100", "RateLimited",
        "no messages sent"}},
      {"happy-path", {"granted"}},
  };

  std::set<std::string> all_outcomes;
  for (const auto& info : harness::list_scenarios()) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto report = harness::run_scenario(info.name, seed);
      EXPECT_EQ(report.verdict, harness::Verdict::AttackBlocked)
          << info.name << " seed " << seed;
      if (info.name == "happy-path") {
        EXPECT_EQ(report.legit_user_outcome, "granted") << "seed " << seed;
      }
      for (const auto& step : report.steps) all_outcomes.insert(step.outcome);

      std::set<std::string> outcomes;
      for (const auto& step : report.steps) outcomes.insert(step.outcome);
      for (const auto& want : expected_outcomes.at(info.name)) {
        EXPECT_TRUE(outcomes.count(want))
            << info.name << " seed " << seed << " missing " << want;
      }

      // Byte-identical reports per (name, seed).
      const auto rerun = harness::run_scenario(info.name, seed);
      EXPECT_EQ(harness::to_json(report).dump(),
                harness::to_json(rerun).dump())
          << info.name << " seed " << seed;
    }
  }

  for (const DenyReason reason : all_deny_reasons()) {
    EXPECT_TRUE(all_outcomes.count(to_string(reason)))
        << "scenarios never produced " << to_string(reason);
  }
}

// Criterion 10 --------------------------------------------------------------
// Uniformity of the default-policy generator. Rejection sampling keeps
// the distribution uniform over the admissible set, so each character's
// expected frequency follows the inclusion-exclusion marginal computed
// here from first principles (integer arithmetic, independent of the
// generator).

std::int64_t pow_i64(std::int64_t base, int exp) {
  std::int64_t out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

// Number of length-`length` strings over an alphabet of `alphabet` symbols
// containing at least one symbol from every class listed in `required`.
std::int64_t cover_count(int alphabet, int length,
                         const std::vector<int>& required) {
  std::int64_t total = 0;
  const auto subsets = 1u << required.size();
  for (std::uint32_t mask = 0; mask < subsets; ++mask) {
    int excluded = 0;
    for (std::size_t i = 0; i < required.size(); ++i) {
      if (mask & (1u << i)) excluded += required[i];
    }
    const std::int64_t term = pow_i64(alphabet - excluded, length);
    total += std::popcount(mask) % 2 == 0 ? term : -term;
  }
  return total;
}

TEST(Acceptance, Criterion10_OtpUniformity) {
  const otp::OtpPolicy policy;  // defaults: length 7, all four classes
  const std::vector<std::string_view> alphabets = {
      otp::alphabet_for(otp::CharClass::Upper),
      otp::alphabet_for(otp::CharClass::Lower),
      otp::alphabet_for(otp::CharClass::Digit),
      otp::alphabet_for(otp::CharClass::Special),
  };
  std::vector<int> sizes;
  int alphabet_size = 0;
  for (const auto& chars : alphabets) {
    sizes.push_back(static_cast<int>(chars.size()));
    alphabet_size += static_cast<int>(chars.size());
  }
  ASSERT_EQ(alphabet_size, 70);

  // Exact conditional marginals.
  const std::int64_t admissible = cover_count(alphabet_size, 7, sizes);
  std::vector<double> class_char_probability;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    std::vector<int> others;
    for (std::size_t j = 0; j < sizes.size(); ++j) {
      if (j != k) others.push_back(sizes[j]);
    }
    const std::int64_t with_char_fixed = cover_count(alphabet_size, 6, others);
    class_char_probability.push_back(static_cast<double>(with_char_fixed) /
                                     static_cast<double>(admissible));
  }
  // Internal identity: the per-position marginals must sum to one.
  double marginal_sum = 0;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    marginal_sum += sizes[k] * class_char_probability[k];
  }
  ASSERT_NEAR(marginal_sum, 1.0, 1e-12);

  constexpr int kGenerations = 100000;
  crypto::SystemRandom rng;
  std::map<char, long> counts;
  std::set<std::string> first_ten_thousand;
  bool duplicate = false;
  for (int i = 0; i < kGenerations; ++i) {
    const std::string value = otp::generate_otp(policy, rng);
    for (const char c : value) ++counts[c];
    if (i < 10000 && !first_ten_thousand.insert(value).second) {
      duplicate = true;
    }
  }
  EXPECT_FALSE(duplicate) << "collision within 10,000 consecutive draws";

  const double draws = static_cast<double>(kGenerations) * policy.length;
  double chi2 = 0.0;
  int cells = 0;
  for (std::size_t k = 0; k < alphabets.size(); ++k) {
    for (const char c : alphabets[k]) {
      const double expected = draws * class_char_probability[k];
      const double observed = static_cast<double>(counts[c]);
      chi2 += (observed - expected) * (observed - expected) / expected;
      ++cells;
    }
  }
  ASSERT_EQ(cells, 70);
  // chi-square critical value at significance 0.001 for df = 69.
  EXPECT_LT(chi2, 111.0551);
}

class CriterionPrinter : public ::testing::EmptyTestEventListener {
  void OnTestEnd(const ::testing::TestInfo& info) override {
    std::printf("[CRITERION] %s: %s\n", info.name(),
                info.result()->Passed() ? "PASS" : "FAIL");
    std::fflush(stdout);
  }
};

}  // namespace
}  // namespace appt

int main(int argc, char** argv) {
  ::testing::InitGoogleTest(&argc, argv);
  ::testing::UnitTest::GetInstance()->listeners().Append(
      new appt::CriterionPrinter);
  return RUN_ALL_TESTS();
}
