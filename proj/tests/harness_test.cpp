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

#include <gtest/gtest.h>

#include <set>

#include "test_support.hpp"

namespace appt::harness {
namespace {

using appt::testing::expect_error;

bool has_outcome(const ScenarioReport& report, const std::string& outcome) {
  for (const auto& step : report.steps) {
    if (step.outcome == outcome) return true;
  }
  return false;
}

TEST(ScenarioRegistryTest, ListsSevenStableEntries) {
  const auto first = list_scenarios();
  ASSERT_EQ(first.size(), 7u);
  const auto second = list_scenarios();
  for (std::size_t i = 0; i < first.size(); ++i) {
    EXPECT_EQ(first[i].name, second[i].name);
    EXPECT_FALSE(first[i].description.empty());
  }
  EXPECT_EQ(first[0].name, "forged-site-otp-replay");
  EXPECT_EQ(first.back().name, "happy-path");
}

TEST(ScenarioRegistryTest, EveryListedScenarioRuns) {
  for (const auto& info : list_scenarios()) {
    const auto report = run_scenario(info.name, 1);
    EXPECT_EQ(report.scenario, info.name);
    EXPECT_FALSE(report.steps.empty());
  }
}

TEST(ScenarioRegistryTest, UnknownScenarioRejected) {
  expect_error(ErrorCode::UnknownScenario, [] { run_scenario("no-such", 1); });
}

TEST(ScenarioOutcomesTest, ForgedSiteReplayIsBlocked) {
  const auto report = run_scenario("forged-site-otp-replay", 1);
  EXPECT_EQ(report.verdict, Verdict::AttackBlocked);
  EXPECT_TRUE(has_outcome(report, "TokenMissing"));
  EXPECT_TRUE(has_outcome(report, "OtpAlreadyUsed"));  // the OTP was spent
  EXPECT_TRUE(has_outcome(report, "OtpMismatch"));
  EXPECT_TRUE(has_outcome(report, "BadCredentials"));
  EXPECT_TRUE(has_outcome(report, "UnknownUser"));
  EXPECT_EQ(report.legit_user_outcome, "granted after re-requesting a code");
}

TEST(ScenarioOutcomesTest, TokenIpMismatchIsBlocked) {
  const auto report = run_scenario("token-ip-mismatch", 1);
  EXPECT_EQ(report.verdict, Verdict::AttackBlocked);
  EXPECT_TRUE(has_outcome(report, "MachineMismatch"));
  EXPECT_TRUE(has_outcome(report, "InsecureTransport"));
  EXPECT_EQ(report.legit_user_outcome, "granted");
}

TEST(ScenarioOutcomesTest, ExpiredTokenIsBlocked) {
  const auto report = run_scenario("expired-token", 1);
  EXPECT_EQ(report.verdict, Verdict::AttackBlocked);
  EXPECT_TRUE(has_outcome(report, "TokenExpired"));
  EXPECT_EQ(report.legit_user_outcome, "granted at 899 s");
}

TEST(ScenarioOutcomesTest, OtpReuseIsBlocked) {
  const auto report = run_scenario("otp-reuse", 1);
  EXPECT_EQ(report.verdict, Verdict::AttackBlocked);
  EXPECT_TRUE(has_outcome(report, "OtpAlreadyUsed"));
  EXPECT_TRUE(has_outcome(report, "TokenNameMismatch"));
  EXPECT_EQ(report.legit_user_outcome, "granted");
}

TEST(ScenarioOutcomesTest, TamperedTokenIsBlocked) {
  const auto report = run_scenario("tampered-token", 1);
  EXPECT_EQ(report.verdict, Verdict::AttackBlocked);
  EXPECT_TRUE(has_outcome(report, "TokenUndecryptable"));
  EXPECT_TRUE(has_outcome(report, "TokenNameMismatch"));
  EXPECT_TRUE(has_outcome(report, "UserMismatch"));
}

TEST(ScenarioOutcomesTest, FloodIsBlocked) {
  const auto report = run_scenario("flood-otp-requests", 1);
  EXPECT_EQ(report.verdict, Verdict::AttackBlocked);
  EXPECT_TRUE(has_outcome(report, "ChallengeFailed x100"));
  EXPECT_TRUE(has_outcome(report, "no messages sent"));
  EXPECT_TRUE(has_outcome(report, "RateLimited"));
}

TEST(ScenarioOutcomesTest, HappyPathGrantsTheLegitUser) {
  const auto report = run_scenario("happy-path", 1);
  EXPECT_EQ(report.verdict, Verdict::AttackBlocked);  // vacuously
  EXPECT_EQ(report.legit_user_outcome, "granted");
  EXPECT_TRUE(has_outcome(report, "granted"));
}

TEST(ScenarioPropertiesTest, NoAttackerStepIsEverGranted) {
  for (const auto& info : list_scenarios()) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const auto report = run_scenario(info.name, seed);
      for (const auto& step : report.steps) {
        EXPECT_FALSE(step.actor == "attacker" && step.outcome == "granted")
            << info.name << " seed " << seed;
      }
      EXPECT_EQ(report.verdict, Verdict::AttackBlocked)
          << info.name << " seed " << seed;
    }
  }
}

TEST(ScenarioPropertiesTest, ReportsAreDeterministicPerSeed) {
  for (const auto& name : {"forged-site-otp-replay", "tampered-token"}) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const auto first = to_json(run_scenario(name, seed)).dump();
      const auto second = to_json(run_scenario(name, seed)).dump();
      EXPECT_EQ(first, second) << name << " seed " << seed;
    }
  }
}

TEST(ScenarioPropertiesTest, EveryDenyReasonIsProducedSomewhere) {
  std::set<std::string> outcomes;
  for (const auto& info : list_scenarios()) {
    const auto report = run_scenario(info.name, 1);
    for (const auto& step : report.steps) outcomes.insert(step.outcome);
  }
  for (const DenyReason reason : all_deny_reasons()) {
    EXPECT_TRUE(outcomes.count(to_string(reason)) == 1)
        << "no scenario step produced " << to_string(reason);
  }
}

TEST(ScenarioPropertiesTest, HttpModeMatchesInProcessReports) {
  RunOptions over_http;
  over_http.over_http = true;
  for (const auto& name : {"forged-site-otp-replay", "token-ip-mismatch"}) {
    const auto direct = to_json(run_scenario(name, 2)).dump();
    const auto http = to_json(run_scenario(name, 2, over_http)).dump();
    EXPECT_EQ(direct, http) << name;
  }
}

TEST(ScenarioReportTest, JsonShape) {
  const auto report = run_scenario("happy-path", 1);
  const auto doc = to_json(report);
  EXPECT_EQ(doc.at("scenario"), "happy-path");
  EXPECT_EQ(doc.at("verdict"), "AttackBlocked");
  EXPECT_TRUE(doc.at("steps").is_array());
  ASSERT_FALSE(doc.at("steps").empty());
  EXPECT_TRUE(doc.at("steps")[0].contains("actor"));
  EXPECT_TRUE(doc.at("steps")[0].contains("action"));
  EXPECT_TRUE(doc.at("steps")[0].contains("outcome"));

  const auto text = render_text(report);
  EXPECT_NE(text.find("scenario: happy-path"), std::string::npos);
  EXPECT_NE(text.find("verdict: AttackBlocked"), std::string::npos);
}

}  // namespace
}  // namespace appt::harness
