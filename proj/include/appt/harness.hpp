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

#ifndef APPT_HARNESS_HPP
#define APPT_HARNESS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace appt::harness {

/// One scripted action by one actor, with the decision it produced.
/// Outcomes are short stable strings: "granted", a deny reason name,
/// or an informational note for non-authentication steps.
struct ScenarioStep {
  std::string actor;
  std::string action;
  std::string outcome;

  bool operator==(const ScenarioStep&) const = default;
};

enum class Verdict { AttackBlocked, AttackSucceeded };

const char* to_string(Verdict verdict);

struct ScenarioReport {
  std::string scenario;
  std::vector<ScenarioStep> steps;
  Verdict verdict = Verdict::AttackBlocked;
  std::string legit_user_outcome;

  bool operator==(const ScenarioReport&) const = default;
};

struct ScenarioInfo {
  std::string name;
  std::string description;
};

struct RunOptions {
  // Default runs call the service core in-process. over_http replays
  // the same script through loopback listeners (TLS plus a plaintext
  // one for the insecure-transport steps).
  bool over_http = false;
};

// Registered scenario names with one-line descriptions, stable order.
std::vector<ScenarioInfo> list_scenarios();

// Runs one scripted scenario against a fresh service instance. The
// seed fixes all protocol randomness, so reports are reproducible.
// Throws Error{UnknownScenario} for unregistered names.
ScenarioReport run_scenario(const std::string& name, std::uint64_t seed,
                            const RunOptions& options = {});

nlohmann::json to_json(const ScenarioReport& report);
std::string render_text(const ScenarioReport& report);

}  // namespace appt::harness

#endif  // APPT_HARNESS_HPP
