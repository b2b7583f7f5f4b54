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

#include "appt/otp.hpp"

#include <algorithm>
#include <set>

namespace appt::otp {

std::string_view alphabet_for(CharClass cls) {
  switch (cls) {
    case CharClass::Upper: return "ABCDEFGHIJKLMNOPQRSTUVWXYZ";
    case CharClass::Lower: return "abcdefghijklmnopqrstuvwxyz";
    case CharClass::Digit: return "0123456789";
    case CharClass::Special: return kSpecialChars;
  }
  return {};
}

void validate(const OtpPolicy& policy) {
  if (policy.length < 6) {
    throw Error(ErrorCode::InvalidPolicy, "OTP length must be at least 6");
  }
  if (policy.charset.empty()) {
    throw Error(ErrorCode::InvalidPolicy, "charset must not be empty");
  }
  const std::set<CharClass> distinct(policy.charset.begin(),
                                     policy.charset.end());
  if (distinct.size() != policy.charset.size()) {
    throw Error(ErrorCode::InvalidPolicy, "charset contains duplicate classes");
  }
  if (policy.require_one_per_class &&
      policy.length < static_cast<int>(policy.charset.size())) {
    throw Error(ErrorCode::InvalidPolicy,
                "length " + std::to_string(policy.length) +
                    " cannot hold one character from each of " +
                    std::to_string(policy.charset.size()) + " classes");
  }
}

std::string generate_otp(const OtpPolicy& policy, crypto::RandomSource& rng) {
  validate(policy);

  std::string alphabet;
  for (CharClass cls : policy.charset) {
    alphabet += alphabet_for(cls);
  }

  for (;;) {
    std::string candidate(static_cast<std::size_t>(policy.length), '\0');
    for (auto& slot : candidate) {
      slot = alphabet[crypto::uniform_index(rng, alphabet.size())];
    }
    if (!policy.require_one_per_class) return candidate;

    const bool covered = std::all_of(
        policy.charset.begin(), policy.charset.end(), [&](CharClass cls) {
          const auto chars = alphabet_for(cls);
          return candidate.find_first_of(chars) != std::string::npos;
        });
    // Whole-string rejection keeps the result uniform over the set of
    // strings that satisfy the policy.
    if (covered) return candidate;
  }
}

}  // namespace appt::otp
