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

#ifndef APPT_OTP_HPP
#define APPT_OTP_HPP

#include <string>
#include <string_view>
#include <vector>

#include "appt/crypto.hpp"
#include "appt/domain.hpp"

namespace appt::otp {

enum class CharClass { Upper, Lower, Digit, Special };

// Kept clear of characters that are awkward in cookies and URLs.
inline constexpr std::string_view kSpecialChars = "!#$%&*@^";

std::string_view alphabet_for(CharClass cls);

struct OtpPolicy {
  int length = 7;
  std::vector<CharClass> charset = {CharClass::Upper, CharClass::Lower,
                                    CharClass::Digit, CharClass::Special};
  bool require_one_per_class = true;
};

// Throws Error{InvalidPolicy} when length < 6, the charset is empty or
// has duplicates, or one-per-class cannot fit in the length.
void validate(const OtpPolicy& policy);

// A string of exactly policy.length characters drawn from the enabled
// classes. One-per-class is enforced by rejection sampling (whole-string
// regeneration), which keeps the distribution uniform over the
// admissible set.
std::string generate_otp(const OtpPolicy& policy, crypto::RandomSource& rng);

}  // namespace appt::otp

#endif  // APPT_OTP_HPP
