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

#ifndef APPT_BASE64_HPP
#define APPT_BASE64_HPP

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "appt/domain.hpp"

namespace appt {

// Standard-alphabet base-64 with '=' padding.
std::string base64_encode(std::span<const std::uint8_t> data);

// Strict decoder: length must be a multiple of four, only alphabet
// characters and trailing padding are accepted, and padding bits must
// be zero. Returns nullopt on any violation.
std::optional<Bytes> base64_decode(std::string_view text);

}  // namespace appt

#endif  // APPT_BASE64_HPP
