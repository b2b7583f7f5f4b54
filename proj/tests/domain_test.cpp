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

#include "appt/domain.hpp"

#include <gtest/gtest.h>

#include "appt/base64.hpp"
#include "appt/clock.hpp"
#include "test_support.hpp"

namespace appt {
namespace {

using testing::expect_error;

UserRecord fixture_user() {
  UserRecord user;
  user.username = testing::kUser;
  user.permanent_credential_hash = Bytes{1, 2, 3};
  user.mobile = testing::kMobile;
  user.email = testing::kEmail;
  return user;
}

TEST(UserRecordTest, FixtureRowValidates) {
  EXPECT_NO_THROW(validate(fixture_user()));
}

TEST(UserRecordTest, EmptyUsernameRejected) {
  auto user = fixture_user();
  user.username = "";
  expect_error(ErrorCode::ValidationFailed, [&] { validate(user); });
}

TEST(UserRecordTest, ControlCharacterInUsernameRejected) {
  auto user = fixture_user();
  user.username = "aq\twert";
  expect_error(ErrorCode::ValidationFailed, [&] { validate(user); });
}

TEST(UserRecordTest, MobileShapes) {
  EXPECT_TRUE(is_valid_mobile("9689563581"));
  EXPECT_TRUE(is_valid_mobile("1234567"));          // 7 digits, lower bound
  EXPECT_TRUE(is_valid_mobile("123456789012345"));  // 15 digits, upper bound
  EXPECT_FALSE(is_valid_mobile("123456"));
  EXPECT_FALSE(is_valid_mobile("1234567890123456"));
  EXPECT_FALSE(is_valid_mobile("96895abc81"));
  EXPECT_FALSE(is_valid_mobile("+9689563581"));
  EXPECT_FALSE(is_valid_mobile(""));
}

TEST(UserRecordTest, EmailShapes) {
  EXPECT_TRUE(is_valid_email("aqwr@yml.co"));
  EXPECT_TRUE(is_valid_email("a@b"));
  EXPECT_FALSE(is_valid_email("ab.c"));
  EXPECT_FALSE(is_valid_email("@yml.co"));
  EXPECT_FALSE(is_valid_email("aqwr@"));
  EXPECT_FALSE(is_valid_email("a@b@c"));
}

TEST(UserRecordTest, BadMobileAndEmailRejected) {
  auto user = fixture_user();
  user.mobile = "12345";
  expect_error(ErrorCode::ValidationFailed, [&] { validate(user); });
  user = fixture_user();
  user.email = "not-an-address";
  expect_error(ErrorCode::ValidationFailed, [&] { validate(user); });
}

TEST(AuthDecisionTest, ExactlyOneSidePopulated) {
  const auto granted = AuthDecision::make_granted("abc123");
  EXPECT_TRUE(granted.granted());
  EXPECT_EQ(granted.session_id(), "abc123");
  EXPECT_THROW(granted.reason(), std::logic_error);

  const auto denied = AuthDecision::make_denied(DenyReason::OtpMismatch);
  EXPECT_FALSE(denied.granted());
  EXPECT_EQ(denied.reason(), DenyReason::OtpMismatch);
  EXPECT_THROW(denied.session_id(), std::logic_error);
}

TEST(DenyReasonTest, StringRoundTrip) {
  EXPECT_EQ(all_deny_reasons().size(), 13u);
  for (const DenyReason reason : all_deny_reasons()) {
    const auto parsed = deny_reason_from_string(to_string(reason));
    ASSERT_TRUE(parsed.has_value());
    EXPECT_EQ(*parsed, reason);
  }
  EXPECT_FALSE(deny_reason_from_string("NotAReason").has_value());
}

TEST(EncryptedTokenTest, EncodedMatchesCiphertext) {
  const Bytes raw = {0x41, 0x42, 0x43};
  const auto token = EncryptedToken::from_ciphertext(raw);
  EXPECT_EQ(token.encoded, "QUJD");
  const auto parsed = EncryptedToken::from_encoded(token.encoded);
  EXPECT_EQ(parsed, token);
}

TEST(EncryptedTokenTest, BadEncodingRejected) {
  expect_error(ErrorCode::MalformedCookie,
               [] { EncryptedToken::from_encoded("@@@@"); });
  expect_error(ErrorCode::MalformedCookie,
               [] { EncryptedToken::from_encoded("QUJ"); });
}

TEST(Base64Test, KnownVectors) {
  EXPECT_EQ(base64_encode(Bytes{}), "");
  EXPECT_EQ(base64_encode(Bytes{0x41}), "QQ==");
  EXPECT_EQ(base64_encode(Bytes{0x41, 0x42}), "QUI=");
  EXPECT_EQ(base64_encode(Bytes{0x41, 0x42, 0x43}), "QUJD");
}

TEST(Base64Test, StrictDecoding) {
  EXPECT_FALSE(base64_decode("QQ=").has_value());    // bad length
  EXPECT_FALSE(base64_decode("Q===").has_value());   // too much padding
  EXPECT_FALSE(base64_decode("QQ=Q").has_value());   // padding mid-group
  EXPECT_FALSE(base64_decode("QR==").has_value());   // set padding bits
  EXPECT_FALSE(base64_decode("QUI=QQ==").has_value());  // padding mid-string
  EXPECT_FALSE(base64_decode("QU\nD").has_value());  // whitespace
  ASSERT_TRUE(base64_decode("").has_value());
  EXPECT_TRUE(base64_decode("")->empty());
}

TEST(Base64Test, RoundTripProperty) {
  std::mt19937_64 engine(7);
  std::uniform_int_distribution<int> byte(0, 255);
  std::uniform_int_distribution<std::size_t> len(0, 600);
  for (int trial = 0; trial < 200; ++trial) {
    Bytes data(len(engine));
    for (auto& b : data) b = static_cast<std::uint8_t>(byte(engine));
    const auto decoded = base64_decode(base64_encode(data));
    ASSERT_TRUE(decoded.has_value());
    EXPECT_EQ(*decoded, data);
  }
}

TEST(ClockTest, TestClockIsProgrammable) {
  TestClock clock;
  EXPECT_EQ(clock.now(), 0);
  clock.advance(900);
  EXPECT_EQ(clock.now(), 900);
  // Frozen between advances.
  EXPECT_EQ(clock.now(), clock.now());
}

TEST(ClockTest, SystemClockIsSane) {
  SystemClock clock;
  EXPECT_GT(clock.now(), 1500000000);  // after mid-2017
}

}  // namespace
}  // namespace appt
