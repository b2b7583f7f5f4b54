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

#include "appt/store.hpp"

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>

namespace appt {

namespace {

constexpr char kSnapshotMagic[8] = {'A', 'P', 'P', 'T', 'S', 'N', 'A', 'P'};
constexpr std::uint32_t kSnapshotVersion = 1;
constexpr std::uint8_t kUserTag = 1;
constexpr std::uint8_t kOtpTag = 2;

void write_u32(std::ostream& out, std::uint32_t v) {
  std::uint8_t buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<std::uint8_t>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), sizeof(buf));
}

void write_i64(std::ostream& out, std::int64_t v) {
  const auto u = static_cast<std::uint64_t>(v);
  std::uint8_t buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<std::uint8_t>(u >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), sizeof(buf));
}

void write_blob(std::ostream& out, std::string_view data) {
  write_u32(out, static_cast<std::uint32_t>(data.size()));
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
}

void write_blob(std::ostream& out, const Bytes& data) {
  write_u32(out, static_cast<std::uint32_t>(data.size()));
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
}

std::uint32_t read_u32(std::istream& in) {
  std::uint8_t buf[4];
  in.read(reinterpret_cast<char*>(buf), sizeof(buf));
  if (!in) throw Error(ErrorCode::IoError, "truncated snapshot");
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | buf[i];
  return v;
}

std::int64_t read_i64(std::istream& in) {
  std::uint8_t buf[8];
  in.read(reinterpret_cast<char*>(buf), sizeof(buf));
  if (!in) throw Error(ErrorCode::IoError, "truncated snapshot");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | buf[i];
  return static_cast<std::int64_t>(v);
}

std::string read_string(std::istream& in) {
  const std::uint32_t len = read_u32(in);
  std::string out(len, '\0');
  in.read(out.data(), len);
  if (!in) throw Error(ErrorCode::IoError, "truncated snapshot");
  return out;
}

Bytes read_bytes(std::istream& in) {
  const std::string s = read_string(in);
  return Bytes(s.begin(), s.end());
}

}  // namespace

void Store::upsert_user(const UserRecord& user) {
  validate(user);
  std::lock_guard lock(mu_);
  users_[user.username] = user;
}

std::optional<UserRecord> Store::lookup_user(const std::string& username) const {
  std::lock_guard lock(mu_);
  const auto it = users_.find(username);
  if (it == users_.end()) return std::nullopt;
  return it->second;
}

void Store::issue_otp(const std::string& username, Bytes otp_hash,
                      std::string token_name, Instant issued_at) {
  std::lock_guard lock(mu_);
  if (users_.find(username) == users_.end()) {
    throw Error(ErrorCode::UnknownUser, "no such user: " + username);
  }
  auto& rows = otp_rows_[username];
  // Supersede: a second request before the first use expires the prior
  // OTP, so exactly one password is live per user.
  for (auto& row : rows) {
    if (row.status == OtpStatus::Active) row.status = OtpStatus::Expired;
  }
  rows.push_back(OtpRecord{username, std::move(otp_hash), OtpStatus::Active,
                           std::move(token_name), issued_at});
}

OtpRecord Store::consume_otp(const std::string& username) {
  std::lock_guard lock(mu_);
  if (users_.find(username) == users_.end()) {
    throw Error(ErrorCode::UnknownUser, "no such user: " + username);
  }
  const auto it = otp_rows_.find(username);
  if (it != otp_rows_.end() && !it->second.empty()) {
    auto& latest = it->second.back();
    if (latest.status == OtpStatus::Active) {
      const OtpRecord snapshot = latest;
      latest.status = OtpStatus::Expired;
      return snapshot;
    }
  }
  throw Error(ErrorCode::OtpAlreadyUsed,
              "no active one-time password for " + username);
}

bool Store::rate_check(const RateKey& key, Instant now, int limit,
                       int window_s) {
  std::lock_guard lock(mu_);
  auto& log = rate_log_[key];
  log.push_back(now);
  const Instant cutoff = now - window_s;
  while (!log.empty() && log.front() <= cutoff) {
    log.pop_front();
  }
  const auto in_window = static_cast<int>(std::count_if(
      log.begin(), log.end(),
      [&](Instant t) { return t > cutoff && t <= now; }));
  return in_window <= limit;
}

std::optional<OtpRecord> Store::latest_otp(const std::string& username) const {
  std::lock_guard lock(mu_);
  const auto it = otp_rows_.find(username);
  if (it == otp_rows_.end() || it->second.empty()) return std::nullopt;
  return it->second.back();
}

std::vector<OtpRecord> Store::otp_history(const std::string& username) const {
  std::lock_guard lock(mu_);
  const auto it = otp_rows_.find(username);
  if (it == otp_rows_.end()) return {};
  return it->second;
}

std::size_t Store::active_otp_count(const std::string& username) const {
  std::lock_guard lock(mu_);
  const auto it = otp_rows_.find(username);
  if (it == otp_rows_.end()) return 0;
  return static_cast<std::size_t>(
      std::count_if(it->second.begin(), it->second.end(), [](const auto& row) {
        return row.status == OtpStatus::Active;
      }));
}

std::size_t Store::user_count() const {
  std::lock_guard lock(mu_);
  return users_.size();
}

void Store::save_snapshot(const std::string& path) const {
  std::lock_guard lock(mu_);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot write snapshot: " + path);
  }
  out.write(kSnapshotMagic, sizeof(kSnapshotMagic));
  write_u32(out, kSnapshotVersion);
  for (const auto& [name, user] : users_) {
    out.put(static_cast<char>(kUserTag));
    write_blob(out, user.username);
    write_blob(out, user.permanent_credential_hash);
    write_blob(out, user.mobile);
    write_blob(out, user.email);
  }
  for (const auto& [name, rows] : otp_rows_) {
    for (const auto& row : rows) {
      out.put(static_cast<char>(kOtpTag));
      write_blob(out, row.username);
      write_blob(out, row.otp_hash);
      out.put(row.status == OtpStatus::Active ? 1 : 0);
      write_blob(out, row.token_name);
      write_i64(out, row.issued_at);
    }
  }
  if (!out.flush()) {
    throw Error(ErrorCode::IoError, "cannot write snapshot: " + path);
  }
}

void Store::load_snapshot(const std::string& path) {
  std::lock_guard lock(mu_);
  users_.clear();
  otp_rows_.clear();
  if (!std::filesystem::exists(path)) {
    return;  // absent file means empty store
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot read snapshot: " + path);
  }
  char magic[sizeof(kSnapshotMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kSnapshotMagic, sizeof(magic)) != 0) {
    throw Error(ErrorCode::IoError, "not a snapshot file: " + path);
  }
  if (const auto version = read_u32(in); version != kSnapshotVersion) {
    throw Error(ErrorCode::IoError,
                "unsupported snapshot version " + std::to_string(version));
  }
  for (int tag = in.get(); tag != std::char_traits<char>::eof();
       tag = in.get()) {
    if (tag == kUserTag) {
      UserRecord user;
      user.username = read_string(in);
      user.permanent_credential_hash = read_bytes(in);
      user.mobile = read_string(in);
      user.email = read_string(in);
      users_[user.username] = std::move(user);
    } else if (tag == kOtpTag) {
      OtpRecord row;
      row.username = read_string(in);
      row.otp_hash = read_bytes(in);
      row.status = in.get() == 1 ? OtpStatus::Active : OtpStatus::Expired;
      row.token_name = read_string(in);
      row.issued_at = read_i64(in);
      otp_rows_[row.username].push_back(std::move(row));
    } else {
      throw Error(ErrorCode::IoError, "unknown snapshot record tag");
    }
  }
}

}  // namespace appt
