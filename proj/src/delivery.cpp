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

#include "appt/delivery.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace appt {

const char* to_string(Channel channel) {
  return channel == Channel::Sms ? "sms" : "email";
}

std::optional<Channel> channel_from_string(std::string_view name) {
  if (name == "sms") return Channel::Sms;
  if (name == "email") return Channel::Email;
  return std::nullopt;
}

std::uint64_t Outbox::dispatch(Channel channel, const std::string& destination,
                               const std::string& body, Instant now) {
  const bool shape_ok = channel == Channel::Sms
                            ? is_valid_mobile(destination)
                            : is_valid_email(destination);
  if (!shape_ok) {
    throw Error(ErrorCode::BadDestination,
                std::string("destination does not match channel ") +
                    to_string(channel) + ": " + destination);
  }

  std::lock_guard lock(mu_);
  OutboundMessage message{channel, destination, body, now, next_receipt_++};
  if (!sink_path_.empty()) {
    // Best-effort tap for outside observers; the in-memory queue is
    // the channel of record.
    std::ofstream sink(sink_path_, std::ios::app);
    if (sink) {
      const nlohmann::json line = {{"channel", to_string(message.channel)},
                                   {"destination", message.destination},
                                   {"body", message.body},
                                   {"sent_at", message.sent_at},
                                   {"receipt", message.receipt}};
      sink << line.dump() << '\n';
    } else {
      std::fprintf(stderr, "appt: cannot append to outbox sink %s\n",
                   sink_path_.c_str());
    }
  }
  queue_.push_back(std::move(message));
  return queue_.back().receipt;
}

std::vector<OutboundMessage> Outbox::drain() {
  std::lock_guard lock(mu_);
  std::vector<OutboundMessage> out(queue_.begin(), queue_.end());
  queue_.clear();
  return out;
}

std::size_t Outbox::pending() const {
  std::lock_guard lock(mu_);
  return queue_.size();
}

}  // namespace appt
