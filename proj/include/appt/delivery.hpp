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

#ifndef APPT_DELIVERY_HPP
#define APPT_DELIVERY_HPP

#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "appt/domain.hpp"

namespace appt {

enum class Channel { Sms, Email };

const char* to_string(Channel channel);
std::optional<Channel> channel_from_string(std::string_view name);

struct OutboundMessage {
  Channel channel;
  std::string destination;
  std::string body;
  Instant sent_at = 0;
  std::uint64_t receipt = 0;

  bool operator==(const OutboundMessage&) const = default;
};

/// Stand-in for the SMS/email gateway: messages land in an inspectable
/// queue instead of a phone or mailbox, so tests and the harness can
/// play the recipient. An optional sink file gets one JSON line per
/// message, best-effort.
class Outbox {
 public:
  Outbox() = default;
  explicit Outbox(std::string sink_path) : sink_path_(std::move(sink_path)) {}

  Outbox(const Outbox&) = delete;
  Outbox& operator=(const Outbox&) = delete;

  // Appends to the queue and returns a unique, monotone receipt id.
  // Throws Error{BadDestination} when the destination shape does not
  // match the channel (digits for Sms, an address for Email).
  std::uint64_t dispatch(Channel channel, const std::string& destination,
                         const std::string& body, Instant now);

  // Returns and removes all pending messages in send order.
  std::vector<OutboundMessage> drain();

  std::size_t pending() const;

 private:
  mutable std::mutex mu_;
  std::deque<OutboundMessage> queue_;
  std::uint64_t next_receipt_ = 1;
  std::string sink_path_;
};

}  // namespace appt

#endif  // APPT_DELIVERY_HPP
