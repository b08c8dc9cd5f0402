/*
 * Copyright 2026 The hpca Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "hpca/transport.h"

#include <utility>

#include "absl/strings/str_format.h"
#include "hpca/wire.h"

namespace hpca {

absl::Status SimulationBus::Send(const ProtocolMessage& msg) {
  absl::StatusOr<std::vector<uint8_t>> frame = SerializeFrame(msg);
  if (!frame.ok()) return frame.status();
  queue_.push_back(Pending{msg.receiver, *std::move(frame)});
  return absl::OkStatus();
}

absl::StatusOr<std::optional<ProtocolMessage>> SimulationBus::DeliverNext() {
  if (queue_.empty()) return std::optional<ProtocolMessage>();
  Pending next = std::move(queue_.front());
  queue_.pop_front();
  absl::StatusOr<ProtocolMessage> msg = DeserializeFrame(next.frame);
  if (!msg.ok()) return msg.status();
  transcript_.messages.push_back(*msg);
  return std::optional<ProtocolMessage>(*std::move(msg));
}

absl::StatusOr<ProtocolMessage> SimulationBus::Receive(PartyId party,
                                                       absl::Duration timeout) {
  for (auto it = queue_.begin(); it != queue_.end(); ++it) {
    if (it->receiver != party) continue;
    absl::StatusOr<ProtocolMessage> msg = DeserializeFrame(it->frame);
    queue_.erase(it);
    if (!msg.ok()) return msg.status();
    transcript_.messages.push_back(*msg);
    return msg;
  }
  return absl::DeadlineExceededError(absl::StrFormat(
      "no message for party %d within %s", party, absl::FormatDuration(timeout)));
}

}  // namespace hpca
