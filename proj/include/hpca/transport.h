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

#ifndef HPCA_TRANSPORT_H_
#define HPCA_TRANSPORT_H_

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/time/time.h"
#include "hpca/message.h"

namespace hpca {

inline constexpr absl::Duration kDefaultReceiveTimeout = absl::Seconds(30);

// Point-to-point delivery for one party. Messages from a given sender arrive
// in the order they were sent.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual absl::Status Send(const ProtocolMessage& msg) = 0;
  virtual absl::StatusOr<ProtocolMessage> Receive(absl::Duration timeout) = 0;
};

// Deterministic single-threaded bus. Every message is serialized into a frame
// on Send and decoded again on delivery, so simulated runs exercise the same
// wire format as the TCP transport. Delivery is global FIFO.
class SimulationBus {
 public:
  absl::Status Send(const ProtocolMessage& msg);
  // Oldest pending frame for any receiver, logged to the transcript.
  absl::StatusOr<std::optional<ProtocolMessage>> DeliverNext();
  // Oldest pending frame addressed to `party`. The bus never blocks: an empty
  // queue is a DeadlineExceeded error regardless of `timeout`.
  absl::StatusOr<ProtocolMessage> Receive(PartyId party, absl::Duration timeout);

  bool idle() const { return queue_.empty(); }
  const Transcript& transcript() const { return transcript_; }

  // Transport view of the bus for one party.
  class Endpoint : public Transport {
   public:
    Endpoint(SimulationBus& bus, PartyId self) : bus_(bus), self_(self) {}
    absl::Status Send(const ProtocolMessage& msg) override {
      return bus_.Send(msg);
    }
    absl::StatusOr<ProtocolMessage> Receive(absl::Duration timeout) override {
      return bus_.Receive(self_, timeout);
    }

   private:
    SimulationBus& bus_;
    PartyId self_;
  };

 private:
  struct Pending {
    PartyId receiver;
    std::vector<uint8_t> frame;
  };
  std::deque<Pending> queue_;
  Transcript transcript_;
};

}  // namespace hpca

#endif  // HPCA_TRANSPORT_H_
