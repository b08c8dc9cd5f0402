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

#ifndef HPCA_MESSAGE_H_
#define HPCA_MESSAGE_H_

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace hpca {

using PartyId = uint16_t;

// Closed message taxonomy. Values are the on-wire msg_type byte.
enum class MessageType : uint8_t {
  kPublicKey = 1,
  kEncryptedSums = 2,
  kEncryptedSumAggregate = 3,
  kPlainMean = 4,
  kEncryptedCov = 5,
  kEncryptedCovAggregate = 6,
  kShareBundle = 7,
  kLocalShareSum = 8,
  kTransferMatrix = 9,
  kReducedRows = 10,
  kSampleCount = 11,
};

inline constexpr MessageType kAllMessageTypes[] = {
    MessageType::kPublicKey,       MessageType::kEncryptedSums,
    MessageType::kEncryptedSumAggregate, MessageType::kPlainMean,
    MessageType::kEncryptedCov,    MessageType::kEncryptedCovAggregate,
    MessageType::kShareBundle,     MessageType::kLocalShareSum,
    MessageType::kTransferMatrix,  MessageType::kReducedRows,
    MessageType::kSampleCount,
};

std::string_view MessageTypeName(MessageType type);
bool IsKnownMessageType(uint8_t raw);

struct ProtocolMessage {
  MessageType type = MessageType::kPublicKey;
  PartyId sender = 0;
  PartyId receiver = 0;
  // Per-sender sequence number, strictly increasing.
  uint32_t step = 0;
  std::vector<uint8_t> payload;

  bool operator==(const ProtocolMessage&) const = default;
};

// Ordered log of delivered messages.
struct Transcript {
  std::vector<ProtocolMessage> messages;

  // Stable-sorted by (sender, step). Per-sender order is the only order a
  // networked run guarantees, so two runs are compared in this form.
  Transcript Canonical() const;
  std::map<MessageType, size_t> CountByType() const;
  size_t TotalPayloadBytes() const;
};

// Thread-safe append-only transcript for transports with several delivery
// contexts.
class TranscriptSink {
 public:
  void Append(const ProtocolMessage& msg);
  Transcript Snapshot() const;

 private:
  mutable std::mutex mu_;
  Transcript transcript_;
};

}  // namespace hpca

#endif  // HPCA_MESSAGE_H_
