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

#include "hpca/message.h"

#include <algorithm>

namespace hpca {

std::string_view MessageTypeName(MessageType type) {
  switch (type) {
    case MessageType::kPublicKey: return "PublicKey";
    case MessageType::kEncryptedSums: return "EncryptedSums";
    case MessageType::kEncryptedSumAggregate: return "EncryptedSumAggregate";
    case MessageType::kPlainMean: return "PlainMean";
    case MessageType::kEncryptedCov: return "EncryptedCov";
    case MessageType::kEncryptedCovAggregate: return "EncryptedCovAggregate";
    case MessageType::kShareBundle: return "ShareBundle";
    case MessageType::kLocalShareSum: return "LocalShareSum";
    case MessageType::kTransferMatrix: return "TransferMatrix";
    case MessageType::kReducedRows: return "ReducedRows";
    case MessageType::kSampleCount: return "SampleCount";
  }
  return "Unknown";
}

bool IsKnownMessageType(uint8_t raw) {
  return raw >= static_cast<uint8_t>(MessageType::kPublicKey) &&
         raw <= static_cast<uint8_t>(MessageType::kSampleCount);
}

Transcript Transcript::Canonical() const {
  Transcript out = *this;
  std::stable_sort(out.messages.begin(), out.messages.end(),
                   [](const ProtocolMessage& a, const ProtocolMessage& b) {
                     if (a.sender != b.sender) return a.sender < b.sender;
                     return a.step < b.step;
                   });
  return out;
}

std::map<MessageType, size_t> Transcript::CountByType() const {
  std::map<MessageType, size_t> counts;
  for (const ProtocolMessage& m : messages) ++counts[m.type];
  return counts;
}

size_t Transcript::TotalPayloadBytes() const {
  size_t total = 0;
  for (const ProtocolMessage& m : messages) total += m.payload.size();
  return total;
}

void TranscriptSink::Append(const ProtocolMessage& msg) {
  std::lock_guard<std::mutex> lock(mu_);
  transcript_.messages.push_back(msg);
}

Transcript TranscriptSink::Snapshot() const {
  std::lock_guard<std::mutex> lock(mu_);
  return transcript_;
}

}  // namespace hpca
