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

#include "hpca/privacy.h"

#include "absl/strings/str_format.h"
#include "hpca/wire.h"

namespace hpca {
namespace {

bool IsServerBroadcast(const ProtocolMessage& m, const SessionConfig& cfg) {
  if (m.sender != cfg.server()) return false;
  return m.type == MessageType::kPlainMean ||
         m.type == MessageType::kTransferMatrix ||
         (m.type == MessageType::kPublicKey && cfg.method == Method::kHe);
}

bool IsPeerCount(const ProtocolMessage& m, const SessionConfig& cfg) {
  return m.type == MessageType::kSampleCount && cfg.IsProvider(m.sender);
}

}  // namespace

std::vector<Violation> AssertPrivacy(const Transcript& transcript,
                                     const SessionConfig& cfg) {
  std::vector<Violation> out;
  const bool he = cfg.method == Method::kHe;
  for (size_t i = 0; i < transcript.messages.size(); ++i) {
    const ProtocolMessage& m = transcript.messages[i];
    const std::string what =
        absl::StrFormat("%s from party %d to party %d",
                        std::string(MessageTypeName(m.type)), m.sender,
                        m.receiver);
    auto flag = [&](char rule, const std::string& why) {
      out.push_back(Violation{rule, i, absl::StrFormat("%s: %s", what, why)});
    };

    if (m.type == MessageType::kReducedRows && m.receiver != cfg.consumer()) {
      flag('a', "reduced rows may only reach the consumer");
    }
    absl::StatusOr<Role> role = cfg.RoleOf(m.receiver);
    if (!role.ok()) {
      flag('a', "receiver is not a session party");
      continue;
    }

    switch (*role) {
      case Role::kServer: {
        const bool ok =
            IsPeerCount(m, cfg) ||
            (he && m.sender == cfg.aggregator &&
             (m.type == MessageType::kEncryptedSumAggregate ||
              m.type == MessageType::kEncryptedCovAggregate)) ||
            (!he && cfg.IsProvider(m.sender) &&
             m.type == MessageType::kLocalShareSum);
        if (!ok) flag('c', "the server may only receive aggregates");
        break;
      }
      case Role::kProvider: {
        if (he && m.receiver == cfg.aggregator &&
            (m.type == MessageType::kEncryptedSums ||
             m.type == MessageType::kEncryptedCov)) {
          if (!cfg.IsProvider(m.sender) || m.sender == m.receiver) {
            flag('b', "ciphertexts must come from another provider");
          } else if (!DecodeEncryptedMatrix(m.payload).ok()) {
            flag('b', "payload is not a ciphertext matrix");
          }
          break;
        }
        const bool ok = IsServerBroadcast(m, cfg) || IsPeerCount(m, cfg) ||
                        (!he && cfg.IsProvider(m.sender) &&
                         m.type == MessageType::kShareBundle);
        if (!ok) {
          const bool aggregator = he && m.receiver == cfg.aggregator;
          flag(aggregator ? 'b' : 'd',
               aggregator ? "the aggregator may only receive ciphertexts "
                            "and broadcasts"
                          : "providers may only receive broadcasts and "
                            "shares");
        }
        break;
      }
      case Role::kConsumer:
        if (m.type != MessageType::kReducedRows || !cfg.IsProvider(m.sender)) {
          flag('e', "the consumer may only receive reduced rows");
        }
        break;
    }
  }
  return out;
}

std::string FormatViolation(const Violation& v) {
  return absl::StrFormat("rule (%c) at message %d: %s", v.rule, v.index,
                         v.detail);
}

}  // namespace hpca
