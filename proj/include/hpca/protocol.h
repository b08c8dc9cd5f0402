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

// Protocol runners: the deterministic in-process scheduler, the per-role
// driver used over real transports, and standalone secure sums.

#ifndef HPCA_PROTOCOL_H_
#define HPCA_PROTOCOL_H_

#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/time/time.h"
#include "hpca/encoding.h"
#include "hpca/linalg.h"
#include "hpca/message.h"
#include "hpca/paillier.h"
#include "hpca/prg.h"
#include "hpca/roles.h"
#include "hpca/session.h"
#include "hpca/transport.h"

namespace hpca {

struct ProtocolResult {
  Matrix reduced;  // X' as stacked by the consumer, provider order
  Matrix transfer;
  // What the server recovered: the global mean and covariance.
  std::vector<double> mean;
  Matrix covariance;
  std::vector<double> eigenvalues;
  std::vector<size_t> block_rows;  // rows contributed per provider
  Transcript transcript;
};

// Runs every role in one thread over a SimulationBus. Delivery is global
// FIFO, so a fixed seed gives a byte-identical transcript.
absl::StatusOr<ProtocolResult> RunSimulated(const SessionConfig& cfg,
                                            std::span<const Matrix> partitions);
absl::StatusOr<ProtocolResult> RunHe(SessionConfig cfg,
                                     std::span<const Matrix> partitions);
absl::StatusOr<ProtocolResult> RunSs(SessionConfig cfg,
                                     std::span<const Matrix> partitions);

// Drives one role over `transport` until it finishes or an error aborts it.
absl::Status DriveRole(RoleMachine& role, Transport& transport,
                       absl::Duration timeout = kDefaultReceiveTimeout);

// Every role in its own thread, talking over TCP on 127.0.0.1. The transcript
// is what the receiving transports logged, in arrival order.
absl::StatusOr<ProtocolResult> RunLoopbackTcp(
    const SessionConfig& cfg, std::span<const Matrix> partitions,
    absl::Duration timeout = kDefaultReceiveTimeout);

// Sum of `matrices` as the server sees it after the HE aggregation steps:
// every party encrypts, party `aggregator_index` adds the ciphertexts and
// the key holder decrypts.
absl::StatusOr<Matrix> SecureSumHe(std::span<const Matrix> matrices,
                                   size_t aggregator_index,
                                   const KeyPair& keys,
                                   const FloatEncodingConfig& encoding,
                                   Prg& prg);

// Sum of `matrices` through additive sharing among the matrix holders: each
// holder deals shares, adds the shares it holds and hands the local sum to
// the server for reconstruction. A single holder has nobody to share with,
// so its matrix only passes through the fixed-point encoding.
absl::StatusOr<Matrix> SecureSumSs(std::span<const Matrix> matrices,
                                   const FixedPointConfig& encoding, Prg& prg);

}  // namespace hpca

#endif  // HPCA_PROTOCOL_H_
