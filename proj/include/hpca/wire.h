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

// Binary wire format shared by the simulation bus and the TCP transport.
// All multi-byte integers are big-endian.
//
// Frame (18-byte header + payload):
//   magic "PPCA" | version u8 = 1 | msg_type u8 | sender u16 | receiver u16 |
//   step u32 | payload_length u32 | payload
//
// Payloads:
//   real matrix       rows u32 | cols u32 | rows*cols IEEE-754 binary64
//   share matrix      owner u16 | secret_id u64 | ring_bits u8 |
//                     rows u32 | cols u32 | rows*cols 16-byte ring elements
//   encrypted matrix  key_fingerprint u64 | base u32 | rows u32 | cols u32 |
//                     rows*cols ciphertexts (u32 length | magnitude bytes) |
//                     rows*cols exponents (i32) |
//                     rows*cols magnitude bounds (u32 length | bytes)
//   public key        u32 length | modulus magnitude bytes
//   sample count      u64

#ifndef HPCA_WIRE_H_
#define HPCA_WIRE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "absl/status/statusor.h"
#include "hpca/linalg.h"
#include "hpca/message.h"
#include "hpca/paillier.h"
#include "hpca/secret_sharing.h"

namespace hpca {

inline constexpr uint8_t kFrameMagic[4] = {'P', 'P', 'C', 'A'};
inline constexpr uint8_t kFrameVersion = 1;
inline constexpr size_t kFrameHeaderSize = 18;
inline constexpr uint32_t kMaxPayloadBytes = 256u << 20;

struct FrameHeader {
  MessageType type;
  PartyId sender;
  PartyId receiver;
  uint32_t step;
  uint32_t payload_length;
};

absl::StatusOr<std::vector<uint8_t>> SerializeFrame(const ProtocolMessage& msg);
// Parses the first kFrameHeaderSize bytes of `bytes`.
absl::StatusOr<FrameHeader> ParseFrameHeader(std::span<const uint8_t> bytes);
// `bytes` must hold exactly one frame; nothing is returned on any error.
absl::StatusOr<ProtocolMessage> DeserializeFrame(std::span<const uint8_t> bytes);

std::vector<uint8_t> EncodeRealMatrix(const Matrix& m);
absl::StatusOr<Matrix> DecodeRealMatrix(std::span<const uint8_t> bytes);
// Vectors travel as 1 x d real matrices.
std::vector<uint8_t> EncodeRealVector(std::span<const double> v);
absl::StatusOr<std::vector<double>> DecodeRealVector(
    std::span<const uint8_t> bytes);

std::vector<uint8_t> EncodeShareMatrix(const ShareMatrix& m);
absl::StatusOr<ShareMatrix> DecodeShareMatrix(std::span<const uint8_t> bytes);

std::vector<uint8_t> EncodeEncryptedMatrix(const EncryptedMatrix& m);
absl::StatusOr<EncryptedMatrix> DecodeEncryptedMatrix(
    std::span<const uint8_t> bytes);

std::vector<uint8_t> EncodePublicKey(const PublicKey& pk);
absl::StatusOr<PublicKey> DecodePublicKey(std::span<const uint8_t> bytes);

std::vector<uint8_t> EncodeCount(uint64_t count);
absl::StatusOr<uint64_t> DecodeCount(std::span<const uint8_t> bytes);

}  // namespace hpca

#endif  // HPCA_WIRE_H_
