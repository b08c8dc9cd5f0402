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

// n-out-of-n additive secret sharing over Z_{2^l}.
//
// A dealer splits s into r_0..r_{M-2} drawn from its PRG and
// r_{M-1} = s - sum(r_i) mod 2^l; share i goes to party i. Every party adds
// the shares it holds locally, and the sum of those local results is the sum
// of all secrets. All M shares are needed to reconstruct.

#ifndef HPCA_SECRET_SHARING_H_
#define HPCA_SECRET_SHARING_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "hpca/encoding.h"
#include "hpca/prg.h"

namespace hpca {

using SecretId = uint64_t;

struct Share {
  RingElement value = 0;
  uint16_t owner = 0;  // party index in [0, M)
  SecretId secret_id = 0;
  int ring_bits = 64;

  bool operator==(const Share&) const = default;
};

// Shares of a matrix secret held by one party.
struct ShareMatrix {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<RingElement> values;
  uint16_t owner = 0;
  SecretId secret_id = 0;
  int ring_bits = 64;

  bool operator==(const ShareMatrix&) const = default;
};

// Identifier for the local sum of shares of `ids`; independent of order, so
// every party derives the same id for the same set of secrets.
SecretId DeriveSumId(std::span<const SecretId> ids);

absl::StatusOr<std::vector<Share>> ShareSecret(RingElement secret, int parties,
                                               int ring_bits, SecretId id,
                                               Prg& prg);
// Needs exactly one share from each of the `parties` owners.
absl::StatusOr<RingElement> Reconstruct(std::span<const Share> shares,
                                        int parties);
// Sum of shares of different secrets held by one party.
absl::StatusOr<Share> AddLocal(std::span<const Share> shares);

absl::StatusOr<std::vector<ShareMatrix>> ShareMatrixSecret(
    const RingMatrix& secret, int parties, int ring_bits, SecretId id,
    Prg& prg);
absl::StatusOr<RingMatrix> ReconstructMatrix(std::span<const ShareMatrix> shares,
                                             int parties);
absl::StatusOr<ShareMatrix> AddLocalMatrix(std::span<const ShareMatrix> shares);

}  // namespace hpca

#endif  // HPCA_SECRET_SHARING_H_
