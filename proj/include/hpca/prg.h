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

#ifndef HPCA_PRG_H_
#define HPCA_PRG_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include <gmpxx.h>

#include "hpca/encoding.h"

namespace hpca {

// Counter-mode ChaCha20 keystream generator with a 256-bit key and a 64-bit
// block counter. Not thread-safe; callers own synchronization.
class Prg {
 public:
  using Key = std::array<uint8_t, 32>;

  explicit Prg(const Key& key);

  // Deterministic stream derived from (seed, label); different labels give
  // independent streams for the same seed.
  static Prg FromSeed(uint64_t seed, std::string_view label = "");
  // Key drawn from the operating system's entropy source.
  static Prg FromEntropy();

  void Fill(std::span<uint8_t> out);
  uint64_t NextU64();
  // Uniform in [0, bound); bound > 0.
  uint64_t UniformU64(uint64_t bound);
  // Uniform element of Z_{2^bits}, 1 <= bits <= 128.
  RingElement NextRing(int bits);
  // Uniform integer with exactly `bits` random bits (top bit may be zero).
  mpz_class RandomBits(int bits);
  // Uniform in [0, bound) by rejection sampling; bound > 0.
  mpz_class UniformBelow(const mpz_class& bound);

 private:
  void Refill();

  static constexpr size_t kBlocksPerRefill = 16;
  Key key_;
  uint64_t counter_ = 0;
  std::array<uint8_t, 64 * kBlocksPerRefill> buffer_{};
  size_t offset_ = 64 * kBlocksPerRefill;
};

}  // namespace hpca

#endif  // HPCA_PRG_H_
