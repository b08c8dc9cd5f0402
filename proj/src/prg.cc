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

#include "hpca/prg.h"

#include <sodium.h>

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <vector>

namespace hpca {
namespace {

void EnsureSodium() {
  static const bool ok = sodium_init() >= 0;
  if (!ok) std::abort();
}

}  // namespace

Prg::Prg(const Key& key) : key_(key) { EnsureSodium(); }

Prg Prg::FromSeed(uint64_t seed, std::string_view label) {
  EnsureSodium();
  std::array<uint8_t, 8> seed_bytes;
  for (int i = 0; i < 8; ++i) seed_bytes[i] = static_cast<uint8_t>(seed >> (56 - 8 * i));
  crypto_generichash_state state;
  crypto_generichash_init(&state, nullptr, 0, 32);
  static constexpr char kDomain[] = "hpca-prg-v1";
  crypto_generichash_update(&state, reinterpret_cast<const uint8_t*>(kDomain),
                            sizeof(kDomain) - 1);
  crypto_generichash_update(&state, seed_bytes.data(), seed_bytes.size());
  crypto_generichash_update(
      &state, reinterpret_cast<const uint8_t*>(label.data()), label.size());
  Key key;
  crypto_generichash_final(&state, key.data(), key.size());
  return Prg(key);
}

Prg Prg::FromEntropy() {
  EnsureSodium();
  Key key;
  randombytes_buf(key.data(), key.size());
  return Prg(key);
}

void Prg::Refill() {
  static constexpr std::array<uint8_t, crypto_stream_chacha20_NONCEBYTES>
      kNonce{};
  std::fill(buffer_.begin(), buffer_.end(), 0);
  crypto_stream_chacha20_xor_ic(buffer_.data(), buffer_.data(), buffer_.size(),
                                kNonce.data(), counter_, key_.data());
  counter_ += kBlocksPerRefill;
  offset_ = 0;
}

void Prg::Fill(std::span<uint8_t> out) {
  size_t written = 0;
  while (written < out.size()) {
    if (offset_ == buffer_.size()) Refill();
    const size_t n = std::min(out.size() - written, buffer_.size() - offset_);
    std::memcpy(out.data() + written, buffer_.data() + offset_, n);
    offset_ += n;
    written += n;
  }
}

uint64_t Prg::NextU64() {
  std::array<uint8_t, 8> bytes;
  Fill(bytes);
  uint64_t v = 0;
  for (uint8_t b : bytes) v = (v << 8) | b;
  return v;
}

uint64_t Prg::UniformU64(uint64_t bound) {
  // Rejection on the largest multiple of bound below 2^64.
  const uint64_t limit = bound * (UINT64_MAX / bound);
  while (true) {
    const uint64_t v = NextU64();
    if (v < limit) return v % bound;
  }
}

RingElement Prg::NextRing(int bits) {
  const RingElement hi = NextU64();
  const RingElement lo = NextU64();
  return ((hi << 64) | lo) & RingMask(bits);
}

mpz_class Prg::RandomBits(int bits) {
  const size_t bytes = (static_cast<size_t>(bits) + 7) / 8;
  std::vector<uint8_t> buf(bytes);
  Fill(buf);
  const int excess = static_cast<int>(bytes * 8) - bits;
  if (excess > 0) buf[0] &= static_cast<uint8_t>(0xFF >> excess);
  mpz_class out;
  mpz_import(out.get_mpz_t(), buf.size(), 1, 1, 1, 0, buf.data());
  return out;
}

mpz_class Prg::UniformBelow(const mpz_class& bound) {
  const int bits = static_cast<int>(mpz_sizeinbase(bound.get_mpz_t(), 2));
  while (true) {
    mpz_class candidate = RandomBits(bits);
    if (candidate < bound) return candidate;
  }
}

}  // namespace hpca
