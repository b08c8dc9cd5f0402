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

// Paillier cryptosystem with g = n + 1.
//
// Enc(m; r) = (1 + m n) r^n mod n^2, and Enc(u) * Enc(v) decrypts to u + v,
// which is the only homomorphism the aggregation steps need. Signed plaintexts
// live in [0, n): values above n/2 are read back as negative.
//
// Big-integer arithmetic is GMP. Nothing here is constant-time.

#ifndef HPCA_PAILLIER_H_
#define HPCA_PAILLIER_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "absl/status/statusor.h"
#include "hpca/encoding.h"
#include "hpca/linalg.h"
#include "hpca/prg.h"

namespace hpca {

class PublicKey {
 public:
  PublicKey() = default;
  explicit PublicKey(mpz_class n);

  const mpz_class& n() const { return n_; }
  const mpz_class& g() const { return g_; }
  const mpz_class& n_squared() const { return n_squared_; }
  // First 8 bytes of BLAKE2b over the big-endian modulus.
  uint64_t fingerprint() const { return fingerprint_; }
  size_t bits() const { return mpz_sizeinbase(n_.get_mpz_t(), 2); }
  // Largest significand magnitude that decodes unambiguously: (n - 1) / 2.
  const mpz_class& max_signed() const { return max_signed_; }

  bool operator==(const PublicKey& o) const { return n_ == o.n_; }

 private:
  mpz_class n_;
  mpz_class g_;
  mpz_class n_squared_;
  mpz_class max_signed_;
  uint64_t fingerprint_ = 0;
};

class PrivateKey {
 public:
  PrivateKey(const mpz_class& p, const mpz_class& q);

  const PublicKey& public_key() const { return public_key_; }
  const mpz_class& lambda() const { return lambda_; }
  const mpz_class& mu() const { return mu_; }

  // CRT decryption of a raw ciphertext value; the caller validates c.
  mpz_class DecryptValue(const mpz_class& c) const;

 private:
  PublicKey public_key_;
  mpz_class lambda_;  // lcm(p - 1, q - 1)
  mpz_class mu_;      // lambda^-1 mod n (valid since g = n + 1)
  // CRT decryption material.
  mpz_class p_, q_, p_squared_, q_squared_, hp_, hq_, q_inv_p_;
};

struct KeyPair {
  PublicKey public_key;
  PrivateKey private_key;
};

struct Ciphertext {
  mpz_class value;
  uint64_t key_fingerprint = 0;

  bool operator==(const Ciphertext& o) const {
    return value == o.value && key_fingerprint == o.key_fingerprint;
  }
};

// bits in {512, 1024, 2048, 3072}; 512 only with allow_test_keys. Primes are
// random bits/2-bit candidates with the top two bits set, accepted after 40
// Miller-Rabin rounds.
absl::StatusOr<KeyPair> GenerateKeyPair(int bits, Prg& prg,
                                        bool allow_test_keys = false);

absl::StatusOr<Ciphertext> Encrypt(const PublicKey& pk, const mpz_class& m,
                                   Prg& prg);
absl::StatusOr<mpz_class> Decrypt(const PrivateKey& sk, const Ciphertext& c);
absl::StatusOr<Ciphertext> AddCipher(const PublicKey& pk, const Ciphertext& a,
                                     const Ciphertext& b);
absl::StatusOr<Ciphertext> MulPlain(const PublicKey& pk, const Ciphertext& c,
                                    const mpz_class& scalar);

// Signed <-> [0, n) mapping.
absl::StatusOr<mpz_class> EncodeSigned(const PublicKey& pk,
                                       const mpz_class& value);
mpz_class DecodeSigned(const PublicKey& pk, const mpz_class& residue);

// An encrypted significand with its public exponent. `magnitude_bound` is a
// public upper bound on |significand| that grows with every shift and
// addition, so overflow is caught before the plaintext wraps mod n.
struct EncryptedFloat {
  Ciphertext cipher;
  int exponent = 0;
  mpz_class magnitude_bound;
};

struct EncryptedMatrix {
  size_t rows = 0;
  size_t cols = 0;
  int base = 16;
  uint64_t key_fingerprint = 0;
  std::vector<EncryptedFloat> values;
};

absl::StatusOr<EncryptedMatrix> EncryptMatrix(const PublicKey& pk,
                                              const EncodedFloatMatrix& m,
                                              Prg& prg);
// Encodes with `cfg` then encrypts.
absl::StatusOr<EncryptedMatrix> EncryptMatrix(const PublicKey& pk,
                                              const Matrix& m,
                                              const FloatEncodingConfig& cfg,
                                              Prg& prg);
// Element-wise: aligns exponents (encrypted shift by B^delta) then adds.
absl::StatusOr<EncryptedMatrix> AddEncryptedMatrix(const PublicKey& pk,
                                                   const EncryptedMatrix& a,
                                                   const EncryptedMatrix& b);
absl::StatusOr<EncodedFloatMatrix> DecryptToEncoded(const PrivateKey& sk,
                                                    const EncryptedMatrix& m);
absl::StatusOr<Matrix> DecryptMatrix(const PrivateKey& sk,
                                     const EncryptedMatrix& m);

}  // namespace hpca

#endif  // HPCA_PAILLIER_H_
