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

#include "hpca/paillier.h"

#include <sodium.h>

#include <utility>

#include "absl/strings/str_format.h"

namespace hpca {
namespace {

constexpr int kMillerRabinRounds = 40;

mpz_class PowMod(const mpz_class& base, const mpz_class& exp,
                 const mpz_class& mod) {
  mpz_class out;
  mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
  return out;
}

mpz_class InvMod(const mpz_class& a, const mpz_class& mod) {
  mpz_class out;
  mpz_invert(out.get_mpz_t(), a.get_mpz_t(), mod.get_mpz_t());
  return out;
}

uint64_t Fingerprint(const mpz_class& n) {
  size_t count = 0;
  void* raw = mpz_export(nullptr, &count, 1, 1, 1, 0, n.get_mpz_t());
  uint8_t digest[8];
  crypto_generichash(digest, sizeof(digest), static_cast<uint8_t*>(raw), count,
                     nullptr, 0);
  void (*free_fn)(void*, size_t);
  mp_get_memory_functions(nullptr, nullptr, &free_fn);
  free_fn(raw, count);
  uint64_t out = 0;
  for (uint8_t b : digest) out = (out << 8) | b;
  return out;
}

mpz_class RandomPrime(int bits, Prg& prg) {
  while (true) {
    mpz_class candidate = prg.RandomBits(bits);
    mpz_setbit(candidate.get_mpz_t(), bits - 1);
    mpz_setbit(candidate.get_mpz_t(), bits - 2);
    mpz_setbit(candidate.get_mpz_t(), 0);
    if (mpz_probab_prime_p(candidate.get_mpz_t(), kMillerRabinRounds) > 0) {
      return candidate;
    }
  }
}

absl::Status CheckKey(const PublicKey& pk, const Ciphertext& c) {
  if (c.key_fingerprint != pk.fingerprint()) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "key mismatch: ciphertext fingerprint %016x, key %016x",
        c.key_fingerprint, pk.fingerprint()));
  }
  return absl::OkStatus();
}

absl::Status CheckWellFormed(const PublicKey& pk, const Ciphertext& c) {
  if (absl::Status s = CheckKey(pk, c); !s.ok()) return s;
  if (c.value <= 0 || c.value >= pk.n_squared()) {
    return absl::InvalidArgumentError("malformed ciphertext: out of [1, n^2)");
  }
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), c.value.get_mpz_t(), pk.n().get_mpz_t());
  if (g != 1) {
    return absl::InvalidArgumentError("malformed ciphertext: not a unit mod n^2");
  }
  return absl::OkStatus();
}

}  // namespace

PublicKey::PublicKey(mpz_class n)
    : n_(std::move(n)),
      g_(n_ + 1),
      n_squared_(n_ * n_),
      max_signed_((n_ - 1) / 2),
      fingerprint_(Fingerprint(n_)) {}

PrivateKey::PrivateKey(const mpz_class& p, const mpz_class& q)
    : public_key_(p * q), p_(p), q_(q) {
  const mpz_class pm1 = p - 1;
  const mpz_class qm1 = q - 1;
  mpz_lcm(lambda_.get_mpz_t(), pm1.get_mpz_t(), qm1.get_mpz_t());
  mu_ = InvMod(lambda_, public_key_.n());
  p_squared_ = p * p;
  q_squared_ = q * q;
  // h_p = L_p(g^(p-1) mod p^2)^-1 mod p, likewise for q.
  hp_ = InvMod((PowMod(public_key_.g(), pm1, p_squared_) - 1) / p, p);
  hq_ = InvMod((PowMod(public_key_.g(), qm1, q_squared_) - 1) / q, q);
  q_inv_p_ = InvMod(q, p);
}

mpz_class PrivateKey::DecryptValue(const mpz_class& c) const {
  const mpz_class mp =
      ((PowMod(c, p_ - 1, p_squared_) - 1) / p_ * hp_) % p_;
  const mpz_class mq =
      ((PowMod(c, q_ - 1, q_squared_) - 1) / q_ * hq_) % q_;
  mpz_class diff = ((mp - mq) * q_inv_p_) % p_;
  if (diff < 0) diff += p_;
  return mq + q_ * diff;
}

absl::StatusOr<KeyPair> GenerateKeyPair(int bits, Prg& prg,
                                        bool allow_test_keys) {
  if (bits != 512 && bits != 1024 && bits != 2048 && bits != 3072) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "key size must be one of 512, 1024, 2048, 3072; got %d", bits));
  }
  if (bits == 512 && !allow_test_keys) {
    return absl::InvalidArgumentError(
        "512-bit keys are only permitted in test mode");
  }
  const int half = bits / 2;
  mpz_class p = RandomPrime(half, prg);
  mpz_class q = RandomPrime(half, prg);
  while (q == p) q = RandomPrime(half, prg);
  PrivateKey sk(p, q);
  PublicKey pk = sk.public_key();
  return KeyPair{std::move(pk), std::move(sk)};
}

absl::StatusOr<Ciphertext> Encrypt(const PublicKey& pk, const mpz_class& m,
                                   Prg& prg) {
  if (m < 0 || m >= pk.n()) {
    return absl::OutOfRangeError("plaintext outside [0, n)");
  }
  mpz_class r;
  mpz_class g;
  do {
    r = prg.UniformBelow(pk.n());
    mpz_gcd(g.get_mpz_t(), r.get_mpz_t(), pk.n().get_mpz_t());
  } while (r == 0 || g != 1);
  // g^m = 1 + m n mod n^2 for g = n + 1.
  mpz_class gm = (1 + m * pk.n()) % pk.n_squared();
  mpz_class c = (gm * PowMod(r, pk.n(), pk.n_squared())) % pk.n_squared();
  return Ciphertext{std::move(c), pk.fingerprint()};
}

absl::StatusOr<mpz_class> Decrypt(const PrivateKey& sk, const Ciphertext& c) {
  if (absl::Status s = CheckWellFormed(sk.public_key(), c); !s.ok()) return s;
  return sk.DecryptValue(c.value);
}

absl::StatusOr<Ciphertext> AddCipher(const PublicKey& pk, const Ciphertext& a,
                                     const Ciphertext& b) {
  if (absl::Status s = CheckKey(pk, a); !s.ok()) return s;
  if (absl::Status s = CheckKey(pk, b); !s.ok()) return s;
  return Ciphertext{(a.value * b.value) % pk.n_squared(), pk.fingerprint()};
}

absl::StatusOr<Ciphertext> MulPlain(const PublicKey& pk, const Ciphertext& c,
                                    const mpz_class& scalar) {
  if (absl::Status s = CheckKey(pk, c); !s.ok()) return s;
  if (scalar < 0) {
    return absl::InvalidArgumentError("plaintext scalar must be non-negative");
  }
  return Ciphertext{PowMod(c.value, scalar, pk.n_squared()), pk.fingerprint()};
}

absl::StatusOr<mpz_class> EncodeSigned(const PublicKey& pk,
                                       const mpz_class& value) {
  if (abs(value) > pk.max_signed()) {
    return absl::OutOfRangeError(
        "signed plaintext exceeds the unambiguous range (n - 1) / 2");
  }
  return value < 0 ? mpz_class(pk.n() + value) : value;
}

mpz_class DecodeSigned(const PublicKey& pk, const mpz_class& residue) {
  return residue > pk.max_signed() ? mpz_class(residue - pk.n()) : residue;
}

absl::StatusOr<EncryptedMatrix> EncryptMatrix(const PublicKey& pk,
                                              const EncodedFloatMatrix& m,
                                              Prg& prg) {
  EncryptedMatrix out;
  out.rows = m.rows;
  out.cols = m.cols;
  out.base = m.values.empty() ? 16 : m.values.front().base;
  out.key_fingerprint = pk.fingerprint();
  out.values.reserve(m.values.size());
  for (size_t i = 0; i < m.values.size(); ++i) {
    const EncodedFloat& e = m.values[i];
    if (e.base != out.base) {
      return absl::InvalidArgumentError("mixed encoding bases in one matrix");
    }
    absl::StatusOr<mpz_class> residue = EncodeSigned(pk, e.significand);
    if (!residue.ok()) {
      return absl::Status(residue.status().code(),
                          absl::StrFormat("entry (%d, %d): %s", i / m.cols,
                                          i % m.cols,
                                          residue.status().message()));
    }
    absl::StatusOr<Ciphertext> c = Encrypt(pk, *residue, prg);
    if (!c.ok()) return c.status();
    out.values.push_back(
        EncryptedFloat{*std::move(c), e.exponent, abs(e.significand)});
  }
  return out;
}

absl::StatusOr<EncryptedMatrix> EncryptMatrix(const PublicKey& pk,
                                              const Matrix& m,
                                              const FloatEncodingConfig& cfg,
                                              Prg& prg) {
  absl::StatusOr<EncodedFloatMatrix> encoded = EncodeFloatMatrix(m, cfg);
  if (!encoded.ok()) return encoded.status();
  absl::StatusOr<EncryptedMatrix> out = EncryptMatrix(pk, *encoded, prg);
  if (out.ok()) out->base = cfg.base;
  return out;
}

absl::StatusOr<EncryptedMatrix> AddEncryptedMatrix(const PublicKey& pk,
                                                   const EncryptedMatrix& a,
                                                   const EncryptedMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "shape mismatch: %d x %d vs %d x %d", a.rows, a.cols, b.rows, b.cols));
  }
  if (a.base != b.base) {
    return absl::InvalidArgumentError("encoding bases differ");
  }
  if (a.key_fingerprint != pk.fingerprint() ||
      b.key_fingerprint != pk.fingerprint()) {
    return absl::FailedPreconditionError("key mismatch");
  }
  EncryptedMatrix out;
  out.rows = a.rows;
  out.cols = a.cols;
  out.base = a.base;
  out.key_fingerprint = pk.fingerprint();
  out.values.reserve(a.values.size());
  for (size_t i = 0; i < a.values.size(); ++i) {
    EncryptedFloat x = a.values[i];
    EncryptedFloat y = b.values[i];
    EncryptedFloat& high = x.exponent > y.exponent ? x : y;
    const int low = std::min(x.exponent, y.exponent);
    if (high.exponent != low) {
      const mpz_class factor = BasePower(a.base, high.exponent - low);
      absl::StatusOr<Ciphertext> shifted = MulPlain(pk, high.cipher, factor);
      if (!shifted.ok()) return shifted.status();
      high.cipher = *std::move(shifted);
      high.magnitude_bound *= factor;
      high.exponent = low;
    }
    mpz_class bound = x.magnitude_bound + y.magnitude_bound;
    if (bound > pk.max_signed()) {
      return absl::OutOfRangeError(absl::StrFormat(
          "entry (%d, %d): significand overflow while aligning exponents",
          i / a.cols, i % a.cols));
    }
    absl::StatusOr<Ciphertext> sum = AddCipher(pk, x.cipher, y.cipher);
    if (!sum.ok()) return sum.status();
    out.values.push_back(EncryptedFloat{*std::move(sum), low, std::move(bound)});
  }
  return out;
}

absl::StatusOr<EncodedFloatMatrix> DecryptToEncoded(const PrivateKey& sk,
                                                    const EncryptedMatrix& m) {
  EncodedFloatMatrix out{m.rows, m.cols, {}};
  out.values.reserve(m.values.size());
  for (const EncryptedFloat& e : m.values) {
    absl::StatusOr<mpz_class> residue = Decrypt(sk, e.cipher);
    if (!residue.ok()) return residue.status();
    out.values.push_back(EncodedFloat{DecodeSigned(sk.public_key(), *residue),
                                      e.exponent, m.base});
  }
  return out;
}

absl::StatusOr<Matrix> DecryptMatrix(const PrivateKey& sk,
                                     const EncryptedMatrix& m) {
  absl::StatusOr<EncodedFloatMatrix> encoded = DecryptToEncoded(sk, m);
  if (!encoded.ok()) return encoded.status();
  return DecodeFloatMatrix(*encoded);
}

}  // namespace hpca
