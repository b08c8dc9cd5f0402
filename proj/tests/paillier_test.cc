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

#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "gtest/gtest.h"

namespace hpca {
namespace {

class PaillierTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    Prg prg = Prg::FromSeed(2024, "paillier-test");
    keys_ = new KeyPair(*GenerateKeyPair(512, prg, /*allow_test_keys=*/true));
  }
  static void TearDownTestSuite() { delete keys_; }

  const PublicKey& pk() { return keys_->public_key; }
  const PrivateKey& sk() { return keys_->private_key; }
  mpz_class Dec(const Ciphertext& c) { return *Decrypt(sk(), c); }
  Ciphertext Enc(const mpz_class& m) { return *Encrypt(pk(), m, prg_); }

  static KeyPair* keys_;
  Prg prg_ = Prg::FromSeed(7, "paillier-test-enc");
};

KeyPair* PaillierTest::keys_ = nullptr;

TEST(PaillierKeygenTest, RejectsUnsupportedSizes) {
  Prg prg = Prg::FromSeed(1);
  EXPECT_EQ(GenerateKeyPair(512, prg).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(GenerateKeyPair(1000, prg, true).status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(PaillierKeygenTest, FullSizeKeyRoundTrips) {
  Prg prg = Prg::FromSeed(2);
  KeyPair keys = *GenerateKeyPair(2048, prg);
  EXPECT_GE(keys.public_key.bits(), 2048u);
  EXPECT_EQ(keys.public_key.g(), keys.public_key.n() + 1);
  const mpz_class m("98765432109876543210");
  EXPECT_EQ(*Decrypt(keys.private_key, *Encrypt(keys.public_key, m, prg)), m);
}

TEST_F(PaillierTest, KeyShape) {
  EXPECT_EQ(pk().bits(), 512u);
  EXPECT_EQ(pk().n_squared(), pk().n() * pk().n());
  EXPECT_EQ(pk().max_signed(), (pk().n() - 1) / 2);
}

TEST_F(PaillierTest, RoundTripRandomAndBoundaryPlaintexts) {
  for (int i = 0; i < 100; ++i) {
    const mpz_class m = prg_.UniformBelow(pk().n());
    EXPECT_EQ(Dec(Enc(m)), m);
  }
  EXPECT_EQ(Dec(Enc(0)), 0);
  EXPECT_EQ(Dec(Enc(pk().n() - 1)), pk().n() - 1);
  EXPECT_EQ(Dec(Enc(42)), 42);
}

TEST_F(PaillierTest, RejectsOutOfRangePlaintext) {
  EXPECT_EQ(Encrypt(pk(), pk().n(), prg_).status().code(),
            absl::StatusCode::kOutOfRange);
  EXPECT_EQ(Encrypt(pk(), -1, prg_).status().code(),
            absl::StatusCode::kOutOfRange);
}

TEST_F(PaillierTest, EncryptionIsRandomized) {
  std::set<std::string> seen;
  for (int i = 0; i < 100; ++i) seen.insert(Enc(0).value.get_str(16));
  EXPECT_EQ(seen.size(), 100u);
}

TEST_F(PaillierTest, AdditionHomomorphismExhaustiveSmall) {
  std::vector<Ciphertext> c;
  for (int u = 0; u < 50; ++u) c.push_back(Enc(u));
  for (int u = 0; u < 50; ++u) {
    for (int v = 0; v < 50; ++v) {
      ASSERT_EQ(Dec(*AddCipher(pk(), c[u], c[v])), u + v);
    }
  }
  EXPECT_EQ(Dec(*AddCipher(pk(), Enc(2), Enc(3))), 5);
}

TEST_F(PaillierTest, AdditionHomomorphismRandomLarge) {
  for (int i = 0; i < 1000; ++i) {
    const mpz_class u = prg_.UniformBelow(pk().n());
    const mpz_class v = prg_.UniformBelow(pk().n());
    mpz_class expected = (u + v) % pk().n();
    ASSERT_EQ(Dec(*AddCipher(pk(), Enc(u), Enc(v))), expected);
  }
}

TEST_F(PaillierTest, AdditionIdentityCommutativityAssociativity) {
  const mpz_class u = prg_.UniformBelow(pk().n());
  const mpz_class v = prg_.UniformBelow(pk().n());
  const mpz_class w = prg_.UniformBelow(pk().n());
  const Ciphertext cu = Enc(u), cv = Enc(v), cw = Enc(w);
  EXPECT_EQ(Dec(*AddCipher(pk(), cu, Enc(0))), u);
  EXPECT_EQ(Dec(*AddCipher(pk(), cu, cv)), Dec(*AddCipher(pk(), cv, cu)));
  EXPECT_EQ(Dec(*AddCipher(pk(), *AddCipher(pk(), cu, cv), cw)),
            Dec(*AddCipher(pk(), cu, *AddCipher(pk(), cv, cw))));
  // Fold of eight ciphertexts.
  mpz_class sum = 0;
  Ciphertext acc = Enc(0);
  for (int i = 0; i < 8; ++i) {
    const mpz_class m = prg_.UniformBelow(pk().n());
    sum = (sum + m) % pk().n();
    acc = *AddCipher(pk(), acc, Enc(m));
  }
  EXPECT_EQ(Dec(acc), sum);
}

TEST_F(PaillierTest, MulPlain) {
  const mpz_class u = prg_.UniformBelow(pk().n());
  const Ciphertext c = Enc(u);
  EXPECT_EQ(Dec(*MulPlain(pk(), c, 1)), u);
  EXPECT_EQ(Dec(*MulPlain(pk(), c, 0)), 0);
  for (int i = 0; i < 20; ++i) {
    const mpz_class s = prg_.UniformBelow(pk().n());
    EXPECT_EQ(Dec(*MulPlain(pk(), c, s)), (s * u) % pk().n());
  }
  Ciphertext folded = Enc(0);
  for (int s = 1; s <= 16; ++s) {
    folded = *AddCipher(pk(), folded, c);
    EXPECT_EQ(Dec(*MulPlain(pk(), c, s)), Dec(folded));
  }
  EXPECT_FALSE(MulPlain(pk(), c, -1).ok());
}

TEST_F(PaillierTest, KeyMismatchAndMalformedCiphertexts) {
  Prg prg = Prg::FromSeed(99);
  KeyPair other = *GenerateKeyPair(512, prg, true);
  const Ciphertext c = Enc(5);
  EXPECT_EQ(Decrypt(other.private_key, c).status().code(),
            absl::StatusCode::kFailedPrecondition);
  EXPECT_EQ(AddCipher(other.public_key, c, c).status().code(),
            absl::StatusCode::kFailedPrecondition);
  Ciphertext zero{0, pk().fingerprint()};
  EXPECT_EQ(Decrypt(sk(), zero).status().code(),
            absl::StatusCode::kInvalidArgument);
  Ciphertext multiple_of_n{pk().n(), pk().fingerprint()};
  EXPECT_EQ(Decrypt(sk(), multiple_of_n).status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST_F(PaillierTest, SignedMapping) {
  for (long v : {0L, 1L, -1L, 123456789L, -987654321L}) {
    const mpz_class residue = *EncodeSigned(pk(), v);
    EXPECT_GE(residue, 0);
    EXPECT_LT(residue, pk().n());
    EXPECT_EQ(DecodeSigned(pk(), residue), v);
    EXPECT_EQ(DecodeSigned(pk(), Dec(Enc(residue))), v);
  }
  EXPECT_EQ(EncodeSigned(pk(), pk().max_signed() + 1).status().code(),
            absl::StatusCode::kOutOfRange);
}

TEST_F(PaillierTest, MatrixSumsMatchPlaintext) {
  const FloatEncodingConfig cfg;
  Matrix a = *Matrix::FromRows({{1, 2}, {3, 4}});
  Matrix b = *Matrix::FromRows({{5, 6}, {7, 8}});
  EncryptedMatrix sum = *AddEncryptedMatrix(
      pk(), *EncryptMatrix(pk(), a, cfg, prg_), *EncryptMatrix(pk(), b, cfg, prg_));
  EXPECT_EQ(*DecryptMatrix(sk(), sum), *Matrix::FromRows({{6, 8}, {10, 12}}));

  EncryptedMatrix plus_zero = *AddEncryptedMatrix(
      pk(), *EncryptMatrix(pk(), a, cfg, prg_),
      *EncryptMatrix(pk(), Matrix(2, 2), cfg, prg_));
  EXPECT_EQ(*DecryptMatrix(sk(), plus_zero), a);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-100, 100);
  Matrix expected(11, 11);
  std::optional<EncryptedMatrix> acc;
  for (int i = 0; i < 4; ++i) {
    Matrix m(11, 11);
    for (size_t r = 0; r < 11; ++r) {
      for (size_t c = 0; c < 11; ++c) {
        m(r, c) = u(rng) * std::pow(10.0, static_cast<int>(r % 5) - 2);
        expected(r, c) += m(r, c);
      }
    }
    EncryptedMatrix e = *EncryptMatrix(pk(), m, cfg, prg_);
    acc = acc.has_value() ? *AddEncryptedMatrix(pk(), *acc, e) : e;
  }
  EXPECT_LE(MaxAbsDiff(*DecryptMatrix(sk(), *acc), expected), 1e-9);
}

TEST_F(PaillierTest, MatrixShapeAndOverflowErrors) {
  const FloatEncodingConfig cfg;
  EncryptedMatrix a = *EncryptMatrix(pk(), Matrix(2, 2), cfg, prg_);
  EncryptedMatrix b = *EncryptMatrix(pk(), Matrix(2, 3), cfg, prg_);
  EXPECT_EQ(AddEncryptedMatrix(pk(), a, b).status().code(),
            absl::StatusCode::kInvalidArgument);
  // Aligning 1e300 with 1e-300 needs a shift far beyond a 512-bit modulus.
  Matrix big = *Matrix::FromRows({{1e300}});
  Matrix tiny = *Matrix::FromRows({{1e-300}});
  EXPECT_EQ(AddEncryptedMatrix(pk(), *EncryptMatrix(pk(), big, cfg, prg_),
                               *EncryptMatrix(pk(), tiny, cfg, prg_))
                .status()
                .code(),
            absl::StatusCode::kOutOfRange);
}

}  // namespace
}  // namespace hpca
