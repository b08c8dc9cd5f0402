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

// Numeric encodings that carry real values into the two cryptographic
// domains:
//   * fixed point: a real x becomes round(x * 2^f) in Z_{2^l}, negatives in
//     two's complement, so ring addition coincides with signed addition;
//   * base-B float: a real x becomes (significand, exponent) with
//     x ~= significand * B^exponent. The significand is the part that gets
//     encrypted; the exponent stays public.

#ifndef HPCA_ENCODING_H_
#define HPCA_ENCODING_H_

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "hpca/linalg.h"

namespace hpca {

// An element of Z_{2^l} for l <= 128, stored in the low l bits.
using RingElement = unsigned __int128;

struct FixedPointConfig {
  int ring_bits = 64;  // l
  int frac_bits = 24;  // f

  // 0 < f < l <= 128.
  absl::Status Validate() const;
  // Exclusive magnitude bound 2^(l - f - 1).
  double MagnitudeBound() const;
};

RingElement RingMask(int ring_bits);
RingElement RingAdd(RingElement a, RingElement b, int ring_bits);
RingElement RingSub(RingElement a, RingElement b, int ring_bits);

// round(x * 2^f), rounding half away from zero, in two's complement.
// Fails with OutOfRange when |x| >= 2^(l - f - 1).
absl::StatusOr<RingElement> EncodeFixed(double x, const FixedPointConfig& cfg);
double DecodeFixed(RingElement z, const FixedPointConfig& cfg);

struct RingMatrix {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<RingElement> values;

  RingElement& at(size_t r, size_t c) { return values[r * cols + c]; }
  RingElement at(size_t r, size_t c) const { return values[r * cols + c]; }
  bool operator==(const RingMatrix&) const = default;
};

absl::StatusOr<RingMatrix> EncodeFixedMatrix(const Matrix& m,
                                             const FixedPointConfig& cfg);
absl::StatusOr<Matrix> DecodeFixedMatrix(const RingMatrix& m,
                                         const FixedPointConfig& cfg);

struct FloatEncodingConfig {
  int base = 16;
  // Number of base-B digits kept in the significand. 14 hex digits hold the
  // 53-bit mantissa of any double, so the default encoding is exact.
  int precision = 14;

  absl::Status Validate() const;
};

struct EncodedFloat {
  mpz_class significand;  // signed
  int exponent = 0;
  int base = 16;

  bool operator==(const EncodedFloat& o) const {
    return significand == o.significand && exponent == o.exponent &&
           base == o.base;
  }
};

// Picks the largest exponent that keeps `precision` base-B digits of x, then
// strips trailing zero digits. 0 encodes as (0, 0); 2.5 in base 16 as
// (40, -1).
absl::StatusOr<EncodedFloat> EncodeFloat(double x,
                                         const FloatEncodingConfig& cfg);
double DecodeFloat(const EncodedFloat& e);

// significand * base^shift, the multiplier used to lower an exponent by
// `shift` digits.
mpz_class BasePower(int base, int shift);

// Lowers the larger exponent to the smaller one by multiplying its
// significand by B^delta. Fails with OutOfRange when a shifted significand
// reaches `significand_bound` in magnitude.
absl::StatusOr<std::pair<EncodedFloat, EncodedFloat>> AlignExponents(
    const EncodedFloat& a, const EncodedFloat& b,
    const mpz_class& significand_bound);

struct EncodedFloatMatrix {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<EncodedFloat> values;
};

absl::StatusOr<EncodedFloatMatrix> EncodeFloatMatrix(
    const Matrix& m, const FloatEncodingConfig& cfg);
absl::StatusOr<Matrix> DecodeFloatMatrix(const EncodedFloatMatrix& m);

}  // namespace hpca

#endif  // HPCA_ENCODING_H_
