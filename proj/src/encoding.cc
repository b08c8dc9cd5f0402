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

#include "hpca/encoding.h"

#include <cmath>
#include <cstdlib>
#include <limits>

#include "absl/strings/str_format.h"

namespace hpca {

absl::Status FixedPointConfig::Validate() const {
  if (frac_bits <= 0 || frac_bits >= ring_bits || ring_bits > 128) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "fixed point needs 0 < f < l <= 128, got l=%d f=%d", ring_bits,
        frac_bits));
  }
  return absl::OkStatus();
}

double FixedPointConfig::MagnitudeBound() const {
  return std::ldexp(1.0, ring_bits - frac_bits - 1);
}

RingElement RingMask(int ring_bits) {
  if (ring_bits >= 128) return ~RingElement{0};
  return (RingElement{1} << ring_bits) - 1;
}

RingElement RingAdd(RingElement a, RingElement b, int ring_bits) {
  return (a + b) & RingMask(ring_bits);
}

RingElement RingSub(RingElement a, RingElement b, int ring_bits) {
  return (a - b) & RingMask(ring_bits);
}

absl::StatusOr<RingElement> EncodeFixed(double x, const FixedPointConfig& cfg) {
  if (absl::Status s = cfg.Validate(); !s.ok()) return s;
  if (!std::isfinite(x)) {
    return absl::InvalidArgumentError("cannot encode a non-finite value");
  }
  if (std::abs(x) >= cfg.MagnitudeBound()) {
    return absl::OutOfRangeError(absl::StrFormat(
        "fixed-point overflow: |%g| >= 2^%d", x,
        cfg.ring_bits - cfg.frac_bits - 1));
  }
  // Scaling by a power of two is exact; std::round rounds half away from 0.
  const double scaled = std::round(std::ldexp(x, cfg.frac_bits));
  const __int128 value = static_cast<__int128>(scaled);
  const RingElement half = RingElement{1} << (cfg.ring_bits - 1);
  const RingElement magnitude =
      value < 0 ? static_cast<RingElement>(-value) : static_cast<RingElement>(value);
  if (magnitude >= half) {
    return absl::OutOfRangeError(
        absl::StrFormat("fixed-point overflow after rounding %g", x));
  }
  return static_cast<RingElement>(value) & RingMask(cfg.ring_bits);
}

double DecodeFixed(RingElement z, const FixedPointConfig& cfg) {
  const RingElement mask = RingMask(cfg.ring_bits);
  z &= mask;
  const RingElement half = RingElement{1} << (cfg.ring_bits - 1);
  double value;
  if (z >= half) {
    value = -static_cast<double>(mask - z + 1);
  } else {
    value = static_cast<double>(z);
  }
  return std::ldexp(value, -cfg.frac_bits);
}

absl::StatusOr<RingMatrix> EncodeFixedMatrix(const Matrix& m,
                                             const FixedPointConfig& cfg) {
  RingMatrix out{m.rows(), m.cols(), {}};
  out.values.reserve(m.rows() * m.cols());
  for (size_t r = 0; r < m.rows(); ++r) {
    for (size_t c = 0; c < m.cols(); ++c) {
      absl::StatusOr<RingElement> z = EncodeFixed(m(r, c), cfg);
      if (!z.ok()) {
        return absl::Status(z.status().code(),
                            absl::StrFormat("entry (%d, %d): %s", r, c,
                                            z.status().message()));
      }
      out.values.push_back(*z);
    }
  }
  return out;
}

absl::StatusOr<Matrix> DecodeFixedMatrix(const RingMatrix& m,
                                         const FixedPointConfig& cfg) {
  if (absl::Status s = cfg.Validate(); !s.ok()) return s;
  std::vector<double> data;
  data.reserve(m.values.size());
  for (RingElement z : m.values) data.push_back(DecodeFixed(z, cfg));
  return Matrix::Create(m.rows, m.cols, std::move(data));
}

absl::Status FloatEncodingConfig::Validate() const {
  if (base < 2 || precision < 1) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "float encoding needs base >= 2 and precision >= 1, got %d, %d", base,
        precision));
  }
  return absl::OkStatus();
}

mpz_class BasePower(int base, int shift) {
  mpz_class out;
  mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(base),
                static_cast<unsigned long>(shift));
  return out;
}

namespace {

// B^e as an exact rational, for any sign of e.
mpq_class RationalPower(int base, int e) {
  if (e >= 0) return mpq_class(BasePower(base, e));
  mpq_class q(mpz_class(1), BasePower(base, -e));
  q.canonicalize();
  return q;
}

// Nearest double to q (mpq_get_d truncates toward zero).
double NearestDouble(const mpq_class& q) {
  const double truncated = q.get_d();
  if (!std::isfinite(truncated)) return truncated;
  const double away = std::nextafter(
      truncated, q >= 0 ? std::numeric_limits<double>::infinity()
                        : -std::numeric_limits<double>::infinity());
  if (!std::isfinite(away)) return truncated;
  const mpq_class err_truncated = abs(q - mpq_class(truncated));
  const mpq_class err_away = abs(mpq_class(away) - q);
  return err_away < err_truncated ? away : truncated;
}

}  // namespace

absl::StatusOr<EncodedFloat> EncodeFloat(double x,
                                         const FloatEncodingConfig& cfg) {
  if (absl::Status s = cfg.Validate(); !s.ok()) return s;
  if (!std::isfinite(x)) {
    return absl::InvalidArgumentError("cannot encode a non-finite value");
  }
  EncodedFloat out;
  out.base = cfg.base;
  if (x == 0.0) return out;

  const mpq_class magnitude(std::abs(x));
  // Integer e with B^e <= |x| < B^(e+1): estimate, then correct exactly.
  int e = static_cast<int>(std::floor(std::log(std::abs(x)) /
                                      std::log(static_cast<double>(cfg.base))));
  while (RationalPower(cfg.base, e) > magnitude) --e;
  while (RationalPower(cfg.base, e + 1) <= magnitude) ++e;

  int exponent = e - cfg.precision + 1;
  const mpq_class scaled = magnitude / RationalPower(cfg.base, exponent);
  // Round half away from zero on the magnitude.
  mpz_class significand = scaled.get_num() * 2 + scaled.get_den();
  significand /= scaled.get_den() * 2;

  const mpz_class base(cfg.base);
  while (significand != 0 && significand % base == 0) {
    significand /= base;
    ++exponent;
  }
  out.significand = x < 0 ? mpz_class(-significand) : significand;
  out.exponent = exponent;
  return out;
}

double DecodeFloat(const EncodedFloat& e) {
  if (e.significand == 0) return 0.0;
  return NearestDouble(mpq_class(e.significand) *
                       RationalPower(e.base, e.exponent));
}

absl::StatusOr<std::pair<EncodedFloat, EncodedFloat>> AlignExponents(
    const EncodedFloat& a, const EncodedFloat& b,
    const mpz_class& significand_bound) {
  if (a.base != b.base) {
    return absl::InvalidArgumentError(
        absl::StrFormat("cannot align bases %d and %d", a.base, b.base));
  }
  std::pair<EncodedFloat, EncodedFloat> out{a, b};
  EncodedFloat& high = a.exponent > b.exponent ? out.first : out.second;
  const int low_exponent = std::min(a.exponent, b.exponent);
  high.significand *= BasePower(a.base, high.exponent - low_exponent);
  high.exponent = low_exponent;
  for (const EncodedFloat* e : {&out.first, &out.second}) {
    if (abs(e->significand) >= significand_bound) {
      return absl::OutOfRangeError(
          "significand overflow while aligning exponents");
    }
  }
  return out;
}

absl::StatusOr<EncodedFloatMatrix> EncodeFloatMatrix(
    const Matrix& m, const FloatEncodingConfig& cfg) {
  EncodedFloatMatrix out{m.rows(), m.cols(), {}};
  out.values.reserve(m.rows() * m.cols());
  for (size_t r = 0; r < m.rows(); ++r) {
    for (size_t c = 0; c < m.cols(); ++c) {
      absl::StatusOr<EncodedFloat> e = EncodeFloat(m(r, c), cfg);
      if (!e.ok()) {
        return absl::Status(e.status().code(),
                            absl::StrFormat("entry (%d, %d): %s", r, c,
                                            e.status().message()));
      }
      out.values.push_back(*std::move(e));
    }
  }
  return out;
}

absl::StatusOr<Matrix> DecodeFloatMatrix(const EncodedFloatMatrix& m) {
  std::vector<double> data;
  data.reserve(m.values.size());
  for (const EncodedFloat& e : m.values) data.push_back(DecodeFloat(e));
  return Matrix::Create(m.rows, m.cols, std::move(data));
}

}  // namespace hpca
