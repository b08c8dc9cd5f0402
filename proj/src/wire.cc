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

#include "hpca/wire.h"

#include <bit>
#include <cstring>
#include <utility>

#include "absl/strings/str_format.h"

namespace hpca {
namespace {

class ByteWriter {
 public:
  void U8(uint8_t v) { out_.push_back(v); }
  void U16(uint16_t v) { Uint(v, 2); }
  void U32(uint32_t v) { Uint(v, 4); }
  void U64(uint64_t v) { Uint(v, 8); }
  void I32(int32_t v) { U32(static_cast<uint32_t>(v)); }
  void F64(double v) { U64(std::bit_cast<uint64_t>(v)); }
  void U128(RingElement v) {
    U64(static_cast<uint64_t>(v >> 64));
    U64(static_cast<uint64_t>(v));
  }
  void Bytes(std::span<const uint8_t> b) {
    out_.insert(out_.end(), b.begin(), b.end());
  }
  // u32 length | big-endian magnitude of a non-negative integer.
  void BigInt(const mpz_class& v) {
    size_t count = 0;
    std::vector<uint8_t> buf((mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8 + 1);
    mpz_export(buf.data(), &count, 1, 1, 1, 0, v.get_mpz_t());
    U32(static_cast<uint32_t>(count));
    out_.insert(out_.end(), buf.begin(), buf.begin() + count);
  }

  std::vector<uint8_t> Take() { return std::move(out_); }

 private:
  void Uint(uint64_t v, int bytes) {
    for (int i = bytes - 1; i >= 0; --i) {
      out_.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }
  }
  std::vector<uint8_t> out_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const uint8_t> bytes) : bytes_(bytes) {}

  absl::StatusOr<uint64_t> Uint(int n) {
    if (absl::Status s = Need(n); !s.ok()) return s;
    uint64_t v = 0;
    for (int i = 0; i < n; ++i) v = (v << 8) | bytes_[pos_++];
    return v;
  }
  absl::StatusOr<RingElement> U128() {
    absl::StatusOr<uint64_t> hi = Uint(8);
    if (!hi.ok()) return hi.status();
    absl::StatusOr<uint64_t> lo = Uint(8);
    if (!lo.ok()) return lo.status();
    return (static_cast<RingElement>(*hi) << 64) | *lo;
  }
  absl::StatusOr<mpz_class> BigInt() {
    absl::StatusOr<uint64_t> len = Uint(4);
    if (!len.ok()) return len.status();
    if (absl::Status s = Need(*len); !s.ok()) return s;
    mpz_class v;
    if (*len > 0) {
      mpz_import(v.get_mpz_t(), *len, 1, 1, 1, 0, bytes_.data() + pos_);
    }
    pos_ += *len;
    return v;
  }
  absl::Status Finish() const {
    if (pos_ != bytes_.size()) {
      return absl::DataLossError(absl::StrFormat(
          "%d trailing bytes after payload", bytes_.size() - pos_));
    }
    return absl::OkStatus();
  }
  absl::Status Need(uint64_t n) const {
    if (bytes_.size() - pos_ < n) {
      return absl::DataLossError(absl::StrFormat(
          "truncated: need %d bytes at offset %d, have %d", n, pos_,
          bytes_.size() - pos_));
    }
    return absl::OkStatus();
  }

 private:
  std::span<const uint8_t> bytes_;
  size_t pos_ = 0;
};

// Reads rows u32 | cols u32 and checks that rows * cols entries of at least
// `min_entry_bytes` can still follow.
absl::StatusOr<std::pair<size_t, size_t>> ReadShape(ByteReader& r,
                                                    size_t min_entry_bytes) {
  absl::StatusOr<uint64_t> rows = r.Uint(4);
  if (!rows.ok()) return rows.status();
  absl::StatusOr<uint64_t> cols = r.Uint(4);
  if (!cols.ok()) return cols.status();
  const uint64_t entries = *rows * *cols;
  if (entries > kMaxPayloadBytes) {
    return absl::DataLossError(
        absl::StrFormat("implausible shape %d x %d", *rows, *cols));
  }
  if (absl::Status s = r.Need(entries * min_entry_bytes); !s.ok()) return s;
  return std::make_pair(static_cast<size_t>(*rows), static_cast<size_t>(*cols));
}

}  // namespace

absl::StatusOr<std::vector<uint8_t>> SerializeFrame(const ProtocolMessage& msg) {
  if (msg.payload.size() > kMaxPayloadBytes) {
    return absl::OutOfRangeError(absl::StrFormat(
        "payload of %d bytes exceeds the %d-byte cap", msg.payload.size(),
        kMaxPayloadBytes));
  }
  ByteWriter w;
  w.Bytes(kFrameMagic);
  w.U8(kFrameVersion);
  w.U8(static_cast<uint8_t>(msg.type));
  w.U16(msg.sender);
  w.U16(msg.receiver);
  w.U32(msg.step);
  w.U32(static_cast<uint32_t>(msg.payload.size()));
  w.Bytes(msg.payload);
  return w.Take();
}

absl::StatusOr<FrameHeader> ParseFrameHeader(std::span<const uint8_t> bytes) {
  if (bytes.size() < kFrameHeaderSize) {
    return absl::DataLossError(absl::StrFormat(
        "truncated frame header: %d of %d bytes", bytes.size(),
        kFrameHeaderSize));
  }
  if (std::memcmp(bytes.data(), kFrameMagic, 4) != 0) {
    return absl::DataLossError("bad frame magic");
  }
  if (bytes[4] != kFrameVersion) {
    return absl::UnimplementedError(
        absl::StrFormat("unsupported frame version %d", bytes[4]));
  }
  if (!IsKnownMessageType(bytes[5])) {
    return absl::DataLossError(
        absl::StrFormat("unknown message type %d", bytes[5]));
  }
  ByteReader r(bytes.subspan(6, kFrameHeaderSize - 6));
  FrameHeader h;
  h.type = static_cast<MessageType>(bytes[5]);
  h.sender = static_cast<PartyId>(*r.Uint(2));
  h.receiver = static_cast<PartyId>(*r.Uint(2));
  h.step = static_cast<uint32_t>(*r.Uint(4));
  h.payload_length = static_cast<uint32_t>(*r.Uint(4));
  if (h.payload_length > kMaxPayloadBytes) {
    return absl::OutOfRangeError(absl::StrFormat(
        "declared payload of %d bytes exceeds the cap", h.payload_length));
  }
  return h;
}

absl::StatusOr<ProtocolMessage> DeserializeFrame(
    std::span<const uint8_t> bytes) {
  absl::StatusOr<FrameHeader> h = ParseFrameHeader(bytes);
  if (!h.ok()) return h.status();
  const size_t expected = kFrameHeaderSize + h->payload_length;
  if (bytes.size() < expected) {
    return absl::DataLossError(absl::StrFormat(
        "truncated frame: %d of %d bytes", bytes.size(), expected));
  }
  if (bytes.size() > expected) {
    return absl::DataLossError(absl::StrFormat(
        "%d bytes after the end of the frame", bytes.size() - expected));
  }
  ProtocolMessage msg;
  msg.type = h->type;
  msg.sender = h->sender;
  msg.receiver = h->receiver;
  msg.step = h->step;
  msg.payload.assign(bytes.begin() + kFrameHeaderSize, bytes.end());
  return msg;
}

std::vector<uint8_t> EncodeRealMatrix(const Matrix& m) {
  ByteWriter w;
  w.U32(static_cast<uint32_t>(m.rows()));
  w.U32(static_cast<uint32_t>(m.cols()));
  for (double v : m.data()) w.F64(v);
  return w.Take();
}

absl::StatusOr<Matrix> DecodeRealMatrix(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  absl::StatusOr<std::pair<size_t, size_t>> shape = ReadShape(r, 8);
  if (!shape.ok()) return shape.status();
  std::vector<double> data(shape->first * shape->second);
  for (double& v : data) v = std::bit_cast<double>(*r.Uint(8));
  if (absl::Status s = r.Finish(); !s.ok()) return s;
  return Matrix::Create(shape->first, shape->second, std::move(data));
}

std::vector<uint8_t> EncodeRealVector(std::span<const double> v) {
  ByteWriter w;
  w.U32(1);
  w.U32(static_cast<uint32_t>(v.size()));
  for (double x : v) w.F64(x);
  return w.Take();
}

absl::StatusOr<std::vector<double>> DecodeRealVector(
    std::span<const uint8_t> bytes) {
  absl::StatusOr<Matrix> m = DecodeRealMatrix(bytes);
  if (!m.ok()) return m.status();
  if (m->rows() != 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("expected a 1 x d vector, got %d rows", m->rows()));
  }
  return std::vector<double>(m->data().begin(), m->data().end());
}

std::vector<uint8_t> EncodeShareMatrix(const ShareMatrix& m) {
  ByteWriter w;
  w.U16(m.owner);
  w.U64(m.secret_id);
  w.U8(static_cast<uint8_t>(m.ring_bits));
  w.U32(static_cast<uint32_t>(m.rows));
  w.U32(static_cast<uint32_t>(m.cols));
  for (RingElement v : m.values) w.U128(v);
  return w.Take();
}

absl::StatusOr<ShareMatrix> DecodeShareMatrix(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  ShareMatrix m;
  absl::StatusOr<uint64_t> owner = r.Uint(2);
  if (!owner.ok()) return owner.status();
  absl::StatusOr<uint64_t> id = r.Uint(8);
  if (!id.ok()) return id.status();
  absl::StatusOr<uint64_t> bits = r.Uint(1);
  if (!bits.ok()) return bits.status();
  if (*bits < 1 || *bits > 128) {
    return absl::InvalidArgumentError(
        absl::StrFormat("ring width %d outside [1, 128]", *bits));
  }
  absl::StatusOr<std::pair<size_t, size_t>> shape = ReadShape(r, 16);
  if (!shape.ok()) return shape.status();
  m.owner = static_cast<uint16_t>(*owner);
  m.secret_id = *id;
  m.ring_bits = static_cast<int>(*bits);
  m.rows = shape->first;
  m.cols = shape->second;
  m.values.resize(m.rows * m.cols);
  for (RingElement& v : m.values) {
    v = *r.U128();
    if ((v & ~RingMask(m.ring_bits)) != 0) {
      return absl::InvalidArgumentError("share value exceeds ring width");
    }
  }
  if (absl::Status s = r.Finish(); !s.ok()) return s;
  return m;
}

std::vector<uint8_t> EncodeEncryptedMatrix(const EncryptedMatrix& m) {
  ByteWriter w;
  w.U64(m.key_fingerprint);
  w.U32(static_cast<uint32_t>(m.base));
  w.U32(static_cast<uint32_t>(m.rows));
  w.U32(static_cast<uint32_t>(m.cols));
  for (const EncryptedFloat& e : m.values) w.BigInt(e.cipher.value);
  for (const EncryptedFloat& e : m.values) w.I32(e.exponent);
  for (const EncryptedFloat& e : m.values) w.BigInt(e.magnitude_bound);
  return w.Take();
}

absl::StatusOr<EncryptedMatrix> DecodeEncryptedMatrix(
    std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  EncryptedMatrix m;
  absl::StatusOr<uint64_t> fp = r.Uint(8);
  if (!fp.ok()) return fp.status();
  absl::StatusOr<uint64_t> base = r.Uint(4);
  if (!base.ok()) return base.status();
  if (*base < 2) {
    return absl::InvalidArgumentError(absl::StrFormat("bad base %d", *base));
  }
  // Each entry needs at least a length word, an exponent and a bound length.
  absl::StatusOr<std::pair<size_t, size_t>> shape = ReadShape(r, 12);
  if (!shape.ok()) return shape.status();
  m.key_fingerprint = *fp;
  m.base = static_cast<int>(*base);
  m.rows = shape->first;
  m.cols = shape->second;
  m.values.resize(m.rows * m.cols);
  for (EncryptedFloat& e : m.values) {
    absl::StatusOr<mpz_class> c = r.BigInt();
    if (!c.ok()) return c.status();
    e.cipher = Ciphertext{*std::move(c), m.key_fingerprint};
  }
  for (EncryptedFloat& e : m.values) {
    absl::StatusOr<uint64_t> exp = r.Uint(4);
    if (!exp.ok()) return exp.status();
    e.exponent = static_cast<int32_t>(static_cast<uint32_t>(*exp));
  }
  for (EncryptedFloat& e : m.values) {
    absl::StatusOr<mpz_class> bound = r.BigInt();
    if (!bound.ok()) return bound.status();
    e.magnitude_bound = *std::move(bound);
  }
  if (absl::Status s = r.Finish(); !s.ok()) return s;
  return m;
}

std::vector<uint8_t> EncodePublicKey(const PublicKey& pk) {
  ByteWriter w;
  w.BigInt(pk.n());
  return w.Take();
}

absl::StatusOr<PublicKey> DecodePublicKey(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  absl::StatusOr<mpz_class> n = r.BigInt();
  if (!n.ok()) return n.status();
  if (absl::Status s = r.Finish(); !s.ok()) return s;
  if (*n < 3) return absl::InvalidArgumentError("public modulus too small");
  return PublicKey(*std::move(n));
}

std::vector<uint8_t> EncodeCount(uint64_t count) {
  ByteWriter w;
  w.U64(count);
  return w.Take();
}

absl::StatusOr<uint64_t> DecodeCount(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  absl::StatusOr<uint64_t> v = r.Uint(8);
  if (!v.ok()) return v.status();
  if (absl::Status s = r.Finish(); !s.ok()) return s;
  return *v;
}

}  // namespace hpca
