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

#include "hpca/secret_sharing.h"

#include <algorithm>

#include "absl/strings/str_format.h"

namespace hpca {
namespace {

absl::Status CheckParams(int parties, int ring_bits) {
  if (parties < 2) {
    return absl::InvalidArgumentError(
        absl::StrFormat("sharing needs at least 2 parties, got %d", parties));
  }
  if (ring_bits < 1 || ring_bits > 128) {
    return absl::InvalidArgumentError(
        absl::StrFormat("ring width must be in [1, 128], got %d", ring_bits));
  }
  return absl::OkStatus();
}

// Checks binding (same secret, same ring) and completeness (owners are a
// permutation of 0..parties-1). Returns shares indexed by owner.
template <typename T>
absl::StatusOr<std::vector<const T*>> ByOwner(std::span<const T> shares,
                                              int parties) {
  if (shares.empty()) {
    return absl::FailedPreconditionError("incomplete: no shares");
  }
  std::vector<const T*> slots(parties, nullptr);
  for (const T& s : shares) {
    if (s.secret_id != shares.front().secret_id ||
        s.ring_bits != shares.front().ring_bits) {
      return absl::FailedPreconditionError(absl::StrFormat(
          "binding: shares of secret %d (l=%d) mixed with secret %d (l=%d)",
          shares.front().secret_id, shares.front().ring_bits, s.secret_id,
          s.ring_bits));
    }
    if (s.owner >= parties) {
      return absl::FailedPreconditionError(
          absl::StrFormat("share owner %d outside [0, %d)", s.owner, parties));
    }
    if (slots[s.owner] != nullptr) {
      return absl::FailedPreconditionError(
          absl::StrFormat("duplicate share from party %d", s.owner));
    }
    slots[s.owner] = &s;
  }
  for (int i = 0; i < parties; ++i) {
    if (slots[i] == nullptr) {
      return absl::FailedPreconditionError(absl::StrFormat(
          "incomplete: missing share of party %d (all %d are required)", i,
          parties));
    }
  }
  return slots;
}

}  // namespace

SecretId DeriveSumId(std::span<const SecretId> ids) {
  std::vector<SecretId> sorted(ids.begin(), ids.end());
  std::sort(sorted.begin(), sorted.end());
  // FNV-1a over the sorted ids, finished with a splitmix64 round.
  uint64_t h = 0xcbf29ce484222325ULL;
  for (SecretId id : sorted) {
    for (int b = 0; b < 8; ++b) {
      h ^= (id >> (8 * b)) & 0xFF;
      h *= 0x100000001b3ULL;
    }
  }
  h ^= h >> 30;
  h *= 0xbf58476d1ce4e5b9ULL;
  h ^= h >> 27;
  h *= 0x94d049bb133111ebULL;
  h ^= h >> 31;
  return h;
}

absl::StatusOr<std::vector<Share>> ShareSecret(RingElement secret, int parties,
                                               int ring_bits, SecretId id,
                                               Prg& prg) {
  if (absl::Status s = CheckParams(parties, ring_bits); !s.ok()) return s;
  if ((secret & ~RingMask(ring_bits)) != 0) {
    return absl::OutOfRangeError("secret does not fit in the ring");
  }
  std::vector<Share> shares(parties);
  RingElement last = secret;
  for (int i = 0; i < parties; ++i) {
    shares[i].owner = static_cast<uint16_t>(i);
    shares[i].secret_id = id;
    shares[i].ring_bits = ring_bits;
    if (i + 1 < parties) {
      shares[i].value = prg.NextRing(ring_bits);
      last = RingSub(last, shares[i].value, ring_bits);
    } else {
      shares[i].value = last;
    }
  }
  return shares;
}

absl::StatusOr<RingElement> Reconstruct(std::span<const Share> shares,
                                        int parties) {
  if (absl::Status s = CheckParams(parties, shares.empty() ? 64 : shares.front().ring_bits);
      !s.ok()) {
    return s;
  }
  absl::StatusOr<std::vector<const Share*>> slots = ByOwner(shares, parties);
  if (!slots.ok()) return slots.status();
  const int l = shares.front().ring_bits;
  RingElement sum = 0;
  for (const Share* s : *slots) sum = RingAdd(sum, s->value, l);
  return sum;
}

absl::StatusOr<Share> AddLocal(std::span<const Share> shares) {
  if (shares.empty()) return absl::InvalidArgumentError("nothing to add");
  Share out;
  out.owner = shares.front().owner;
  out.ring_bits = shares.front().ring_bits;
  std::vector<SecretId> ids;
  for (const Share& s : shares) {
    if (s.owner != out.owner) {
      return absl::FailedPreconditionError(absl::StrFormat(
          "ownership: shares of party %d and %d cannot be added locally",
          out.owner, s.owner));
    }
    if (s.ring_bits != out.ring_bits) {
      return absl::FailedPreconditionError("ring widths differ");
    }
    out.value = RingAdd(out.value, s.value, out.ring_bits);
    ids.push_back(s.secret_id);
  }
  out.secret_id = shares.size() == 1 ? shares.front().secret_id
                                     : DeriveSumId(ids);
  return out;
}

absl::StatusOr<std::vector<ShareMatrix>> ShareMatrixSecret(
    const RingMatrix& secret, int parties, int ring_bits, SecretId id,
    Prg& prg) {
  if (absl::Status s = CheckParams(parties, ring_bits); !s.ok()) return s;
  std::vector<ShareMatrix> out(parties);
  for (int i = 0; i < parties; ++i) {
    out[i].rows = secret.rows;
    out[i].cols = secret.cols;
    out[i].owner = static_cast<uint16_t>(i);
    out[i].secret_id = id;
    out[i].ring_bits = ring_bits;
    out[i].values.resize(secret.values.size());
  }
  for (size_t e = 0; e < secret.values.size(); ++e) {
    absl::StatusOr<std::vector<Share>> shares =
        ShareSecret(secret.values[e], parties, ring_bits, id, prg);
    if (!shares.ok()) {
      return absl::Status(shares.status().code(),
                          absl::StrFormat("entry (%d, %d): %s", e / secret.cols,
                                          e % secret.cols,
                                          shares.status().message()));
    }
    for (int i = 0; i < parties; ++i) out[i].values[e] = (*shares)[i].value;
  }
  return out;
}

absl::StatusOr<RingMatrix> ReconstructMatrix(std::span<const ShareMatrix> shares,
                                             int parties) {
  absl::StatusOr<std::vector<const ShareMatrix*>> slots =
      ByOwner(shares, parties);
  if (!slots.ok()) return slots.status();
  const ShareMatrix& first = *(*slots)[0];
  RingMatrix out{first.rows, first.cols,
                 std::vector<RingElement>(first.values.size(), 0)};
  for (const ShareMatrix* s : *slots) {
    if (s->rows != first.rows || s->cols != first.cols) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "shape mismatch: party %d holds %d x %d, party %d holds %d x %d",
          first.owner, first.rows, first.cols, s->owner, s->rows, s->cols));
    }
    for (size_t e = 0; e < out.values.size(); ++e) {
      out.values[e] = RingAdd(out.values[e], s->values[e], first.ring_bits);
    }
  }
  return out;
}

absl::StatusOr<ShareMatrix> AddLocalMatrix(std::span<const ShareMatrix> shares) {
  if (shares.empty()) return absl::InvalidArgumentError("nothing to add");
  const ShareMatrix& first = shares.front();
  ShareMatrix out;
  out.rows = first.rows;
  out.cols = first.cols;
  out.owner = first.owner;
  out.ring_bits = first.ring_bits;
  out.values.assign(first.values.size(), 0);
  std::vector<SecretId> ids;
  for (const ShareMatrix& s : shares) {
    if (s.owner != first.owner) {
      return absl::FailedPreconditionError(absl::StrFormat(
          "ownership: shares of party %d and %d cannot be added locally",
          first.owner, s.owner));
    }
    if (s.ring_bits != first.ring_bits) {
      return absl::FailedPreconditionError("ring widths differ");
    }
    if (s.rows != first.rows || s.cols != first.cols) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "shape mismatch: %d x %d vs %d x %d (secret %d)", first.rows,
          first.cols, s.rows, s.cols, s.secret_id));
    }
    for (size_t e = 0; e < out.values.size(); ++e) {
      out.values[e] = RingAdd(out.values[e], s.values[e], out.ring_bits);
    }
    ids.push_back(s.secret_id);
  }
  out.secret_id = shares.size() == 1 ? first.secret_id : DeriveSumId(ids);
  return out;
}

}  // namespace hpca
