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

#include "hpca/roles.h"

#include <utility>

#include "absl/strings/str_format.h"
#include "hpca/encoding.h"
#include "hpca/wire.h"

namespace hpca {

SecretId PhaseSecretId(uint64_t phase, int dealer_index) {
  return (phase << 32) | static_cast<uint32_t>(dealer_index);
}

SecretId PhaseSumId(uint64_t phase, int parties) {
  std::vector<SecretId> ids;
  for (int i = 0; i < parties; ++i) ids.push_back(PhaseSecretId(phase, i));
  return DeriveSumId(ids);
}

RoleMachine::RoleMachine(const SessionConfig& cfg, PartyId self)
    : cfg_(cfg), self_(self), prg_(cfg.MakePrg(self)) {}

void RoleMachine::Emit(MessageType type, PartyId receiver,
                       std::vector<uint8_t> payload,
                       std::vector<ProtocolMessage>& out) {
  out.push_back(ProtocolMessage{type, self_, receiver, next_step_++,
                                std::move(payload)});
}

absl::Status RoleMachine::Fail(std::string_view stage,
                               const absl::Status& status) const {
  return absl::Status(status.code(),
                      absl::StrFormat("%s (party %d) at %s: %s", std::string(role_name()),
                                      self_, std::string(stage), status.message()));
}

absl::Status RoleMachine::Unexpected(const ProtocolMessage& msg) const {
  return Fail("receive", absl::FailedPreconditionError(absl::StrFormat(
                             "unexpected %s from party %d",
                             std::string(MessageTypeName(msg.type)), msg.sender)));
}

// ---------------------------------------------------------------- server

ServerRole::ServerRole(const SessionConfig& cfg)
    : RoleMachine(cfg, cfg.server()) {}

absl::StatusOr<std::vector<ProtocolMessage>> ServerRole::Start() {
  std::vector<ProtocolMessage> out;
  if (cfg_.method != Method::kHe) return out;
  absl::StatusOr<KeyPair> keys =
      GenerateKeyPair(cfg_.key_bits, prg_, cfg_.allow_test_keys);
  if (!keys.ok()) return Fail("keygen", keys.status());
  keys_.emplace(*std::move(keys));
  const std::vector<uint8_t> encoded = EncodePublicKey(keys_->public_key);
  for (int i = 0; i < cfg_.parties; ++i) {
    Emit(MessageType::kPublicKey, cfg_.provider(i), encoded, out);
  }
  return out;
}

absl::Status ServerRole::AcceptShareSum(const ProtocolMessage& msg) {
  absl::StatusOr<ShareMatrix> sum = DecodeShareMatrix(msg.payload);
  if (!sum.ok()) return Fail("receive share sum", sum.status());
  if (sum->owner != cfg_.ProviderIndex(msg.sender)) {
    return Fail("receive share sum",
                absl::FailedPreconditionError(absl::StrFormat(
                    "party %d sent a share owned by provider index %d",
                    msg.sender, sum->owner)));
  }
  std::map<PartyId, ShareMatrix>* target = nullptr;
  if (sum->secret_id == PhaseSumId(kMeanPhase, cfg_.parties)) {
    target = &mean_share_sums_;
  } else if (sum->secret_id == PhaseSumId(kCovPhase, cfg_.parties)) {
    target = &cov_share_sums_;
  } else {
    return Fail("receive share sum",
                absl::FailedPreconditionError(absl::StrFormat(
                    "share sum from party %d binds unknown secret %#x",
                    msg.sender, sum->secret_id)));
  }
  if (!target->emplace(msg.sender, *std::move(sum)).second) {
    return Fail("receive share sum",
                absl::FailedPreconditionError(absl::StrFormat(
                    "duplicate share sum from party %d", msg.sender)));
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<ProtocolMessage>> ServerRole::Handle(
    const ProtocolMessage& msg) {
  const bool he = cfg_.method == Method::kHe;
  switch (msg.type) {
    case MessageType::kSampleCount: {
      if (!cfg_.IsProvider(msg.sender)) return Unexpected(msg);
      absl::StatusOr<uint64_t> count = DecodeCount(msg.payload);
      if (!count.ok()) return Fail("receive sample count", count.status());
      if (*count < 1 || !counts_.emplace(msg.sender, *count).second) {
        return Fail("receive sample count",
                    absl::FailedPreconditionError(absl::StrFormat(
                        "invalid or repeated count from party %d", msg.sender)));
      }
      break;
    }
    case MessageType::kEncryptedSumAggregate:
    case MessageType::kEncryptedCovAggregate: {
      const bool sums = msg.type == MessageType::kEncryptedSumAggregate;
      std::optional<EncryptedMatrix>& slot =
          sums ? sum_aggregate_ : cov_aggregate_;
      if (!he || msg.sender != cfg_.aggregator || slot.has_value() ||
          stage_ != (sums ? Stage::kMean : Stage::kCov)) {
        return Unexpected(msg);
      }
      absl::StatusOr<EncryptedMatrix> agg = DecodeEncryptedMatrix(msg.payload);
      if (!agg.ok()) return Fail("receive aggregate", agg.status());
      slot = *std::move(agg);
      break;
    }
    case MessageType::kLocalShareSum:
      if (he || !cfg_.IsProvider(msg.sender)) return Unexpected(msg);
      if (absl::Status s = AcceptShareSum(msg); !s.ok()) return s;
      break;
    default:
      return Unexpected(msg);
  }
  std::vector<ProtocolMessage> out;
  if (absl::Status s = Advance(out); !s.ok()) return s;
  return out;
}

absl::StatusOr<Matrix> ServerRole::RecoverSum(uint64_t phase) {
  if (cfg_.method == Method::kHe) {
    const EncryptedMatrix& agg =
        phase == kMeanPhase ? *sum_aggregate_ : *cov_aggregate_;
    return DecryptMatrix(keys_->private_key, agg);
  }
  const std::map<PartyId, ShareMatrix>& held =
      phase == kMeanPhase ? mean_share_sums_ : cov_share_sums_;
  std::vector<ShareMatrix> shares;
  for (const auto& [party, share] : held) shares.push_back(share);
  absl::StatusOr<RingMatrix> sum = ReconstructMatrix(shares, cfg_.parties);
  if (!sum.ok()) return sum.status();
  return DecodeFixedMatrix(*sum, cfg_.fixed_point);
}

absl::Status ServerRole::Advance(std::vector<ProtocolMessage>& out) {
  const bool he = cfg_.method == Method::kHe;
  const size_t m = static_cast<size_t>(cfg_.parties);

  if (stage_ == Stage::kMean && counts_.size() == m &&
      (he ? sum_aggregate_.has_value() : mean_share_sums_.size() == m)) {
    absl::StatusOr<Matrix> sums = RecoverSum(kMeanPhase);
    if (!sums.ok()) return Fail("recover column sums", sums.status());
    if (sums->rows() != 1) {
      return Fail("recover column sums",
                  absl::InvalidArgumentError("column sums must be one row"));
    }
    dims_ = sums->cols();
    if (cfg_.k >= dims_) {
      return Fail("check dimensions",
                  absl::InvalidArgumentError(absl::StrFormat(
                      "k = %d must be below d = %d", cfg_.k, dims_)));
    }
    total_rows_ = 0;
    for (const auto& [party, count] : counts_) total_rows_ += count;
    if (total_rows_ < 2) {
      return Fail("check dimensions",
                  absl::InvalidArgumentError("need at least 2 rows in total"));
    }
    mean_.assign(dims_, 0.0);
    for (size_t t = 0; t < dims_; ++t) {
      mean_[t] = (*sums)(0, t) / static_cast<double>(total_rows_);
    }
    const std::vector<uint8_t> encoded = EncodeRealVector(mean_);
    for (int i = 0; i < cfg_.parties; ++i) {
      Emit(MessageType::kPlainMean, cfg_.provider(i), encoded, out);
    }
    sum_aggregate_.reset();
    stage_ = Stage::kCov;
  }

  if (stage_ == Stage::kCov &&
      (he ? cov_aggregate_.has_value() : cov_share_sums_.size() == m)) {
    absl::StatusOr<Matrix> cov = RecoverSum(kCovPhase);
    if (!cov.ok()) return Fail("recover covariance", cov.status());
    if (cov->rows() != dims_ || cov->cols() != dims_) {
      return Fail("recover covariance",
                  absl::InvalidArgumentError(absl::StrFormat(
                      "covariance is %dx%d, expected %dx%d", cov->rows(),
                      cov->cols(), dims_, dims_)));
    }
    absl::StatusOr<EigenPairs> pairs = JacobiEigh(*cov, cfg_.jacobi);
    if (!pairs.ok()) return Fail("eigendecompose", pairs.status());
    absl::StatusOr<Matrix> transfer = TopKTransfer(*pairs, cfg_.k);
    if (!transfer.ok()) return Fail("select components", transfer.status());
    covariance_ = *std::move(cov);
    eigenvalues_ = pairs->values;
    transfer_ = *std::move(transfer);
    const std::vector<uint8_t> encoded = EncodeRealMatrix(transfer_);
    for (int i = 0; i < cfg_.parties; ++i) {
      Emit(MessageType::kTransferMatrix, cfg_.provider(i), encoded, out);
    }
    cov_aggregate_.reset();
    stage_ = Stage::kDone;
  }
  return absl::OkStatus();
}

// -------------------------------------------------------------- provider

ProviderRole::ProviderRole(const SessionConfig& cfg, int index, Matrix data)
    : RoleMachine(cfg, cfg.provider(index)),
      index_(index),
      data_(std::move(data)) {}

uint64_t ProviderRole::total_rows() const {
  uint64_t n = 0;
  for (const auto& [party, count] : counts_) n += count;
  return n;
}

absl::StatusOr<std::vector<ProtocolMessage>> ProviderRole::Start() {
  if (data_.empty()) {
    return Fail("start", absl::InvalidArgumentError("provider holds no rows"));
  }
  std::vector<ProtocolMessage> out;
  const std::vector<uint8_t> count = EncodeCount(data_.rows());
  for (int j = 0; j < cfg_.parties; ++j) {
    if (j != index_) Emit(MessageType::kSampleCount, cfg_.provider(j), count, out);
  }
  Emit(MessageType::kSampleCount, cfg_.server(), count, out);
  counts_[self_] = data_.rows();

  if (cfg_.method == Method::kSs) {
    absl::StatusOr<Matrix> sums =
        Matrix::Create(1, data_.cols(), ColumnSums(data_));
    if (!sums.ok()) return Fail("share column sums", sums.status());
    if (absl::Status s = DealShares(kMeanPhase, *sums, mean_shares_, out);
        !s.ok()) {
      return Fail("share column sums", s);
    }
    sent_sums_ = true;
  }
  if (absl::Status s = Advance(out); !s.ok()) return s;
  return out;
}

absl::Status ProviderRole::AcceptEncrypted(
    const ProtocolMessage& msg, std::map<int, EncryptedMatrix>& parts) {
  absl::StatusOr<EncryptedMatrix> m = DecodeEncryptedMatrix(msg.payload);
  if (!m.ok()) return Fail("receive ciphertexts", m.status());
  if (!parts.emplace(cfg_.ProviderIndex(msg.sender), *std::move(m)).second) {
    return Fail("receive ciphertexts",
                absl::FailedPreconditionError(absl::StrFormat(
                    "duplicate %s from party %d", std::string(MessageTypeName(msg.type)),
                    msg.sender)));
  }
  return absl::OkStatus();
}

absl::Status ProviderRole::AcceptShares(const ProtocolMessage& msg) {
  absl::StatusOr<ShareMatrix> share = DecodeShareMatrix(msg.payload);
  if (!share.ok()) return Fail("receive shares", share.status());
  const uint64_t phase = share->secret_id >> 32;
  const int dealer = static_cast<int>(share->secret_id & 0xffffffffu);
  if (share->owner != index_ || dealer != cfg_.ProviderIndex(msg.sender) ||
      (phase != kMeanPhase && phase != kCovPhase)) {
    return Fail("receive shares",
                absl::FailedPreconditionError(absl::StrFormat(
                    "share from party %d has owner %d and secret %#x",
                    msg.sender, share->owner, share->secret_id)));
  }
  std::map<int, ShareMatrix>& held =
      phase == kMeanPhase ? mean_shares_ : cov_shares_;
  if (!held.emplace(dealer, *std::move(share)).second) {
    return Fail("receive shares",
                absl::FailedPreconditionError(absl::StrFormat(
                    "duplicate share from party %d", msg.sender)));
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<ProtocolMessage>> ProviderRole::Handle(
    const ProtocolMessage& msg) {
  const bool he = cfg_.method == Method::kHe;
  const bool from_server = msg.sender == cfg_.server();
  const bool from_peer = cfg_.IsProvider(msg.sender) && msg.sender != self_;
  switch (msg.type) {
    case MessageType::kSampleCount: {
      if (!from_peer) return Unexpected(msg);
      absl::StatusOr<uint64_t> count = DecodeCount(msg.payload);
      if (!count.ok()) return Fail("receive sample count", count.status());
      if (*count < 1 || !counts_.emplace(msg.sender, *count).second) {
        return Fail("receive sample count",
                    absl::FailedPreconditionError(absl::StrFormat(
                        "invalid or repeated count from party %d", msg.sender)));
      }
      break;
    }
    case MessageType::kPublicKey: {
      if (!he || !from_server || public_key_.has_value()) return Unexpected(msg);
      absl::StatusOr<PublicKey> pk = DecodePublicKey(msg.payload);
      if (!pk.ok()) return Fail("receive public key", pk.status());
      public_key_ = *std::move(pk);
      break;
    }
    case MessageType::kEncryptedSums:
      if (!is_aggregator() || !from_peer) return Unexpected(msg);
      if (absl::Status s = AcceptEncrypted(msg, sum_parts_); !s.ok()) return s;
      break;
    case MessageType::kEncryptedCov:
      if (!is_aggregator() || !from_peer) return Unexpected(msg);
      if (absl::Status s = AcceptEncrypted(msg, cov_parts_); !s.ok()) return s;
      break;
    case MessageType::kShareBundle:
      if (he || !from_peer) return Unexpected(msg);
      if (absl::Status s = AcceptShares(msg); !s.ok()) return s;
      break;
    case MessageType::kPlainMean: {
      if (!from_server || mean_.has_value()) return Unexpected(msg);
      absl::StatusOr<std::vector<double>> mean = DecodeRealVector(msg.payload);
      if (!mean.ok()) return Fail("receive mean", mean.status());
      if (mean->size() != data_.cols()) {
        return Fail("receive mean",
                    absl::InvalidArgumentError(absl::StrFormat(
                        "mean has %d entries, data has %d columns",
                        mean->size(), data_.cols())));
      }
      mean_ = *std::move(mean);
      break;
    }
    case MessageType::kTransferMatrix: {
      if (!from_server || transfer_.has_value()) return Unexpected(msg);
      absl::StatusOr<Matrix> t = DecodeRealMatrix(msg.payload);
      if (!t.ok()) return Fail("receive transfer matrix", t.status());
      if (t->rows() != data_.cols() || t->cols() != cfg_.k) {
        return Fail("receive transfer matrix",
                    absl::InvalidArgumentError(absl::StrFormat(
                        "transfer matrix is %dx%d, expected %dx%d", t->rows(),
                        t->cols(), data_.cols(), cfg_.k)));
      }
      transfer_ = *std::move(t);
      break;
    }
    default:
      return Unexpected(msg);
  }
  std::vector<ProtocolMessage> out;
  if (absl::Status s = Advance(out); !s.ok()) return s;
  return out;
}

absl::Status ProviderRole::SendEncrypted(MessageType type, const Matrix& m,
                                         std::map<int, EncryptedMatrix>& parts,
                                         std::vector<ProtocolMessage>& out) {
  absl::StatusOr<EncryptedMatrix> enc =
      EncryptMatrix(*public_key_, m, cfg_.float_encoding, prg_);
  if (!enc.ok()) return enc.status();
  if (is_aggregator()) {
    parts[index_] = *std::move(enc);
  } else {
    Emit(type, cfg_.aggregator, EncodeEncryptedMatrix(*enc), out);
  }
  return absl::OkStatus();
}

absl::Status ProviderRole::DealShares(uint64_t phase, const Matrix& m,
                                      std::map<int, ShareMatrix>& held,
                                      std::vector<ProtocolMessage>& out) {
  absl::StatusOr<RingMatrix> ring = EncodeFixedMatrix(m, cfg_.fixed_point);
  if (!ring.ok()) return ring.status();
  absl::StatusOr<std::vector<ShareMatrix>> shares = ShareMatrixSecret(
      *ring, cfg_.parties, cfg_.fixed_point.ring_bits,
      PhaseSecretId(phase, index_), prg_);
  if (!shares.ok()) return shares.status();
  for (int j = 0; j < cfg_.parties; ++j) {
    if (j == index_) {
      held[index_] = (*shares)[j];
    } else {
      Emit(MessageType::kShareBundle, cfg_.provider(j),
           EncodeShareMatrix((*shares)[j]), out);
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<EncryptedMatrix> ProviderRole::Aggregate(
    const std::map<int, EncryptedMatrix>& parts) const {
  auto it = parts.begin();
  EncryptedMatrix acc = it->second;
  for (++it; it != parts.end(); ++it) {
    absl::StatusOr<EncryptedMatrix> next =
        AddEncryptedMatrix(*public_key_, acc, it->second);
    if (!next.ok()) return next.status();
    acc = *std::move(next);
  }
  return acc;
}

absl::StatusOr<ShareMatrix> ProviderRole::LocalShareSum(
    const std::map<int, ShareMatrix>& held) const {
  std::vector<ShareMatrix> shares;
  for (const auto& [dealer, share] : held) shares.push_back(share);
  return AddLocalMatrix(shares);
}

absl::Status ProviderRole::LocalCovariance() {
  absl::StatusOr<Matrix> centered = CenterColumns(data_, *mean_);
  if (!centered.ok()) return centered.status();
  centered_ = *std::move(centered);
  local_cov_ = Scale(Gram(centered_), 1.0 / static_cast<double>(total_rows() - 1));
  return absl::OkStatus();
}

absl::Status ProviderRole::Advance(std::vector<ProtocolMessage>& out) {
  const size_t m = static_cast<size_t>(cfg_.parties);
  if (cfg_.method == Method::kHe) {
    if (public_key_.has_value() && !sent_sums_) {
      absl::StatusOr<Matrix> sums =
          Matrix::Create(1, data_.cols(), ColumnSums(data_));
      if (!sums.ok()) return Fail("encrypt column sums", sums.status());
      if (absl::Status s = SendEncrypted(MessageType::kEncryptedSums, *sums,
                                         sum_parts_, out);
          !s.ok()) {
        return Fail("encrypt column sums", s);
      }
      sent_sums_ = true;
    }
    if (is_aggregator() && !sent_sum_aggregate_ && sum_parts_.size() == m) {
      absl::StatusOr<EncryptedMatrix> agg = Aggregate(sum_parts_);
      if (!agg.ok()) return Fail("aggregate column sums", agg.status());
      Emit(MessageType::kEncryptedSumAggregate, cfg_.server(),
           EncodeEncryptedMatrix(*agg), out);
      sum_parts_.clear();
      sent_sum_aggregate_ = true;
    }
    if (public_key_.has_value() && mean_.has_value() && knows_total() &&
        !sent_cov_) {
      if (absl::Status s = LocalCovariance(); !s.ok()) {
        return Fail("center data", s);
      }
      if (absl::Status s = SendEncrypted(MessageType::kEncryptedCov,
                                         local_cov_, cov_parts_, out);
          !s.ok()) {
        return Fail("encrypt covariance", s);
      }
      sent_cov_ = true;
    }
    if (is_aggregator() && !sent_cov_aggregate_ && cov_parts_.size() == m) {
      absl::StatusOr<EncryptedMatrix> agg = Aggregate(cov_parts_);
      if (!agg.ok()) return Fail("aggregate covariance", agg.status());
      Emit(MessageType::kEncryptedCovAggregate, cfg_.server(),
           EncodeEncryptedMatrix(*agg), out);
      cov_parts_.clear();
      sent_cov_aggregate_ = true;
    }
  } else {
    if (!sent_mean_share_sum_ && mean_shares_.size() == m) {
      absl::StatusOr<ShareMatrix> sum = LocalShareSum(mean_shares_);
      if (!sum.ok()) return Fail("add column-sum shares", sum.status());
      Emit(MessageType::kLocalShareSum, cfg_.server(), EncodeShareMatrix(*sum),
           out);
      mean_shares_.clear();
      sent_mean_share_sum_ = true;
    }
    if (mean_.has_value() && knows_total() && !sent_cov_) {
      if (absl::Status s = LocalCovariance(); !s.ok()) {
        return Fail("center data", s);
      }
      if (absl::Status s = DealShares(kCovPhase, local_cov_, cov_shares_, out);
          !s.ok()) {
        return Fail("share covariance", s);
      }
      sent_cov_ = true;
    }
    if (!sent_cov_share_sum_ && cov_shares_.size() == m) {
      absl::StatusOr<ShareMatrix> sum = LocalShareSum(cov_shares_);
      if (!sum.ok()) return Fail("add covariance shares", sum.status());
      Emit(MessageType::kLocalShareSum, cfg_.server(), EncodeShareMatrix(*sum),
           out);
      cov_shares_.clear();
      sent_cov_share_sum_ = true;
    }
  }
  if (transfer_.has_value() && sent_cov_ && !sent_rows_) {
    absl::StatusOr<Matrix> reduced = Project(centered_, *transfer_);
    if (!reduced.ok()) return Fail("project", reduced.status());
    Emit(MessageType::kReducedRows, cfg_.consumer(), EncodeRealMatrix(*reduced),
         out);
    sent_rows_ = true;
  }
  return absl::OkStatus();
}

// -------------------------------------------------------------- consumer

ConsumerRole::ConsumerRole(const SessionConfig& cfg)
    : RoleMachine(cfg, cfg.consumer()) {}

absl::StatusOr<std::vector<ProtocolMessage>> ConsumerRole::Handle(
    const ProtocolMessage& msg) {
  if (msg.type != MessageType::kReducedRows || !cfg_.IsProvider(msg.sender)) {
    return Unexpected(msg);
  }
  absl::StatusOr<Matrix> block = DecodeRealMatrix(msg.payload);
  if (!block.ok()) return Fail("receive reduced rows", block.status());
  if (block->cols() != cfg_.k) {
    return Fail("receive reduced rows",
                absl::InvalidArgumentError(absl::StrFormat(
                    "party %d sent %d columns, expected %d", msg.sender,
                    block->cols(), cfg_.k)));
  }
  if (!blocks_.emplace(cfg_.ProviderIndex(msg.sender), *std::move(block))
           .second) {
    return Fail("receive reduced rows",
                absl::FailedPreconditionError(absl::StrFormat(
                    "duplicate rows from party %d", msg.sender)));
  }
  if (static_cast<int>(blocks_.size()) == cfg_.parties) {
    std::vector<Matrix> ordered;
    for (const auto& [index, b] : blocks_) ordered.push_back(b);
    absl::StatusOr<Matrix> stacked = VStack(ordered);
    if (!stacked.ok()) return Fail("stack reduced rows", stacked.status());
    reduced_ = *std::move(stacked);
  }
  return std::vector<ProtocolMessage>();
}

std::vector<size_t> ConsumerRole::block_rows() const {
  std::vector<size_t> rows;
  for (const auto& [index, b] : blocks_) rows.push_back(b.rows());
  return rows;
}

absl::StatusOr<std::unique_ptr<RoleMachine>> MakeRole(
    const SessionConfig& cfg, PartyId party, std::optional<Matrix> data) {
  absl::StatusOr<Role> role = cfg.RoleOf(party);
  if (!role.ok()) return role.status();
  switch (*role) {
    case Role::kServer:
      return std::unique_ptr<RoleMachine>(new ServerRole(cfg));
    case Role::kConsumer:
      return std::unique_ptr<RoleMachine>(new ConsumerRole(cfg));
    case Role::kProvider:
      if (!data.has_value()) {
        return absl::InvalidArgumentError(
            absl::StrFormat("provider party %d needs a data partition", party));
      }
      return std::unique_ptr<RoleMachine>(
          new ProviderRole(cfg, cfg.ProviderIndex(party), *std::move(data)));
  }
  return absl::InternalError("unreachable role");
}

}  // namespace hpca
