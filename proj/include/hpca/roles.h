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

// Event-driven role state machines for the joint PCA protocol.
//
// A role reacts to delivered messages and returns the messages it wants sent.
// Transitions fire as soon as their inputs are complete, so the machines do
// not depend on the interleaving of different senders. Any error aborts the
// session; the returned status names the party and the protocol stage.
//
// HE path (aggregator p is a provider):
//   server   -> providers  PublicKey
//   provider -> p          EncryptedSums (column sums)
//   p        -> server     EncryptedSumAggregate
//   server   -> providers  PlainMean
//   provider -> p          EncryptedCov (centered Gram / (n - 1))
//   p        -> server     EncryptedCovAggregate
//   server   -> providers  TransferMatrix
//   provider -> consumer   ReducedRows
// SS path:
//   provider -> providers  ShareBundle (shares of the column sums)
//   provider -> server     LocalShareSum
//   server   -> providers  PlainMean
//   provider -> providers  ShareBundle (shares of the local covariance)
//   provider -> server     LocalShareSum
//   server   -> providers  TransferMatrix
//   provider -> consumer   ReducedRows
// On both paths every provider first announces its row count to the other
// providers and the server with SampleCount.

#ifndef HPCA_ROLES_H_
#define HPCA_ROLES_H_

#include <map>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "hpca/linalg.h"
#include "hpca/message.h"
#include "hpca/paillier.h"
#include "hpca/prg.h"
#include "hpca/secret_sharing.h"
#include "hpca/session.h"

namespace hpca {

// Secret ids used on the SS path: the phase in the high 32 bits and the
// dealing provider's index in the low bits.
inline constexpr uint64_t kMeanPhase = 1;
inline constexpr uint64_t kCovPhase = 2;
SecretId PhaseSecretId(uint64_t phase, int dealer_index);
// Id of the local sum every provider forms in `phase`.
SecretId PhaseSumId(uint64_t phase, int parties);

class RoleMachine {
 public:
  RoleMachine(const SessionConfig& cfg, PartyId self);
  virtual ~RoleMachine() = default;

  PartyId id() const { return self_; }
  virtual absl::StatusOr<std::vector<ProtocolMessage>> Start() = 0;
  virtual absl::StatusOr<std::vector<ProtocolMessage>> Handle(
      const ProtocolMessage& msg) = 0;
  virtual bool done() const = 0;

 protected:
  void Emit(MessageType type, PartyId receiver, std::vector<uint8_t> payload,
            std::vector<ProtocolMessage>& out);
  // Prefixes `status` with the party and stage.
  absl::Status Fail(std::string_view stage, const absl::Status& status) const;
  absl::Status Unexpected(const ProtocolMessage& msg) const;
  virtual std::string_view role_name() const = 0;

  const SessionConfig cfg_;
  const PartyId self_;
  Prg prg_;

 private:
  uint32_t next_step_ = 0;
};

class ServerRole : public RoleMachine {
 public:
  explicit ServerRole(const SessionConfig& cfg);

  absl::StatusOr<std::vector<ProtocolMessage>> Start() override;
  absl::StatusOr<std::vector<ProtocolMessage>> Handle(
      const ProtocolMessage& msg) override;
  bool done() const override { return stage_ == Stage::kDone; }

  // Results visible to the server, available once done().
  const std::vector<double>& mean() const { return mean_; }
  const Matrix& covariance() const { return covariance_; }
  const Matrix& transfer() const { return transfer_; }
  const std::vector<double>& eigenvalues() const { return eigenvalues_; }
  uint64_t total_rows() const { return total_rows_; }

 private:
  enum class Stage { kMean, kCov, kDone };
  std::string_view role_name() const override { return "server"; }
  absl::Status Advance(std::vector<ProtocolMessage>& out);
  absl::StatusOr<Matrix> RecoverSum(uint64_t phase);
  absl::Status AcceptShareSum(const ProtocolMessage& msg);

  Stage stage_ = Stage::kMean;
  std::optional<KeyPair> keys_;
  std::map<PartyId, uint64_t> counts_;
  std::optional<EncryptedMatrix> sum_aggregate_;
  std::optional<EncryptedMatrix> cov_aggregate_;
  std::map<PartyId, ShareMatrix> mean_share_sums_;
  std::map<PartyId, ShareMatrix> cov_share_sums_;

  uint64_t total_rows_ = 0;
  size_t dims_ = 0;
  std::vector<double> mean_;
  Matrix covariance_;
  Matrix transfer_;
  std::vector<double> eigenvalues_;
};

class ProviderRole : public RoleMachine {
 public:
  // `index` is the 0-based provider index; the party id is index + 1.
  ProviderRole(const SessionConfig& cfg, int index, Matrix data);

  absl::StatusOr<std::vector<ProtocolMessage>> Start() override;
  absl::StatusOr<std::vector<ProtocolMessage>> Handle(
      const ProtocolMessage& msg) override;
  bool done() const override { return sent_rows_; }

 private:
  std::string_view role_name() const override { return "provider"; }
  bool is_aggregator() const {
    return cfg_.method == Method::kHe && self_ == cfg_.aggregator;
  }
  bool knows_total() const {
    return static_cast<int>(counts_.size()) == cfg_.parties;
  }
  uint64_t total_rows() const;
  absl::Status Advance(std::vector<ProtocolMessage>& out);
  // HE: encrypts `m` and sends it to the aggregator, or files it locally when
  // this provider is the aggregator.
  absl::Status SendEncrypted(MessageType type, const Matrix& m,
                             std::map<int, EncryptedMatrix>& parts,
                             std::vector<ProtocolMessage>& out);
  // SS: shares `m` among all providers, keeping this provider's share.
  absl::Status DealShares(uint64_t phase, const Matrix& m,
                          std::map<int, ShareMatrix>& held,
                          std::vector<ProtocolMessage>& out);
  absl::Status AcceptEncrypted(const ProtocolMessage& msg,
                               std::map<int, EncryptedMatrix>& parts);
  absl::Status AcceptShares(const ProtocolMessage& msg);
  absl::StatusOr<EncryptedMatrix> Aggregate(
      const std::map<int, EncryptedMatrix>& parts) const;
  absl::StatusOr<ShareMatrix> LocalShareSum(
      const std::map<int, ShareMatrix>& held) const;
  absl::Status LocalCovariance();

  const int index_;
  const Matrix data_;
  std::map<PartyId, uint64_t> counts_;
  std::optional<PublicKey> public_key_;
  std::optional<std::vector<double>> mean_;
  std::optional<Matrix> transfer_;
  Matrix centered_;
  Matrix local_cov_;

  std::map<int, EncryptedMatrix> sum_parts_;  // aggregator only
  std::map<int, EncryptedMatrix> cov_parts_;  // aggregator only
  std::map<int, ShareMatrix> mean_shares_;    // by dealer index
  std::map<int, ShareMatrix> cov_shares_;

  bool sent_sums_ = false;
  bool sent_sum_aggregate_ = false;
  bool sent_cov_ = false;
  bool sent_cov_aggregate_ = false;
  bool sent_mean_share_sum_ = false;
  bool sent_cov_share_sum_ = false;
  bool sent_rows_ = false;
};

class ConsumerRole : public RoleMachine {
 public:
  explicit ConsumerRole(const SessionConfig& cfg);

  absl::StatusOr<std::vector<ProtocolMessage>> Start() override {
    return std::vector<ProtocolMessage>();
  }
  absl::StatusOr<std::vector<ProtocolMessage>> Handle(
      const ProtocolMessage& msg) override;
  bool done() const override { return !reduced_.empty(); }

  // Row-stacked reduced data in provider order, available once done().
  const Matrix& reduced() const { return reduced_; }
  // Row count contributed by each provider, in provider order.
  std::vector<size_t> block_rows() const;

 private:
  std::string_view role_name() const override { return "consumer"; }
  std::map<int, Matrix> blocks_;
  Matrix reduced_;
};

// Builds the role for `party`. Providers need their data partition.
absl::StatusOr<std::unique_ptr<RoleMachine>> MakeRole(
    const SessionConfig& cfg, PartyId party,
    std::optional<Matrix> data = std::nullopt);

}  // namespace hpca

#endif  // HPCA_ROLES_H_
