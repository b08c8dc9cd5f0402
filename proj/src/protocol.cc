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

#include "hpca/protocol.h"

#include <map>
#include <memory>
#include <string>
#include <thread>
#include <utility>

#include "absl/strings/str_format.h"
#include "hpca/secret_sharing.h"
#include "hpca/tcp_transport.h"

namespace hpca {
namespace {

absl::Status CheckPartitions(const SessionConfig& cfg,
                             std::span<const Matrix> partitions) {
  if (absl::Status s = cfg.Validate(); !s.ok()) return s;
  if (static_cast<int>(partitions.size()) != cfg.parties) {
    return absl::InvalidArgumentError(
        absl::StrFormat("%d partitions for %d providers", partitions.size(),
                        cfg.parties));
  }
  for (size_t i = 0; i < partitions.size(); ++i) {
    if (partitions[i].empty()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("provider %d holds no rows", i));
    }
    if (partitions[i].cols() != partitions[0].cols()) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "dimension mismatch: provider %d has %d columns, provider 0 has %d",
          i, partitions[i].cols(), partitions[0].cols()));
    }
  }
  return absl::OkStatus();
}

std::vector<std::unique_ptr<RoleMachine>> MakeRoles(
    const SessionConfig& cfg, std::span<const Matrix> partitions) {
  std::vector<std::unique_ptr<RoleMachine>> roles;
  roles.push_back(std::make_unique<ServerRole>(cfg));
  for (int i = 0; i < cfg.parties; ++i) {
    roles.push_back(std::make_unique<ProviderRole>(cfg, i, partitions[i]));
  }
  roles.push_back(std::make_unique<ConsumerRole>(cfg));
  return roles;
}

ProtocolResult Collect(const std::vector<std::unique_ptr<RoleMachine>>& roles,
                       Transcript transcript) {
  const auto& server = static_cast<const ServerRole&>(*roles.front());
  const auto& consumer = static_cast<const ConsumerRole&>(*roles.back());
  ProtocolResult result;
  result.reduced = consumer.reduced();
  result.block_rows = consumer.block_rows();
  result.transfer = server.transfer();
  result.mean = server.mean();
  result.covariance = server.covariance();
  result.eigenvalues = server.eigenvalues();
  result.transcript = std::move(transcript);
  return result;
}

}  // namespace

absl::StatusOr<ProtocolResult> RunSimulated(
    const SessionConfig& cfg, std::span<const Matrix> partitions) {
  if (absl::Status s = CheckPartitions(cfg, partitions); !s.ok()) return s;
  std::vector<std::unique_ptr<RoleMachine>> roles = MakeRoles(cfg, partitions);
  SimulationBus bus;
  auto send_all = [&bus](const std::vector<ProtocolMessage>& out) {
    for (const ProtocolMessage& msg : out) {
      if (absl::Status s = bus.Send(msg); !s.ok()) return s;
    }
    return absl::OkStatus();
  };
  for (auto& role : roles) {
    absl::StatusOr<std::vector<ProtocolMessage>> out = role->Start();
    if (!out.ok()) return out.status();
    if (absl::Status s = send_all(*out); !s.ok()) return s;
  }
  while (!bus.idle()) {
    absl::StatusOr<std::optional<ProtocolMessage>> next = bus.DeliverNext();
    if (!next.ok()) return next.status();
    const ProtocolMessage& msg = **next;
    if (msg.receiver >= roles.size()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("message for unknown party %d", msg.receiver));
    }
    absl::StatusOr<std::vector<ProtocolMessage>> out =
        roles[msg.receiver]->Handle(msg);
    if (!out.ok()) return out.status();
    if (absl::Status s = send_all(*out); !s.ok()) return s;
  }
  for (const auto& role : roles) {
    if (!role->done()) {
      return absl::InternalError(
          absl::StrFormat("session stalled: party %d did not finish",
                          role->id()));
    }
  }
  return Collect(roles, bus.transcript());
}

absl::StatusOr<ProtocolResult> RunHe(SessionConfig cfg,
                                     std::span<const Matrix> partitions) {
  cfg.method = Method::kHe;
  return RunSimulated(cfg, partitions);
}

absl::StatusOr<ProtocolResult> RunSs(SessionConfig cfg,
                                     std::span<const Matrix> partitions) {
  cfg.method = Method::kSs;
  return RunSimulated(cfg, partitions);
}

absl::Status DriveRole(RoleMachine& role, Transport& transport,
                       absl::Duration timeout) {
  auto send_all = [&transport](const std::vector<ProtocolMessage>& out) {
    for (const ProtocolMessage& msg : out) {
      if (absl::Status s = transport.Send(msg); !s.ok()) return s;
    }
    return absl::OkStatus();
  };
  absl::StatusOr<std::vector<ProtocolMessage>> out = role.Start();
  if (!out.ok()) return out.status();
  if (absl::Status s = send_all(*out); !s.ok()) return s;
  while (!role.done()) {
    absl::StatusOr<ProtocolMessage> msg = transport.Receive(timeout);
    if (!msg.ok()) return msg.status();
    out = role.Handle(*msg);
    if (!out.ok()) return out.status();
    if (absl::Status s = send_all(*out); !s.ok()) return s;
  }
  return absl::OkStatus();
}

absl::StatusOr<ProtocolResult> RunLoopbackTcp(
    const SessionConfig& cfg, std::span<const Matrix> partitions,
    absl::Duration timeout) {
  if (absl::Status s = CheckPartitions(cfg, partitions); !s.ok()) return s;
  std::vector<std::unique_ptr<RoleMachine>> roles = MakeRoles(cfg, partitions);
  TranscriptSink sink;
  std::vector<std::unique_ptr<TcpTransport>> transports;
  std::map<PartyId, TcpAddress> peers;
  for (const auto& role : roles) {
    absl::StatusOr<std::unique_ptr<TcpTransport>> t = TcpTransport::Listen(
        role->id(), cfg.session_id, TcpAddress{"127.0.0.1", 0}, &sink);
    if (!t.ok()) return t.status();
    peers[role->id()] = TcpAddress{"127.0.0.1", (*t)->port()};
    transports.push_back(*std::move(t));
  }
  for (auto& t : transports) {
    t->SetPeers(peers);
    t->set_connect_timeout(timeout);
  }
  std::vector<absl::Status> statuses(roles.size());
  std::vector<std::thread> threads;
  for (size_t i = 0; i < roles.size(); ++i) {
    threads.emplace_back([&, i] {
      statuses[i] = DriveRole(*roles[i], *transports[i], timeout);
    });
  }
  for (std::thread& t : threads) t.join();
  for (const absl::Status& s : statuses) {
    if (!s.ok()) return s;
  }
  transports.clear();
  return Collect(roles, sink.Snapshot());
}

absl::StatusOr<Matrix> SecureSumHe(std::span<const Matrix> matrices,
                                   size_t aggregator_index,
                                   const KeyPair& keys,
                                   const FloatEncodingConfig& encoding,
                                   Prg& prg) {
  if (matrices.empty()) {
    return absl::InvalidArgumentError("secure sum needs at least one matrix");
  }
  if (aggregator_index >= matrices.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "aggregator %d outside [0, %d)", aggregator_index, matrices.size()));
  }
  const PublicKey& pk = keys.public_key;
  std::vector<EncryptedMatrix> encrypted;
  for (const Matrix& m : matrices) {
    absl::StatusOr<EncryptedMatrix> e = EncryptMatrix(pk, m, encoding, prg);
    if (!e.ok()) return e.status();
    encrypted.push_back(*std::move(e));
  }
  // The aggregator starts from its own ciphertexts and adds the others in
  // party order.
  EncryptedMatrix acc = encrypted[aggregator_index];
  for (size_t i = 0; i < encrypted.size(); ++i) {
    if (i == aggregator_index) continue;
    absl::StatusOr<EncryptedMatrix> next =
        AddEncryptedMatrix(pk, acc, encrypted[i]);
    if (!next.ok()) return next.status();
    acc = *std::move(next);
  }
  return DecryptMatrix(keys.private_key, acc);
}

absl::StatusOr<Matrix> SecureSumSs(std::span<const Matrix> matrices,
                                   const FixedPointConfig& encoding, Prg& prg) {
  if (matrices.empty()) {
    return absl::InvalidArgumentError("secure sum needs at least one matrix");
  }
  const int parties = static_cast<int>(matrices.size());
  std::vector<RingMatrix> secrets;
  for (const Matrix& m : matrices) {
    absl::StatusOr<RingMatrix> r = EncodeFixedMatrix(m, encoding);
    if (!r.ok()) return r.status();
    secrets.push_back(*std::move(r));
  }
  if (parties == 1) return DecodeFixedMatrix(secrets.front(), encoding);

  // held[j] collects the shares party j receives, one per dealer.
  std::vector<std::vector<ShareMatrix>> held(parties);
  for (int dealer = 0; dealer < parties; ++dealer) {
    absl::StatusOr<std::vector<ShareMatrix>> shares =
        ShareMatrixSecret(secrets[dealer], parties, encoding.ring_bits,
                          PhaseSecretId(kMeanPhase, dealer), prg);
    if (!shares.ok()) return shares.status();
    for (int j = 0; j < parties; ++j) held[j].push_back((*shares)[j]);
  }
  std::vector<ShareMatrix> local_sums;
  for (int j = 0; j < parties; ++j) {
    absl::StatusOr<ShareMatrix> sum = AddLocalMatrix(held[j]);
    if (!sum.ok()) return sum.status();
    local_sums.push_back(*std::move(sum));
  }
  absl::StatusOr<RingMatrix> total = ReconstructMatrix(local_sums, parties);
  if (!total.ok()) return total.status();
  return DecodeFixedMatrix(*total, encoding);
}

}  // namespace hpca
