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

// Framed TCP transport. Each party listens on one address; a sender opens one
// connection per (sender, receiver) channel on first use and keeps it for the
// session. A connection starts with a 14-byte hello
//   magic "PPCH" | session_id u64 | sender u16
// and then carries frames in the wire format. Frames for another session,
// another receiver, or from a sender other than the one announced are
// rejected and surface as errors from Receive.

#ifndef HPCA_TCP_TRANSPORT_H_
#define HPCA_TCP_TRANSPORT_H_

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/time/time.h"
#include "hpca/message.h"
#include "hpca/transport.h"

namespace hpca {

struct TcpAddress {
  std::string host = "127.0.0.1";
  uint16_t port = 0;
};

// Parses "host:port".
absl::StatusOr<TcpAddress> ParseTcpAddress(const std::string& text);

class TcpTransport : public Transport {
 public:
  // Binds and starts accepting. Port 0 picks an ephemeral port; see port().
  // Every delivered frame is appended to `sink` when it is non-null.
  static absl::StatusOr<std::unique_ptr<TcpTransport>> Listen(
      PartyId self, uint64_t session_id, const TcpAddress& address,
      TranscriptSink* sink = nullptr);

  ~TcpTransport() override;
  TcpTransport(const TcpTransport&) = delete;
  TcpTransport& operator=(const TcpTransport&) = delete;

  uint16_t port() const { return port_; }
  void SetPeers(std::map<PartyId, TcpAddress> peers);
  // How long Send keeps retrying a peer that is not listening yet.
  void set_connect_timeout(absl::Duration d) { connect_timeout_ = d; }

  absl::Status Send(const ProtocolMessage& msg) override;
  absl::StatusOr<ProtocolMessage> Receive(absl::Duration timeout) override;

 private:
  TcpTransport(PartyId self, uint64_t session_id, int listen_fd, uint16_t port,
               TranscriptSink* sink);
  void AcceptLoop();
  void ReadLoop(int fd);
  void PushError(absl::Status status);
  absl::StatusOr<int> ConnectionTo(PartyId peer);

  const PartyId self_;
  const uint64_t session_id_;
  const int listen_fd_;
  const uint16_t port_;
  TranscriptSink* const sink_;
  absl::Duration connect_timeout_ = kDefaultReceiveTimeout;

  std::atomic<bool> stopping_{false};
  std::thread accept_thread_;

  std::mutex mu_;  // guards inbox_, readers_, accepted_fds_
  std::condition_variable cv_;
  std::deque<absl::StatusOr<ProtocolMessage>> inbox_;
  std::vector<std::thread> readers_;
  std::vector<int> accepted_fds_;

  std::mutex send_mu_;  // guards peers_, outgoing_
  std::map<PartyId, TcpAddress> peers_;
  std::map<PartyId, int> outgoing_;
};

}  // namespace hpca

#endif  // HPCA_TCP_TRANSPORT_H_
