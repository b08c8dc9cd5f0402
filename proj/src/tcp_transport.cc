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

#include "hpca/tcp_transport.h"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <cstring>
#include <utility>

#include "absl/strings/numbers.h"
#include "absl/strings/str_format.h"
#include "absl/time/clock.h"
#include "hpca/wire.h"

namespace hpca {
namespace {

constexpr uint8_t kHelloMagic[4] = {'P', 'P', 'C', 'H'};
constexpr size_t kHelloSize = 14;

// Reads exactly `n` bytes. Returns the number read before EOF (< n on EOF),
// or -1 on error.
ssize_t ReadExact(int fd, uint8_t* buf, size_t n) {
  size_t got = 0;
  while (got < n) {
    const ssize_t r = ::recv(fd, buf + got, n - got, 0);
    if (r == 0) return static_cast<ssize_t>(got);
    if (r < 0) {
      if (errno == EINTR) continue;
      return -1;
    }
    got += static_cast<size_t>(r);
  }
  return static_cast<ssize_t>(got);
}

absl::Status WriteAll(int fd, std::span<const uint8_t> bytes) {
  size_t sent = 0;
  while (sent < bytes.size()) {
    const ssize_t w =
        ::send(fd, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
    if (w < 0) {
      if (errno == EINTR) continue;
      return absl::UnavailableError(
          absl::StrFormat("connection lost: %s", std::strerror(errno)));
    }
    sent += static_cast<size_t>(w);
  }
  return absl::OkStatus();
}

std::array<uint8_t, kHelloSize> MakeHello(uint64_t session_id, PartyId sender) {
  std::array<uint8_t, kHelloSize> hello{};
  std::memcpy(hello.data(), kHelloMagic, 4);
  for (int i = 0; i < 8; ++i) {
    hello[4 + i] = static_cast<uint8_t>(session_id >> (56 - 8 * i));
  }
  hello[12] = static_cast<uint8_t>(sender >> 8);
  hello[13] = static_cast<uint8_t>(sender);
  return hello;
}

}  // namespace

absl::StatusOr<TcpAddress> ParseTcpAddress(const std::string& text) {
  const size_t colon = text.rfind(':');
  if (colon == std::string::npos || colon == 0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("expected host:port, got '%s'", text));
  }
  uint32_t port = 0;
  if (!absl::SimpleAtoi(text.substr(colon + 1), &port) || port > 65535) {
    return absl::InvalidArgumentError(
        absl::StrFormat("bad port in '%s'", text));
  }
  return TcpAddress{text.substr(0, colon), static_cast<uint16_t>(port)};
}

absl::StatusOr<std::unique_ptr<TcpTransport>> TcpTransport::Listen(
    PartyId self, uint64_t session_id, const TcpAddress& address,
    TranscriptSink* sink) {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) {
    return absl::UnavailableError(
        absl::StrFormat("socket: %s", std::strerror(errno)));
  }
  const int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(address.port);
  if (::inet_pton(AF_INET, address.host.c_str(), &addr.sin_addr) != 1) {
    ::close(fd);
    return absl::InvalidArgumentError(
        absl::StrFormat("listen address must be IPv4, got '%s'", address.host));
  }
  if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
      ::listen(fd, 64) != 0) {
    const std::string err = std::strerror(errno);
    ::close(fd);
    return absl::UnavailableError(absl::StrFormat(
        "cannot listen on %s:%d: %s", address.host, address.port, err));
  }
  socklen_t len = sizeof(addr);
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  return std::unique_ptr<TcpTransport>(
      new TcpTransport(self, session_id, fd, ntohs(addr.sin_port), sink));
}

TcpTransport::TcpTransport(PartyId self, uint64_t session_id, int listen_fd,
                           uint16_t port, TranscriptSink* sink)
    : self_(self),
      session_id_(session_id),
      listen_fd_(listen_fd),
      port_(port),
      sink_(sink) {
  accept_thread_ = std::thread([this] { AcceptLoop(); });
}

TcpTransport::~TcpTransport() {
  stopping_ = true;
  accept_thread_.join();
  ::close(listen_fd_);
  {
    std::lock_guard<std::mutex> lock(send_mu_);
    for (auto& [peer, fd] : outgoing_) ::close(fd);
  }
  std::vector<std::thread> readers;
  {
    std::lock_guard<std::mutex> lock(mu_);
    for (int fd : accepted_fds_) ::shutdown(fd, SHUT_RDWR);
    readers.swap(readers_);
  }
  for (std::thread& t : readers) t.join();
  for (int fd : accepted_fds_) ::close(fd);
}

void TcpTransport::SetPeers(std::map<PartyId, TcpAddress> peers) {
  std::lock_guard<std::mutex> lock(send_mu_);
  peers_ = std::move(peers);
}

void TcpTransport::AcceptLoop() {
  while (!stopping_) {
    pollfd pfd{listen_fd_, POLLIN, 0};
    if (::poll(&pfd, 1, 50) <= 0) continue;
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) continue;
    std::lock_guard<std::mutex> lock(mu_);
    accepted_fds_.push_back(fd);
    readers_.emplace_back([this, fd] { ReadLoop(fd); });
  }
}

void TcpTransport::PushError(absl::Status status) {
  std::lock_guard<std::mutex> lock(mu_);
  inbox_.push_back(std::move(status));
  cv_.notify_all();
}

void TcpTransport::ReadLoop(int fd) {
  std::array<uint8_t, kHelloSize> hello;
  if (ReadExact(fd, hello.data(), hello.size()) !=
      static_cast<ssize_t>(hello.size())) {
    if (!stopping_) PushError(absl::DataLossError("truncated connection hello"));
    return;
  }
  if (std::memcmp(hello.data(), kHelloMagic, 4) != 0) {
    PushError(absl::DataLossError("bad connection hello"));
    return;
  }
  uint64_t session = 0;
  for (int i = 0; i < 8; ++i) session = (session << 8) | hello[4 + i];
  const PartyId announced = static_cast<PartyId>((hello[12] << 8) | hello[13]);
  if (session != session_id_) {
    PushError(absl::FailedPreconditionError(absl::StrFormat(
        "connection from party %d belongs to session %d, expected %d",
        announced, session, session_id_)));
    return;
  }

  while (true) {
    std::vector<uint8_t> frame(kFrameHeaderSize);
    const ssize_t got = ReadExact(fd, frame.data(), frame.size());
    if (got == 0) return;  // orderly close between frames
    if (got != static_cast<ssize_t>(frame.size())) {
      if (!stopping_) {
        PushError(absl::UnavailableError(absl::StrFormat(
            "connection from party %d lost mid-frame", announced)));
      }
      return;
    }
    absl::StatusOr<FrameHeader> header = ParseFrameHeader(frame);
    if (!header.ok()) {
      PushError(header.status());
      return;
    }
    frame.resize(kFrameHeaderSize + header->payload_length);
    if (header->payload_length > 0 &&
        ReadExact(fd, frame.data() + kFrameHeaderSize, header->payload_length) !=
            static_cast<ssize_t>(header->payload_length)) {
      if (!stopping_) {
        PushError(absl::DataLossError(absl::StrFormat(
            "truncated frame from party %d", announced)));
      }
      return;
    }
    absl::StatusOr<ProtocolMessage> msg = DeserializeFrame(frame);
    if (!msg.ok()) {
      PushError(msg.status());
      return;
    }
    if (msg->sender != announced || msg->receiver != self_) {
      PushError(absl::FailedPreconditionError(absl::StrFormat(
          "frame %d->%d on channel %d->%d", msg->sender, msg->receiver,
          announced, self_)));
      return;
    }
    if (sink_ != nullptr) sink_->Append(*msg);
    std::lock_guard<std::mutex> lock(mu_);
    inbox_.push_back(*std::move(msg));
    cv_.notify_all();
  }
}

absl::StatusOr<int> TcpTransport::ConnectionTo(PartyId peer) {
  if (auto it = outgoing_.find(peer); it != outgoing_.end()) return it->second;
  auto addr_it = peers_.find(peer);
  if (addr_it == peers_.end()) {
    return absl::NotFoundError(absl::StrFormat("no address for party %d", peer));
  }
  const TcpAddress& address = addr_it->second;

  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* resolved = nullptr;
  const std::string port = std::to_string(address.port);
  if (::getaddrinfo(address.host.c_str(), port.c_str(), &hints, &resolved) != 0 ||
      resolved == nullptr) {
    return absl::UnavailableError(
        absl::StrFormat("cannot resolve %s", address.host));
  }
  const absl::Time deadline = absl::Now() + connect_timeout_;
  int fd = -1;
  while (true) {
    fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd >= 0 && ::connect(fd, resolved->ai_addr, resolved->ai_addrlen) == 0) {
      break;
    }
    if (fd >= 0) ::close(fd);
    fd = -1;
    if (absl::Now() >= deadline) break;
    absl::SleepFor(absl::Milliseconds(20));
  }
  ::freeaddrinfo(resolved);
  if (fd < 0) {
    return absl::DeadlineExceededError(absl::StrFormat(
        "party %d at %s:%d did not accept within %s", peer, address.host,
        address.port, absl::FormatDuration(connect_timeout_)));
  }
  const int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  const auto hello = MakeHello(session_id_, self_);
  if (absl::Status s = WriteAll(fd, hello); !s.ok()) {
    ::close(fd);
    return s;
  }
  outgoing_[peer] = fd;
  return fd;
}

absl::Status TcpTransport::Send(const ProtocolMessage& msg) {
  if (msg.sender != self_) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "party %d cannot send as party %d", self_, msg.sender));
  }
  absl::StatusOr<std::vector<uint8_t>> frame = SerializeFrame(msg);
  if (!frame.ok()) return frame.status();
  std::lock_guard<std::mutex> lock(send_mu_);
  absl::StatusOr<int> fd = ConnectionTo(msg.receiver);
  if (!fd.ok()) return fd.status();
  return WriteAll(*fd, *frame);
}

absl::StatusOr<ProtocolMessage> TcpTransport::Receive(absl::Duration timeout) {
  std::unique_lock<std::mutex> lock(mu_);
  cv_.wait_for(lock, absl::ToChronoNanoseconds(timeout),
               [this] { return !inbox_.empty(); });
  if (inbox_.empty()) {
    return absl::DeadlineExceededError(absl::StrFormat(
        "party %d received nothing within %s", self_,
        absl::FormatDuration(timeout)));
  }
  absl::StatusOr<ProtocolMessage> next = std::move(inbox_.front());
  inbox_.pop_front();
  return next;
}

}  // namespace hpca
