/*
 * Copyright 2026 The hpspake Authors.
 *
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

#include "hpspake/transport.h"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "hpspake/primitives.h"

namespace hpspake {
namespace {

constexpr int kIoTimeoutSeconds = 30;

absl::Status Errno(const char* what) {
  return absl::UnavailableError(absl::StrCat(what, ": ", std::strerror(errno)));
}

absl::Status ReadExact(int fd, uint8_t* buf, size_t n) {
  size_t off = 0;
  while (off < n) {
    ssize_t r = ::recv(fd, buf + off, n - off, 0);
    if (r == 0) return absl::AbortedError("connection closed");
    if (r < 0) {
      if (errno == EINTR) continue;
      return Errno("recv");
    }
    off += static_cast<size_t>(r);
  }
  return absl::OkStatus();
}

void SetTimeouts(int fd) {
  timeval tv{kIoTimeoutSeconds, 0};
  ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
  ::setsockopt(fd, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof(tv));
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

absl::StatusOr<sockaddr_in> Resolve(const Endpoint& ep) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(ep.port);
  const std::string host = ep.host.empty() ? "127.0.0.1" : ep.host;
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) == 1) return addr;
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  if (::getaddrinfo(host.c_str(), nullptr, &hints, &res) != 0 || !res) {
    return absl::InvalidArgumentError("cannot resolve host " + host);
  }
  addr.sin_addr = reinterpret_cast<sockaddr_in*>(res->ai_addr)->sin_addr;
  ::freeaddrinfo(res);
  return addr;
}

absl::StatusOr<int> Connect(const Endpoint& ep) {
  auto addr = Resolve(ep);
  if (!addr.ok()) return addr.status();
  int fd = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (fd < 0) return Errno("socket");
  if (::connect(fd, reinterpret_cast<const sockaddr*>(&*addr), sizeof(*addr)) !=
      0) {
    absl::Status st = Errno("connect");
    ::close(fd);
    return st;
  }
  SetTimeouts(fd);
  return fd;
}

class FdCloser {
 public:
  explicit FdCloser(int fd) : fd_(fd) {}
  ~FdCloser() { ::close(fd_); }

 private:
  int fd_;
};

Frame RejectFrameValue() { return Frame{MsgType::kReject, {}}; }

}  // namespace

absl::StatusOr<Endpoint> ParseEndpoint(std::string_view addr) {
  const size_t colon = addr.rfind(':');
  if (colon == std::string_view::npos) {
    return absl::InvalidArgumentError("address must be host:port");
  }
  uint32_t port = 0;
  if (!absl::SimpleAtoi(std::string(addr.substr(colon + 1)), &port) || port > 65535) {
    return absl::InvalidArgumentError("bad port in address");
  }
  return Endpoint{std::string(addr.substr(0, colon)),
                  static_cast<uint16_t>(port)};
}

absl::Status WriteFrame(int fd, const Frame& frame) {
  const Bytes data = EncodeFrame(frame);
  size_t off = 0;
  while (off < data.size()) {
    ssize_t n = ::send(fd, data.data() + off, data.size() - off, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      return Errno("send");
    }
    off += static_cast<size_t>(n);
  }
  return absl::OkStatus();
}

absl::StatusOr<Frame> ReadFrame(int fd) {
  uint8_t header[kFrameHeaderBytes];
  if (auto st = ReadExact(fd, header, sizeof(header)); !st.ok()) return st;
  Frame frame;
  auto len = ParseFrameHeader(header, &frame.type);
  if (!len.ok()) return len.status();
  frame.payload.resize(*len);
  if (auto st = ReadExact(fd, frame.payload.data(), *len); !st.ok()) return st;
  return frame;
}

std::string KeyFingerprint(const BitString& session_key) {
  Bytes digest = Sha256(session_key.bytes());
  digest.resize(8);
  return ToHex(digest);
}

// ------------------------------------------------------------- server

PakeServer::PakeServer(ServerConfig cfg, PublicParams pub,
                       std::optional<uint64_t> nonce_seed)
    : cfg_(std::move(cfg)), pub_(std::move(pub)), nonce_seed_(nonce_seed) {}

PakeServer::~PakeServer() { Stop(); }

absl::Status PakeServer::Listen(const Endpoint& ep) {
  auto addr = Resolve(ep);
  if (!addr.ok()) return addr.status();
  int fd = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (fd < 0) return Errno("socket");
  int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  if (::bind(fd, reinterpret_cast<const sockaddr*>(&*addr), sizeof(*addr)) !=
          0 ||
      ::listen(fd, 256) != 0) {
    absl::Status st = Errno("bind/listen");
    ::close(fd);
    return st;
  }
  sockaddr_in bound{};
  socklen_t len = sizeof(bound);
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&bound), &len);
  port_ = ntohs(bound.sin_port);
  listen_fd_ = fd;
  return absl::OkStatus();
}

void PakeServer::Start() {
  acceptor_ = std::thread([this] { Serve(); });
}

void PakeServer::Serve() {
  while (!stop_.load()) {
    pollfd p{listen_fd_, POLLIN, 0};
    int r = ::poll(&p, 1, 100);
    if (r <= 0) continue;
    int fd = ::accept4(listen_fd_, nullptr, nullptr, SOCK_CLOEXEC);
    if (fd < 0) continue;
    SetTimeouts(fd);
    std::lock_guard lock(mu_);
    if (stop_.load()) {
      ::close(fd);
      break;
    }
    open_fds_.insert(fd);
    const uint64_t conn = next_conn_++;
    workers_.emplace_back([this, fd, conn] { HandleConnection(fd, conn); });
  }
}

void PakeServer::Stop() {
  if (stop_.exchange(true)) return;
  if (acceptor_.joinable()) acceptor_.join();
  std::vector<std::thread> workers;
  {
    std::lock_guard lock(mu_);
    for (int fd : open_fds_) ::shutdown(fd, SHUT_RDWR);
    workers.swap(workers_);
  }
  for (auto& t : workers) t.join();
  if (listen_fd_ >= 0) ::close(listen_fd_);
  listen_fd_ = -1;
}

void PakeServer::HandleConnection(int fd, uint64_t conn) {
  Rng rng = nonce_seed_ ? Rng::FromSeed(*nonce_seed_, conn) : Rng::FromOs();
  const PhfParams& pp = cfg_.params;
  SessionEvent event;
  std::optional<SessionState> state;

  while (!stop_.load()) {
    auto frame = ReadFrame(fd);
    if (!frame.ok()) {
      // Framing errors get the opaque reject; closed sockets get nothing.
      if (!absl::IsAborted(frame.status()) &&
          !absl::IsUnavailable(frame.status())) {
        (void)WriteFrame(fd, RejectFrameValue());
      }
      break;
    }
    if (frame->type == MsgType::kParams) {
      if (!frame->payload.empty() ||
          !WriteFrame(fd, Frame{MsgType::kParams, EncodePublicParams(pub_)})
               .ok()) {
        break;
      }
      continue;
    }
    auto msg = DecodeFlowPayload(pp, frame->type, frame->payload);
    if (!msg.ok()) {
      (void)WriteFrame(fd, RejectFrameValue());
      break;
    }
    if (!state) {
      const auto* f1 = std::get_if<Flow1>(&*msg);
      if (f1 == nullptr) {
        (void)WriteFrame(fd, RejectFrameValue());
        break;
      }
      event.client_id = f1->client_id;
      ServerReply reply = ServerOnFlow1(cfg_, *f1, rng);
      if (!reply.flow) {
        (void)WriteFrame(fd, RejectFrameValue());
        break;
      }
      state = std::move(reply.state);
      if (!WriteFrame(fd, Frame{MsgType::kFlow2,
                                EncodeFlowPayload(pp, *reply.flow)})
               .ok()) {
        break;
      }
      continue;
    }
    const auto* f3 = std::get_if<Flow3>(&*msg);
    if (f3 != nullptr && ServerOnFlow3(*state, *f3)) {
      event.accepted = true;
      event.fingerprint = KeyFingerprint(*state->session_key);
    } else {
      (void)WriteFrame(fd, RejectFrameValue());
    }
    break;
  }
  ::shutdown(fd, SHUT_WR);
  {
    std::lock_guard lock(mu_);
    open_fds_.erase(fd);
  }
  ::close(fd);
  if (on_session_ && !event.client_id.empty()) on_session_(event);
}

// ------------------------------------------------------------- client

absl::StatusOr<PublicParams> FetchPublicParams(const Endpoint& ep) {
  auto fd = Connect(ep);
  if (!fd.ok()) return fd.status();
  FdCloser closer(*fd);
  if (auto st = WriteFrame(*fd, Frame{MsgType::kParams, {}}); !st.ok()) {
    return st;
  }
  auto frame = ReadFrame(*fd);
  if (!frame.ok()) return frame.status();
  if (frame->type != MsgType::kParams) {
    return absl::FailedPreconditionError("server refused the parameter request");
  }
  return DecodePublicParams(frame->payload);
}

absl::StatusOr<LoginResult> Login(const Endpoint& ep, const PublicParams& pub,
                                  const std::string& client_id,
                                  uint64_t password, Mode mode, Rng& rng) {
  auto pw = Password::Make(password, pub.dictionary_size);
  if (!pw.ok()) return pw.status();
  auto cfg = MakeClientConfig(pub.params, pub.proj, ClientIdentity{client_id, 0},
                              pub.server_id, *pw, mode);
  if (!cfg.ok()) return cfg.status();
  auto fd = Connect(ep);
  if (!fd.ok()) return fd.status();
  FdCloser closer(*fd);
  const PhfParams& pp = pub.params;

  ClientHello hello = ClientStart(*cfg, rng);
  if (auto st = WriteFrame(*fd, Frame{MsgType::kFlow1,
                                      EncodeFlowPayload(pp, hello.flow)});
      !st.ok()) {
    return st;
  }
  auto frame = ReadFrame(*fd);
  if (!frame.ok()) return frame.status();
  if (frame->type == MsgType::kReject) {
    return absl::PermissionDeniedError("authentication rejected");
  }
  auto msg = DecodeFlowPayload(pp, frame->type, frame->payload);
  if (!msg.ok()) return msg.status();
  const auto* f2 = std::get_if<Flow2>(&*msg);
  if (f2 == nullptr) return absl::InvalidArgumentError("expected Flow2");
  std::optional<Flow3> f3 = ClientOnFlow2(hello.state, *f2);
  if (!f3) return absl::PermissionDeniedError("authentication rejected");
  if (auto st = WriteFrame(*fd, Frame{MsgType::kFlow3, EncodeFlowPayload(pp, *f3)});
      !st.ok()) {
    return st;
  }
  // The server closes quietly on success and answers a reject otherwise.
  auto tail = ReadFrame(*fd);
  if (tail.ok() && tail->type == MsgType::kReject) {
    return absl::PermissionDeniedError("authentication rejected");
  }
  const BitString& sk = *hello.state.session_key;
  return LoginResult{sk, KeyFingerprint(sk)};
}

}  // namespace hpspake
