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

#ifndef HPSPAKE_TRANSPORT_H_
#define HPSPAKE_TRANSPORT_H_

#include <atomic>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "absl/status/statusor.h"
#include "hpspake/pake.h"
#include "hpspake/wire.h"

namespace hpspake {

struct Endpoint {
  std::string host;
  uint16_t port = 0;
};

// "host:port"; the host may be empty for the loopback address.
absl::StatusOr<Endpoint> ParseEndpoint(std::string_view addr);

// Blocking framed I/O. ReadFrame checks the header before reading the
// payload, so a hostile length never causes more than kMaxPayloadBytes of
// buffering.
absl::Status WriteFrame(int fd, const Frame& frame);
absl::StatusOr<Frame> ReadFrame(int fd);

// First 8 bytes of SHA-256 over the key bytes, as hex.
std::string KeyFingerprint(const BitString& session_key);

struct SessionEvent {
  std::string client_id;
  bool accepted = false;
  std::string fingerprint;  // empty unless accepted
};

// Thread per connection; the ServerConfig is shared read-only.
// A connection may ask for the public parameters (kParams) and then run one
// login. Any failure answers with a single empty reject frame.
class PakeServer {
 public:
  PakeServer(ServerConfig cfg, PublicParams pub,
             std::optional<uint64_t> nonce_seed = std::nullopt);
  ~PakeServer();
  PakeServer(const PakeServer&) = delete;
  PakeServer& operator=(const PakeServer&) = delete;

  // Port 0 picks an ephemeral port; see port().
  absl::Status Listen(const Endpoint& ep);
  uint16_t port() const { return port_; }

  // Accept loop on a background thread.
  void Start();
  // Blocks until Stop() is called from elsewhere.
  void Serve();
  void Stop();

  void set_on_session(std::function<void(const SessionEvent&)> cb) {
    on_session_ = std::move(cb);
  }

 private:
  void HandleConnection(int fd, uint64_t conn);

  ServerConfig cfg_;
  PublicParams pub_;
  std::optional<uint64_t> nonce_seed_;
  std::function<void(const SessionEvent&)> on_session_;
  int listen_fd_ = -1;
  uint16_t port_ = 0;
  std::atomic<bool> stop_{false};
  std::thread acceptor_;
  std::mutex mu_;
  std::vector<std::thread> workers_;
  std::set<int> open_fds_;
  std::atomic<uint64_t> next_conn_{0};
};

absl::StatusOr<PublicParams> FetchPublicParams(const Endpoint& ep);

struct LoginResult {
  BitString session_key;
  std::string fingerprint;
};

// Runs the client side of one login. Returns PermissionDenied on a reject
// frame or a bad confirmation tag.
absl::StatusOr<LoginResult> Login(const Endpoint& ep, const PublicParams& pub,
                                  const std::string& client_id,
                                  uint64_t password, Mode mode, Rng& rng);

}  // namespace hpspake

#endif  // HPSPAKE_TRANSPORT_H_
