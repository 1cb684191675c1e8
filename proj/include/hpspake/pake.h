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

#ifndef HPSPAKE_PAKE_H_
#define HPSPAKE_PAKE_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>

#include "absl/status/statusor.h"
#include "hpspake/bytes.h"
#include "hpspake/group.h"
#include "hpspake/primitives.h"
#include "hpspake/rng.h"
#include "hpspake/tag_phf.h"

namespace hpspake {

// kBase sends y and the server checks y in G^2 (two membership checks).
// kSquareTrick sends y' = sqrt(y); the server squares, which lands in G for
// free.
enum class Mode { kBase, kSquareTrick };

enum class Role { kClient, kServer };

enum class Phase { kInit, kAwaitingFlow2, kAwaitingFlow3, kAccepted, kRejected };

// Recorded for tests and the harness only; never put on the wire.
enum class RejectReason {
  kNone,
  kUnknownClient,
  kNotInGroup,
  kBadMac,
  kWrongPhase,
  kWrongPeer,
  kMalformed,
};

const char* ModeName(Mode mode);
absl::StatusOr<Mode> ParseMode(std::string_view name);

// A password from the dictionary {1, ..., N}.
class Password {
 public:
  static absl::StatusOr<Password> Make(uint64_t value,
                                       uint64_t dictionary_size);
  uint64_t value() const { return value_; }
  uint64_t dictionary_size() const { return dictionary_size_; }

 private:
  Password(uint64_t v, uint64_t n) : value_(v), dictionary_size_(n) {}
  uint64_t value_;
  uint64_t dictionary_size_;
};

struct ClientIdentity {
  std::string id;
  uint32_t index = 0;
};

// T(pi, (u1, u2)) = (u1, u2 g2^pi) and its inverse.
Pair Transform(const GroupParams& gp, const Password& pi, const Pair& x);
Pair Untransform(const GroupParams& gp, const Password& pi, const Pair& y);

// g2^pi and g2^-pi, computed once per registered password.
struct PasswordElements {
  Element g2_pi;
  Element g2_neg_pi;
};
PasswordElements ComputePasswordElements(const GroupParams& gp,
                                         const Password& pi);

struct Flow1 {
  std::string client_id;
  Pair y;  // y' = sqrt(y) componentwise in square-trick mode
  BitString tau0;
  friend bool operator==(const Flow1&, const Flow1&) = default;
};

struct Flow2 {
  std::string server_id;
  BitString tau1;
  BitString zeta;
  friend bool operator==(const Flow2&, const Flow2&) = default;
};

struct Flow3 {
  BitString tau2;
  friend bool operator==(const Flow3&, const Flow3&) = default;
};

struct SessionState {
  Role role = Role::kClient;
  Phase phase = Phase::kInit;
  Mode mode = Mode::kSquareTrick;
  std::string client_id;
  std::string server_id;
  Pair y;  // always the squared y, whatever went on the wire
  std::optional<BitString> zeta;
  KeyMaterial keys;
  std::optional<BitString> session_key;
  Bytes stat;
  Bytes sid;  // C_i | S | y | zeta once zeta is known
  Bytes mac_prefix;  // C_i | S | y, the tau0 input
  RejectReason reject_reason = RejectReason::kNone;

  // The peer's identity.
  const std::string& pid() const {
    return role == Role::kClient ? server_id : client_id;
  }
  bool accepted() const { return phase == Phase::kAccepted; }
};

// MAC inputs. Every composite is length-prefixed; the trailing zeta and
// counter fields keep the three tag inputs distinct.
Bytes Flow1MacInput(const GroupParams& gp, std::string_view client_id,
                    std::string_view server_id, const Pair& y);
Bytes SessionId(const GroupParams& gp, std::string_view client_id,
                std::string_view server_id, const Pair& y,
                const BitString& zeta);
Bytes ConfirmationMacInput(const Bytes& omega, uint8_t which);

struct ClientConfig {
  PhfParams params;
  Projection proj;
  ClientIdentity identity;
  std::string server_id;
  Password password;
  PasswordElements pw;
  Mode mode = Mode::kSquareTrick;
};

// Fails unless the dictionary size N is below q.
absl::StatusOr<ClientConfig> MakeClientConfig(PhfParams params,
                                              Projection proj,
                                              ClientIdentity identity,
                                              std::string server_id,
                                              Password password, Mode mode);

struct ClientHello {
  SessionState state;
  Flow1 flow;
};

ClientHello ClientStart(const ClientConfig& cfg, Rng& rng);
// Deterministic variant: the caller fixes the witness r.
ClientHello ClientStartWithWitness(const ClientConfig& cfg, const Witness& w);

// On success: emits tau2, sets sk = k1 and accepts. On a wrong phase the
// message is refused and the state is left unchanged.
std::optional<Flow3> ClientOnFlow2(SessionState& st, const Flow2& msg);

struct ClientRecord {
  ClientIdentity identity;
  Password password;
  PasswordElements pw;
};

// The server's password table. Lookups share a read lock; registration
// takes the write lock.
class PasswordTable {
 public:
  PasswordTable() = default;
  absl::Status Register(const GroupParams& gp, ClientIdentity identity,
                        Password password);
  std::optional<ClientRecord> Lookup(std::string_view id) const;
  size_t size() const;

 private:
  mutable std::shared_mutex mu_;
  std::map<std::string, ClientRecord, std::less<>> records_;
};

struct ServerConfig {
  PhfParams params;
  PhfSecretKey sk;
  Projection proj;
  std::string server_id;
  Mode mode = Mode::kSquareTrick;
  std::shared_ptr<PasswordTable> table;
};

struct ServerReply {
  SessionState state;
  std::optional<Flow2> flow;  // nullopt: reject
};

ServerReply ServerOnFlow1(const ServerConfig& cfg, const Flow1& msg,
                          Rng& rng);
ServerReply ServerOnFlow1WithNonce(const ServerConfig& cfg, const Flow1& msg,
                                   const BitString& zeta);

// Returns true iff the state moved to accepted.
bool ServerOnFlow3(SessionState& st, const Flow3& msg);

// pids cross-match and both sids are set and equal.
bool Partnered(const SessionState& a, const SessionState& b);

}  // namespace hpspake

#endif  // HPSPAKE_PAKE_H_
