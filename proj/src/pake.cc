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

#include "hpspake/pake.h"

#include <openssl/crypto.h>

#include <mutex>

namespace hpspake {
namespace {

bool TagsEqual(const BitString& a, const BitString& b) {
  return a.size() == b.size() &&
         CRYPTO_memcmp(a.bytes().data(), b.bytes().data(), a.bytes().size()) ==
             0;
}

Bytes SecretStat(const SessionState& st, bool with_zeta) {
  Bytes out = st.mac_prefix;  // C | S | u1 | u2
  if (with_zeta && st.zeta) {
    FieldWriter z;
    z.Add(st.zeta->bytes());
    out.insert(out.end(), z.bytes().begin(), z.bytes().end());
  }
  FieldWriter keys;
  keys.Add(st.keys.k0.bytes()).Add(st.keys.k1.bytes());
  out.insert(out.end(), keys.bytes().begin(), keys.bytes().end());
  return out;
}

Bytes AcceptedStat(const SessionState& st) {
  FieldWriter fw;
  fw.Add(st.client_id).Add(st.server_id).Add(st.session_key->bytes());
  return std::move(fw).bytes();
}

void Reject(SessionState& st, RejectReason why) {
  st.phase = Phase::kRejected;
  st.reject_reason = why;
  st.session_key.reset();
  st.keys = KeyMaterial{};
  st.stat.clear();
}

Bytes OmegaFor(const SessionState& st, const BitString& zeta) {
  Bytes omega = st.mac_prefix;
  FieldWriter z;
  z.Add(zeta.bytes());
  omega.insert(omega.end(), z.bytes().begin(), z.bytes().end());
  return omega;
}

}  // namespace

const char* ModeName(Mode mode) {
  return mode == Mode::kBase ? "base" : "square";
}

absl::StatusOr<Mode> ParseMode(std::string_view name) {
  if (name == "base") return Mode::kBase;
  if (name == "square" || name == "square-trick") return Mode::kSquareTrick;
  return absl::InvalidArgumentError("mode must be 'base' or 'square'");
}

absl::StatusOr<Password> Password::Make(uint64_t value,
                                        uint64_t dictionary_size) {
  if (dictionary_size == 0) {
    return absl::InvalidArgumentError("dictionary must be non-empty");
  }
  if (value < 1 || value > dictionary_size) {
    return absl::InvalidArgumentError("password outside {1, ..., N}");
  }
  return Password(value, dictionary_size);
}

Pair Transform(const GroupParams& gp, const Password& pi, const Pair& x) {
  return Pair{x.u1, MulMod(gp, x.u2, PowMod(gp, gp.g2, mpz_class(pi.value())))};
}

Pair Untransform(const GroupParams& gp, const Password& pi, const Pair& y) {
  Element g2_pi = PowMod(gp, gp.g2, mpz_class(pi.value()));
  return Pair{y.u1, MulMod(gp, y.u2, InvMod(gp, g2_pi))};
}

PasswordElements ComputePasswordElements(const GroupParams& gp,
                                         const Password& pi) {
  Element g2_pi = PowMod(gp, gp.g2, mpz_class(pi.value()));
  return PasswordElements{g2_pi, InvMod(gp, g2_pi)};
}

Bytes Flow1MacInput(const GroupParams& gp, std::string_view client_id,
                    std::string_view server_id, const Pair& y) {
  FieldWriter fw;
  fw.Add(client_id)
      .Add(server_id)
      .Add(EncodeElement(gp, y.u1))
      .Add(EncodeElement(gp, y.u2));
  return std::move(fw).bytes();
}

Bytes SessionId(const GroupParams& gp, std::string_view client_id,
                std::string_view server_id, const Pair& y,
                const BitString& zeta) {
  Bytes out = Flow1MacInput(gp, client_id, server_id, y);
  FieldWriter z;
  z.Add(zeta.bytes());
  out.insert(out.end(), z.bytes().begin(), z.bytes().end());
  return out;
}

Bytes ConfirmationMacInput(const Bytes& omega, uint8_t which) {
  Bytes out = omega;
  FieldWriter fw;
  const uint8_t tag[1] = {which};
  fw.Add(tag);
  out.insert(out.end(), fw.bytes().begin(), fw.bytes().end());
  return out;
}

absl::StatusOr<ClientConfig> MakeClientConfig(PhfParams params,
                                              Projection proj,
                                              ClientIdentity identity,
                                              std::string server_id,
                                              Password password, Mode mode) {
  if (mpz_class(password.dictionary_size()) >= params.gp.q) {
    return absl::InvalidArgumentError("dictionary size must be below q");
  }
  PasswordElements pw = ComputePasswordElements(params.gp, password);
  return ClientConfig{std::move(params), std::move(proj), std::move(identity),
                      std::move(server_id), password, std::move(pw), mode};
}

ClientHello ClientStart(const ClientConfig& cfg, Rng& rng) {
  return ClientStartWithWitness(cfg, Witness{rng.UniformBelow(cfg.params.gp.q)});
}

ClientHello ClientStartWithWitness(const ClientConfig& cfg, const Witness& w) {
  const GroupParams& gp = cfg.params.gp;
  const mpz_class r_plus_pi = (w.r + cfg.password.value()) % gp.q;
  Pair sent;
  Pair y;
  if (cfg.mode == Mode::kBase) {
    y = Pair{PowMod(gp, gp.g1, w.r), PowMod(gp, gp.g2, r_plus_pi)};
    sent = y;
  } else {
    // Exponents halved mod q: (q+1)/2 is the inverse of 2.
    const mpz_class inv2 = (gp.q + 1) / 2;
    sent = Pair{PowMod(gp, gp.g1, mpz_class(w.r * inv2 % gp.q)),
                PowMod(gp, gp.g2, mpz_class(r_plus_pi * inv2 % gp.q))};
    y = SquarePair(gp, sent);
  }
  Pair x{y.u1, MulMod(gp, y.u2, cfg.pw.g2_neg_pi)};
  const std::string& id = cfg.identity.id;

  ClientHello out;
  SessionState& st = out.state;
  st.role = Role::kClient;
  st.mode = cfg.mode;
  st.client_id = id;
  st.server_id = cfg.server_id;
  st.y = y;
  st.keys = HashPublicUnchecked(cfg.params, cfg.proj, ToBytes(id), x, w);
  st.mac_prefix = Flow1MacInput(gp, id, cfg.server_id, y);
  st.stat = SecretStat(st, /*with_zeta=*/false);
  st.phase = Phase::kAwaitingFlow2;

  out.flow = Flow1{id, sent, Mac(st.keys.k0, st.mac_prefix, cfg.params.kappa)};
  return out;
}

std::optional<Flow3> ClientOnFlow2(SessionState& st, const Flow2& msg) {
  if (st.role != Role::kClient || st.phase != Phase::kAwaitingFlow2) {
    return std::nullopt;
  }
  const size_t kappa = st.keys.k0.size();
  if (msg.server_id != st.server_id) {
    Reject(st, RejectReason::kWrongPeer);
    return std::nullopt;
  }
  if (msg.zeta.size() != kappa) {
    Reject(st, RejectReason::kMalformed);
    return std::nullopt;
  }
  Bytes omega = OmegaFor(st, msg.zeta);
  BitString expect = Mac(st.keys.k0, ConfirmationMacInput(omega, 1), kappa);
  if (!TagsEqual(expect, msg.tau1)) {
    Reject(st, RejectReason::kBadMac);
    return std::nullopt;
  }
  Flow3 reply{Mac(st.keys.k0, ConfirmationMacInput(omega, 2), kappa)};
  st.zeta = msg.zeta;
  st.sid = std::move(omega);
  st.session_key = st.keys.k1;
  st.stat = AcceptedStat(st);
  st.phase = Phase::kAccepted;
  return reply;
}

absl::Status PasswordTable::Register(const GroupParams& gp,
                                     ClientIdentity identity,
                                     Password password) {
  if (mpz_class(password.dictionary_size()) >= gp.q) {
    return absl::InvalidArgumentError("dictionary size must be below q");
  }
  PasswordElements pw = ComputePasswordElements(gp, password);
  std::unique_lock lock(mu_);
  if (records_.contains(identity.id)) {
    return absl::AlreadyExistsError("client already registered: " +
                                    identity.id);
  }
  std::string key = identity.id;
  records_.emplace(std::move(key),
                   ClientRecord{std::move(identity), password, std::move(pw)});
  return absl::OkStatus();
}

std::optional<ClientRecord> PasswordTable::Lookup(std::string_view id) const {
  std::shared_lock lock(mu_);
  auto it = records_.find(id);
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

size_t PasswordTable::size() const {
  std::shared_lock lock(mu_);
  return records_.size();
}

ServerReply ServerOnFlow1(const ServerConfig& cfg, const Flow1& msg,
                          Rng& rng) {
  return ServerOnFlow1WithNonce(cfg, msg, rng.NextBits(cfg.params.kappa));
}

ServerReply ServerOnFlow1WithNonce(const ServerConfig& cfg, const Flow1& msg,
                                   const BitString& zeta) {
  const GroupParams& gp = cfg.params.gp;
  const size_t kappa = cfg.params.kappa;
  ServerReply out;
  SessionState& st = out.state;
  st.role = Role::kServer;
  st.mode = cfg.mode;
  st.client_id = msg.client_id;
  st.server_id = cfg.server_id;

  std::optional<ClientRecord> rec = cfg.table->Lookup(msg.client_id);
  if (!rec) {
    Reject(st, RejectReason::kUnknownClient);
    return out;
  }
  if (!InZpStar(gp, msg.y.u1) || !InZpStar(gp, msg.y.u2) ||
      msg.tau0.size() != kappa) {
    Reject(st, RejectReason::kMalformed);
    return out;
  }
  if (cfg.mode == Mode::kBase) {
    if (!InSubgroup(gp, msg.y.u1) || !InSubgroup(gp, msg.y.u2)) {
      Reject(st, RejectReason::kNotInGroup);
      return out;
    }
    st.y = msg.y;
  } else {
    st.y = SquarePair(gp, msg.y);
  }
  Pair x{st.y.u1, MulMod(gp, st.y.u2, rec->pw.g2_neg_pi)};
  st.keys = HashPrivate(cfg.params, cfg.sk, ToBytes(msg.client_id), x);
  st.mac_prefix = Flow1MacInput(gp, msg.client_id, cfg.server_id, st.y);

  if (!TagsEqual(Mac(st.keys.k0, st.mac_prefix, kappa), msg.tau0)) {
    Reject(st, RejectReason::kBadMac);
    return out;
  }
  Bytes omega = OmegaFor(st, zeta);
  out.flow = Flow2{cfg.server_id,
                   Mac(st.keys.k0, ConfirmationMacInput(omega, 1), kappa),
                   zeta};
  st.zeta = zeta;
  st.sid = std::move(omega);
  st.stat = SecretStat(st, /*with_zeta=*/true);
  st.phase = Phase::kAwaitingFlow3;
  return out;
}

bool ServerOnFlow3(SessionState& st, const Flow3& msg) {
  if (st.role != Role::kServer || st.phase != Phase::kAwaitingFlow3) {
    return false;
  }
  const size_t kappa = st.keys.k0.size();
  BitString expect = Mac(st.keys.k0, ConfirmationMacInput(st.sid, 2), kappa);
  if (!TagsEqual(expect, msg.tau2)) {
    Reject(st, RejectReason::kBadMac);
    return false;
  }
  st.session_key = st.keys.k1;
  st.stat = AcceptedStat(st);
  st.phase = Phase::kAccepted;
  return true;
}

bool Partnered(const SessionState& a, const SessionState& b) {
  if (a.role == b.role) return false;
  if (a.sid.empty() || b.sid.empty()) return false;
  return a.client_id == b.client_id && a.server_id == b.server_id &&
         a.sid == b.sid;
}

}  // namespace hpspake
