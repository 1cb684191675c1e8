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

#include "hpspake/store.h"

#include <fcntl.h>
#include <sys/file.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "hpspake/primitives.h"
#include "json.hpp"

namespace hpspake {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

absl::Status ErrnoStatus(const char* what, const std::string& path) {
  return absl::InternalError(
      absl::StrCat(what, " ", path, ": ", std::strerror(errno)));
}

// Writes through a temporary file and renames it into place.
absl::Status WriteFileAtomic(const std::string& path, const std::string& data,
                             mode_t mode) {
  const std::string tmp = path + ".tmp";
  int fd = ::open(tmp.c_str(), O_CREAT | O_WRONLY | O_TRUNC | O_CLOEXEC, mode);
  if (fd < 0) return ErrnoStatus("open", tmp);
  if (::fchmod(fd, mode) != 0) {
    ::close(fd);
    return ErrnoStatus("chmod", tmp);
  }
  size_t off = 0;
  while (off < data.size()) {
    ssize_t n = ::write(fd, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      ::close(fd);
      return ErrnoStatus("write", tmp);
    }
    off += static_cast<size_t>(n);
  }
  if (::fsync(fd) != 0 || ::close(fd) != 0) return ErrnoStatus("sync", tmp);
  if (::rename(tmp.c_str(), path.c_str()) != 0) {
    return ErrnoStatus("rename", path);
  }
  return absl::OkStatus();
}

absl::StatusOr<json> ReadJson(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot read ", path));
  json j = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) {
    return absl::InvalidArgumentError(absl::StrCat("malformed JSON in ", path));
  }
  return j;
}

absl::StatusOr<Bytes> HexField(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) {
    return absl::InvalidArgumentError(absl::StrCat("missing field ", key));
  }
  return FromHex(j[key].get<std::string>());
}

json PublicJson(const PublicParams& pub) {
  json j;
  j["version"] = 1;
  j["params"] = ToHex(EncodePhfParams(pub.params));
  j["projection"] = ToHex(SerializeProjection(pub.params, pub.proj));
  j["server_id"] = pub.server_id;
  j["dictionary_size"] = pub.dictionary_size;
  return j;
}

absl::StatusOr<PublicParams> PublicFromJson(const json& j) {
  auto params_hex = HexField(j, "params");
  if (!params_hex.ok()) return params_hex.status();
  auto pp = DecodePhfParams(*params_hex);
  if (!pp.ok()) return pp.status();
  auto proj_hex = HexField(j, "projection");
  if (!proj_hex.ok()) return proj_hex.status();
  auto proj = ParseProjection(*pp, *proj_hex);
  if (!proj.ok()) return proj.status();
  if (!j.contains("server_id") || !j["server_id"].is_string() ||
      !j.contains("dictionary_size") ||
      !j["dictionary_size"].is_number_unsigned()) {
    return absl::InvalidArgumentError("missing server_id or dictionary_size");
  }
  return PublicParams{std::move(*pp), std::move(*proj),
                      j["server_id"].get<std::string>(),
                      j["dictionary_size"].get<uint64_t>()};
}

json ServerJson(const ServerStore& store) {
  json j = PublicJson(store.pub);
  j["secret_key"] = ToHex(SerializeSecretKey(store.pub.params, store.sk));
  json clients = json::array();
  for (const StoredClient& c : store.clients) {
    clients.push_back({{"id", c.id},
                       {"password", c.password},
                       {"g2_pi", ToHex(EncodeElement(store.pub.params.gp, c.g2_pi))},
                       {"salt", ToHex(c.salt)},
                       {"verifier", ToHex(c.verifier)}});
  }
  j["clients"] = std::move(clients);
  return j;
}

absl::StatusOr<ServerStore> ServerFromJson(const json& j) {
  ServerStore store;
  auto pub = PublicFromJson(j);
  if (!pub.ok()) return pub.status();
  store.pub = std::move(*pub);
  auto sk_hex = HexField(j, "secret_key");
  if (!sk_hex.ok()) return sk_hex.status();
  auto sk = ParseSecretKey(store.pub.params, *sk_hex);
  if (!sk.ok()) return sk.status();
  store.sk = std::move(*sk);
  if (!(Project(store.pub.params, store.sk) == store.pub.proj)) {
    return absl::DataLossError("stored projection does not match theta");
  }
  if (!j.contains("clients") || !j["clients"].is_array()) {
    return absl::InvalidArgumentError("missing clients array");
  }
  const GroupParams& gp = store.pub.params.gp;
  for (const json& c : j["clients"]) {
    StoredClient rec;
    if (!c.contains("id") || !c["id"].is_string() || !c.contains("password") ||
        !c["password"].is_number_unsigned()) {
      return absl::InvalidArgumentError("malformed client record");
    }
    rec.id = c["id"].get<std::string>();
    rec.password = c["password"].get<uint64_t>();
    auto g2 = HexField(c, "g2_pi");
    auto salt = HexField(c, "salt");
    auto verifier = HexField(c, "verifier");
    if (!g2.ok() || !salt.ok() || !verifier.ok()) {
      return absl::InvalidArgumentError("malformed client record " + rec.id);
    }
    auto g2_pi = DecodeElement(gp, *g2);
    if (!g2_pi.ok()) return g2_pi.status();
    rec.g2_pi = std::move(*g2_pi);
    rec.salt = std::move(*salt);
    rec.verifier = std::move(*verifier);
    if (RegistrationVerifier(rec.salt, rec.id, rec.password) != rec.verifier) {
      return absl::DataLossError("verifier mismatch for client " + rec.id);
    }
    store.clients.push_back(std::move(rec));
  }
  return store;
}

class StoreLock {
 public:
  explicit StoreLock(const std::string& dir) {
    const std::string path = (fs::path(dir) / ".lock").string();
    fd_ = ::open(path.c_str(), O_CREAT | O_RDWR | O_CLOEXEC, 0600);
    if (fd_ >= 0 && ::flock(fd_, LOCK_EX) != 0) {
      ::close(fd_);
      fd_ = -1;
    }
  }
  ~StoreLock() {
    if (fd_ >= 0) {
      ::flock(fd_, LOCK_UN);
      ::close(fd_);
    }
  }
  bool ok() const { return fd_ >= 0; }

 private:
  int fd_ = -1;
};

}  // namespace

Bytes RegistrationVerifier(std::span<const uint8_t> salt, std::string_view id,
                           uint64_t password) {
  FieldWriter fw;
  fw.Add(salt).Add(id).Add(std::to_string(password));
  return Sha256(fw.bytes());
}

absl::StatusOr<ServerConfig> ServerStore::ToServerConfig(Mode mode) const {
  auto table = std::make_shared<PasswordTable>();
  uint32_t index = 0;
  for (const StoredClient& c : clients) {
    auto pw = Password::Make(c.password, pub.dictionary_size);
    if (!pw.ok()) return pw.status();
    if (ComputePasswordElements(pub.params.gp, *pw).g2_pi != c.g2_pi) {
      return absl::DataLossError("stale g2^pi cache for client " + c.id);
    }
    auto st = table->Register(pub.params.gp, ClientIdentity{c.id, ++index}, *pw);
    if (!st.ok()) return st;
  }
  return ServerConfig{pub.params, sk, pub.proj, pub.server_id, mode,
                      std::move(table)};
}

std::string ResolveStoreDir(const std::optional<std::string>& flag) {
  if (flag && !flag->empty()) return *flag;
  if (const char* env = std::getenv(kStoreEnv); env != nullptr && *env) {
    return env;
  }
  return "./hpspake-store";
}

absl::Status InitStore(const std::string& dir, const PublicParams& pub,
                       const PhfSecretKey& sk) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) return absl::InternalError("cannot create " + dir + ": " + ec.message());
  StoreLock lock(dir);
  if (!lock.ok()) return ErrnoStatus("lock", dir);
  const std::string server_path = (fs::path(dir) / kServerFile).string();
  if (fs::exists(server_path)) {
    return absl::AlreadyExistsError(server_path + " already exists");
  }
  ServerStore store{pub, sk, {}};
  if (auto st = WriteFileAtomic(server_path, ServerJson(store).dump(2), 0600);
      !st.ok()) {
    return st;
  }
  return WriteFileAtomic((fs::path(dir) / kPublicFile).string(),
                         PublicJson(pub).dump(2), 0644);
}

absl::StatusOr<ServerStore> LoadServerStore(const std::string& dir) {
  auto j = ReadJson((fs::path(dir) / kServerFile).string());
  if (!j.ok()) return j.status();
  return ServerFromJson(*j);
}

absl::StatusOr<PublicParams> LoadPublicParams(const std::string& dir) {
  auto j = ReadJson((fs::path(dir) / kPublicFile).string());
  if (!j.ok()) return j.status();
  return PublicFromJson(*j);
}

absl::Status RegisterClient(const std::string& dir, const std::string& id,
                            uint64_t password, Rng& rng) {
  if (id.empty()) return absl::InvalidArgumentError("empty client id");
  StoreLock lock(dir);
  if (!lock.ok()) return ErrnoStatus("lock", dir);
  auto store = LoadServerStore(dir);
  if (!store.ok()) return store.status();
  auto pw = Password::Make(password, store->pub.dictionary_size);
  if (!pw.ok()) return pw.status();
  for (const StoredClient& c : store->clients) {
    if (c.id == id) return absl::AlreadyExistsError("client already registered: " + id);
  }
  StoredClient rec;
  rec.id = id;
  rec.password = password;
  rec.g2_pi = ComputePasswordElements(store->pub.params.gp, *pw).g2_pi;
  rec.salt = rng.NextBytes(16);
  rec.verifier = RegistrationVerifier(rec.salt, id, password);
  store->clients.push_back(std::move(rec));
  return WriteFileAtomic((fs::path(dir) / kServerFile).string(),
                         ServerJson(*store).dump(2), 0600);
}

}  // namespace hpspake
