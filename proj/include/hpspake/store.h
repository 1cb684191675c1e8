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

#ifndef HPSPAKE_STORE_H_
#define HPSPAKE_STORE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "hpspake/pake.h"
#include "hpspake/rng.h"
#include "hpspake/wire.h"

namespace hpspake {

// A store directory holds two files:
//   server.json  mode 0600: parameters, theta, Theta, client records
//   public.json  parameters, Theta, server id, N; what clients receive
inline constexpr char kStoreEnv[] = "HPSPAKE_STORE";
inline constexpr char kServerFile[] = "server.json";
inline constexpr char kPublicFile[] = "public.json";

struct StoredClient {
  std::string id;
  uint64_t password = 0;
  Element g2_pi;  // cached g2^pi
  Bytes salt;
  Bytes verifier;  // SHA-256(salt | id | password)
};

struct ServerStore {
  PublicParams pub;
  PhfSecretKey sk;
  std::vector<StoredClient> clients;

  absl::StatusOr<ServerConfig> ToServerConfig(Mode mode) const;
};

// --store if given, else $HPSPAKE_STORE, else "./hpspake-store".
std::string ResolveStoreDir(const std::optional<std::string>& flag);

// Creates the directory if needed. Refuses to overwrite an existing
// server.json.
absl::Status InitStore(const std::string& dir, const PublicParams& pub,
                       const PhfSecretKey& sk);
absl::StatusOr<ServerStore> LoadServerStore(const std::string& dir);
absl::StatusOr<PublicParams> LoadPublicParams(const std::string& dir);

// Appends one client under an exclusive lock on the store.
absl::Status RegisterClient(const std::string& dir, const std::string& id,
                            uint64_t password, Rng& rng);

Bytes RegistrationVerifier(std::span<const uint8_t> salt, std::string_view id,
                           uint64_t password);

}  // namespace hpspake

#endif  // HPSPAKE_STORE_H_
