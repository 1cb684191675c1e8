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

#include "hpspake/transcript.h"

#include "json.hpp"

namespace hpspake {

absl::StatusOr<GoldenTranscript> MakeGoldenTranscript(uint64_t seed,
                                                      Mode mode) {
  auto pp = MakeToyParams(kGoldenBits, seed);
  if (!pp.ok()) return pp.status();
  Rng rng = Rng::FromSeed(seed, 0x676f6c64);
  auto [sk, proj] = Keygen(*pp, rng);
  const uint64_t password = 1 + rng.UniformBelow(kGoldenDictionary);
  auto pw = Password::Make(password, kGoldenDictionary);
  if (!pw.ok()) return pw.status();
  ClientIdentity id{"alice", 1};
  const std::string server_id = "S";

  auto client = MakeClientConfig(*pp, proj, id, server_id, *pw, mode);
  if (!client.ok()) return client.status();
  ServerConfig server{*pp, sk, proj, server_id, mode,
                      std::make_shared<PasswordTable>()};
  if (auto st = server.table->Register(pp->gp, id, *pw); !st.ok()) return st;

  const Witness w{rng.UniformBelow(pp->gp.q)};
  const BitString zeta = rng.NextBits(pp->kappa);
  ClientHello hello = ClientStartWithWitness(*client, w);
  ServerReply reply = ServerOnFlow1WithNonce(server, hello.flow, zeta);
  if (!reply.flow) return absl::InternalError("honest Flow1 rejected");
  std::optional<Flow3> f3 = ClientOnFlow2(hello.state, *reply.flow);
  if (!f3 || !ServerOnFlow3(reply.state, *f3)) {
    return absl::InternalError("honest run did not complete");
  }

  GoldenTranscript out;
  out.seed = seed;
  out.bits = kGoldenBits;
  out.mode = mode;
  out.client_id = id.id;
  out.password = password;
  out.public_params =
      EncodePublicParams(PublicParams{*pp, proj, server_id, kGoldenDictionary});
  out.flow1 = EncodeFlow(*pp, hello.flow);
  out.flow2 = EncodeFlow(*pp, *reply.flow);
  out.flow3 = EncodeFlow(*pp, *f3);
  out.session_key = hello.state.session_key->bytes();
  return out;
}

std::string GoldenTranscript::ToJson() const {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["bits"] = bits;
  j["mode"] = ModeName(mode);
  j["client_id"] = client_id;
  j["password"] = password;
  j["public_params"] = ToHex(public_params);
  j["flow1"] = ToHex(flow1);
  j["flow2"] = ToHex(flow2);
  j["flow3"] = ToHex(flow3);
  j["session_key"] = ToHex(session_key);
  return j.dump(2) + "\n";
}

absl::StatusOr<GoldenTranscript> GoldenTranscript::FromJson(
    std::string_view text) {
  auto j = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    return absl::InvalidArgumentError("fixture is not a JSON object");
  }
  GoldenTranscript t;
  try {
    t.seed = j.at("seed").get<uint64_t>();
    t.bits = j.at("bits").get<int>();
    auto mode = ParseMode(j.at("mode").get<std::string>());
    if (!mode.ok()) return mode.status();
    t.mode = *mode;
    t.client_id = j.at("client_id").get<std::string>();
    t.password = j.at("password").get<uint64_t>();
    for (auto [key, dst] :
         {std::pair{"public_params", &t.public_params},
          std::pair{"flow1", &t.flow1}, std::pair{"flow2", &t.flow2},
          std::pair{"flow3", &t.flow3},
          std::pair{"session_key", &t.session_key}}) {
      auto bytes = FromHex(j.at(key).get<std::string>());
      if (!bytes.ok()) return bytes.status();
      *dst = std::move(*bytes);
    }
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(std::string("fixture: ") + e.what());
  }
  return t;
}

}  // namespace hpspake
