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

#ifndef HPSPAKE_TRANSCRIPT_H_
#define HPSPAKE_TRANSCRIPT_H_

#include <cstdint>
#include <string>

#include "absl/status/statusor.h"
#include "hpspake/pake.h"
#include "hpspake/wire.h"

namespace hpspake {

// One honest run on the toy profile with every random choice derived from
// `seed`. Used to produce and check the conformance fixtures.
struct GoldenTranscript {
  uint64_t seed = 0;
  int bits = 0;
  Mode mode = Mode::kSquareTrick;
  std::string client_id;
  uint64_t password = 0;
  Bytes public_params;  // EncodePublicParams
  Bytes flow1;          // whole frames
  Bytes flow2;
  Bytes flow3;
  Bytes session_key;

  std::string ToJson() const;
  static absl::StatusOr<GoldenTranscript> FromJson(std::string_view text);
  friend bool operator==(const GoldenTranscript&,
                         const GoldenTranscript&) = default;
};

inline constexpr int kGoldenBits = 16;
inline constexpr uint64_t kGoldenDictionary = 16;

absl::StatusOr<GoldenTranscript> MakeGoldenTranscript(uint64_t seed, Mode mode);

}  // namespace hpspake

#endif  // HPSPAKE_TRANSCRIPT_H_
