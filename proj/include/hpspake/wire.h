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

#ifndef HPSPAKE_WIRE_H_
#define HPSPAKE_WIRE_H_

#include <cstdint>
#include <span>
#include <string>
#include <variant>

#include "absl/status/statusor.h"
#include "hpspake/bytes.h"
#include "hpspake/pake.h"
#include "hpspake/tag_phf.h"

namespace hpspake {

// Frame: version (1) | msg_type (1) | length (4, big-endian) | payload.
enum class MsgType : uint8_t {
  kFlow1 = 1,
  kFlow2 = 2,
  kFlow3 = 3,
  kReject = 4,
  kParams = 5,
};

inline constexpr uint8_t kWireVersion = 1;
inline constexpr size_t kFrameHeaderBytes = 6;
// Upper bound on any payload; larger declared lengths are refused before
// anything is buffered.
inline constexpr uint32_t kMaxPayloadBytes = 1 << 16;

struct Frame {
  MsgType type = MsgType::kReject;
  Bytes payload;
  friend bool operator==(const Frame&, const Frame&) = default;
};

Bytes EncodeFrame(const Frame& frame);
// Validates a 6-byte header and returns the payload length it announces.
absl::StatusOr<uint32_t> ParseFrameHeader(std::span<const uint8_t> header,
                                          MsgType* type);
// Decodes exactly one frame occupying all of `in`.
absl::StatusOr<Frame> DecodeFrame(std::span<const uint8_t> in);

struct RejectMessage {
  friend bool operator==(const RejectMessage&, const RejectMessage&) = default;
};

using FlowMessage = std::variant<Flow1, Flow2, Flow3, RejectMessage>;

// Payload codecs. Elements are fixed-width and range-checked, tags must be
// exactly kappa bits.
Bytes EncodeFlowPayload(const PhfParams& pp, const FlowMessage& msg);
absl::StatusOr<FlowMessage> DecodeFlowPayload(const PhfParams& pp,
                                              MsgType type,
                                              std::span<const uint8_t> payload);

// Whole-frame helpers.
Bytes EncodeFlow(const PhfParams& pp, const FlowMessage& msg);
absl::StatusOr<FlowMessage> DecodeFlow(const PhfParams& pp,
                                       std::span<const uint8_t> frame);

// Everything a client needs: desc(Psi), Theta, the server identity and the
// dictionary size. Never contains theta.
struct PublicParams {
  PhfParams params;
  Projection proj;
  std::string server_id;
  uint64_t dictionary_size = 0;
};

Bytes EncodePhfParams(const PhfParams& pp);
absl::StatusOr<PhfParams> DecodePhfParams(std::span<const uint8_t> in);
Bytes EncodePublicParams(const PublicParams& pub);
absl::StatusOr<PublicParams> DecodePublicParams(std::span<const uint8_t> in);

}  // namespace hpspake

#endif  // HPSPAKE_WIRE_H_
