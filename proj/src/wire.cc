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

#include "hpspake/wire.h"

namespace hpspake {
namespace {

absl::StatusOr<BitString> DecodeTag(std::span<const uint8_t> field,
                                    size_t kappa) {
  return BitString::FromBytes(field, kappa);
}

absl::Status Exhausted(const FieldReader& fr) {
  if (!fr.done()) return absl::InvalidArgumentError("trailing payload bytes");
  return absl::OkStatus();
}

std::string AsString(std::span<const uint8_t> f) {
  return std::string(f.begin(), f.end());
}

}  // namespace

Bytes EncodeFrame(const Frame& frame) {
  Bytes out;
  out.reserve(kFrameHeaderBytes + frame.payload.size());
  out.push_back(kWireVersion);
  out.push_back(static_cast<uint8_t>(frame.type));
  AppendU32(out, static_cast<uint32_t>(frame.payload.size()));
  out.insert(out.end(), frame.payload.begin(), frame.payload.end());
  return out;
}

absl::StatusOr<uint32_t> ParseFrameHeader(std::span<const uint8_t> header,
                                          MsgType* type) {
  if (header.size() != kFrameHeaderBytes) {
    return absl::InvalidArgumentError("truncated frame header");
  }
  if (header[0] != kWireVersion) {
    return absl::InvalidArgumentError("unsupported wire version");
  }
  if (header[1] < static_cast<uint8_t>(MsgType::kFlow1) ||
      header[1] > static_cast<uint8_t>(MsgType::kParams)) {
    return absl::InvalidArgumentError("unknown message type");
  }
  uint32_t len = ReadU32(header.subspan(2, 4));
  if (len > kMaxPayloadBytes) {
    return absl::InvalidArgumentError("frame exceeds length cap");
  }
  if (type != nullptr) *type = static_cast<MsgType>(header[1]);
  return len;
}

absl::StatusOr<Frame> DecodeFrame(std::span<const uint8_t> in) {
  if (in.size() < kFrameHeaderBytes) {
    return absl::InvalidArgumentError("truncated frame header");
  }
  Frame frame;
  auto len = ParseFrameHeader(in.first(kFrameHeaderBytes), &frame.type);
  if (!len.ok()) return len.status();
  if (in.size() - kFrameHeaderBytes != *len) {
    return absl::InvalidArgumentError("frame length mismatch");
  }
  auto body = in.subspan(kFrameHeaderBytes);
  frame.payload.assign(body.begin(), body.end());
  return frame;
}

Bytes EncodeFlowPayload(const PhfParams& pp, const FlowMessage& msg) {
  FieldWriter fw;
  if (const auto* f1 = std::get_if<Flow1>(&msg)) {
    fw.Add(f1->client_id)
        .Add(EncodeElement(pp.gp, f1->y.u1))
        .Add(EncodeElement(pp.gp, f1->y.u2))
        .Add(f1->tau0.bytes());
  } else if (const auto* f2 = std::get_if<Flow2>(&msg)) {
    fw.Add(f2->server_id).Add(f2->tau1.bytes()).Add(f2->zeta.bytes());
  } else if (const auto* f3 = std::get_if<Flow3>(&msg)) {
    fw.Add(f3->tau2.bytes());
  }
  return std::move(fw).bytes();
}

absl::StatusOr<FlowMessage> DecodeFlowPayload(
    const PhfParams& pp, MsgType type, std::span<const uint8_t> payload) {
  FieldReader fr(payload);
  switch (type) {
    case MsgType::kFlow1: {
      Flow1 f;
      auto id = fr.Next();
      if (!id.ok()) return id.status();
      if (id->empty()) return absl::InvalidArgumentError("empty client id");
      f.client_id = AsString(*id);
      for (Element* e : {&f.y.u1, &f.y.u2}) {
        auto field = fr.Next();
        if (!field.ok()) return field.status();
        auto v = DecodeElement(pp.gp, *field);
        if (!v.ok()) return v.status();
        *e = std::move(*v);
      }
      auto tag = fr.Next();
      if (!tag.ok()) return tag.status();
      auto tau0 = DecodeTag(*tag, pp.kappa);
      if (!tau0.ok()) return tau0.status();
      f.tau0 = std::move(*tau0);
      if (auto st = Exhausted(fr); !st.ok()) return st;
      return f;
    }
    case MsgType::kFlow2: {
      Flow2 f;
      auto id = fr.Next();
      if (!id.ok()) return id.status();
      f.server_id = AsString(*id);
      auto t1 = fr.Next();
      if (!t1.ok()) return t1.status();
      auto tau1 = DecodeTag(*t1, pp.kappa);
      if (!tau1.ok()) return tau1.status();
      auto z = fr.Next();
      if (!z.ok()) return z.status();
      auto zeta = DecodeTag(*z, pp.kappa);
      if (!zeta.ok()) return zeta.status();
      f.tau1 = std::move(*tau1);
      f.zeta = std::move(*zeta);
      if (auto st = Exhausted(fr); !st.ok()) return st;
      return f;
    }
    case MsgType::kFlow3: {
      auto t2 = fr.Next();
      if (!t2.ok()) return t2.status();
      auto tau2 = DecodeTag(*t2, pp.kappa);
      if (!tau2.ok()) return tau2.status();
      if (auto st = Exhausted(fr); !st.ok()) return st;
      return Flow3{std::move(*tau2)};
    }
    case MsgType::kReject:
      if (!payload.empty()) {
        return absl::InvalidArgumentError("reject frame carries a payload");
      }
      return RejectMessage{};
    case MsgType::kParams:
      break;
  }
  return absl::InvalidArgumentError("not a flow message");
}

Bytes EncodeFlow(const PhfParams& pp, const FlowMessage& msg) {
  static constexpr MsgType kTypes[] = {MsgType::kFlow1, MsgType::kFlow2,
                                       MsgType::kFlow3, MsgType::kReject};
  return EncodeFrame(Frame{kTypes[msg.index()], EncodeFlowPayload(pp, msg)});
}

absl::StatusOr<FlowMessage> DecodeFlow(const PhfParams& pp,
                                       std::span<const uint8_t> frame) {
  auto f = DecodeFrame(frame);
  if (!f.ok()) return f.status();
  return DecodeFlowPayload(pp, f->type, f->payload);
}

Bytes EncodePhfParams(const PhfParams& pp) {
  FieldWriter fw;
  fw.Add(SerializeGroupParams(pp.gp))
      .Add(pp.idx.lambda)
      .AddU32(static_cast<uint32_t>(pp.kappa))
      .AddU32(pp.kdf == KdfMode::kHash ? 1 : 0);
  return std::move(fw).bytes();
}

absl::StatusOr<PhfParams> DecodePhfParams(std::span<const uint8_t> in) {
  FieldReader fr(in);
  auto g = fr.Next();
  if (!g.ok()) return g.status();
  auto gp = ParseGroupParams(*g);
  if (!gp.ok()) return gp.status();
  auto lambda = fr.Next();
  if (!lambda.ok()) return lambda.status();
  auto kappa = fr.NextU32();
  if (!kappa.ok()) return kappa.status();
  auto kdf = fr.NextU32();
  if (!kdf.ok()) return kdf.status();
  if (*kappa == 0 || *kappa > 256 || *kappa % 8 != 0 || *kdf > 1) {
    return absl::InvalidArgumentError("bad kappa or kdf mode");
  }
  if (lambda->size() != *kappa / 8) {
    return absl::InvalidArgumentError("hash index must be kappa bits");
  }
  if (auto st = Exhausted(fr); !st.ok()) return st;
  return PhfParams{*gp, HashIndex{Bytes(lambda->begin(), lambda->end())},
                   *kappa, *kdf == 1 ? KdfMode::kHash : KdfMode::kLeastBits};
}

Bytes EncodePublicParams(const PublicParams& pub) {
  FieldWriter fw;
  fw.Add(EncodePhfParams(pub.params))
      .Add(SerializeProjection(pub.params, pub.proj))
      .Add(pub.server_id);
  Bytes n;
  for (int shift = 56; shift >= 0; shift -= 8) {
    n.push_back(static_cast<uint8_t>(pub.dictionary_size >> shift));
  }
  fw.Add(n);
  return std::move(fw).bytes();
}

absl::StatusOr<PublicParams> DecodePublicParams(std::span<const uint8_t> in) {
  FieldReader fr(in);
  auto pp_field = fr.Next();
  if (!pp_field.ok()) return pp_field.status();
  auto pp = DecodePhfParams(*pp_field);
  if (!pp.ok()) return pp.status();
  auto proj_field = fr.Next();
  if (!proj_field.ok()) return proj_field.status();
  auto proj = ParseProjection(*pp, *proj_field);
  if (!proj.ok()) return proj.status();
  auto sid = fr.Next();
  if (!sid.ok()) return sid.status();
  auto n = fr.Next();
  if (!n.ok()) return n.status();
  if (n->size() != 8) return absl::InvalidArgumentError("bad dictionary size");
  uint64_t dict = 0;
  for (uint8_t b : *n) dict = (dict << 8) | b;
  if (auto st = Exhausted(fr); !st.ok()) return st;
  return PublicParams{std::move(*pp), std::move(*proj), AsString(*sid), dict};
}

}  // namespace hpspake
