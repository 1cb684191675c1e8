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

#include "hpspake/bytes.h"

#include <algorithm>
#include <stdexcept>

#include "absl/status/status.h"

namespace hpspake {

std::string ToHex(std::span<const uint8_t> data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (uint8_t b : data) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

absl::StatusOr<Bytes> FromHex(std::string_view hex) {
  if (hex.size() % 2 != 0) {
    return absl::InvalidArgumentError("odd-length hex string");
  }
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  Bytes out(hex.size() / 2);
  for (size_t i = 0; i < out.size(); ++i) {
    int hi = nibble(hex[2 * i]);
    int lo = nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) return absl::InvalidArgumentError("bad hex digit");
    out[i] = static_cast<uint8_t>((hi << 4) | lo);
  }
  return out;
}

Bytes ToBytes(std::string_view s) { return Bytes(s.begin(), s.end()); }

BitString::BitString(std::span<const uint8_t> data, size_t bits)
    : bytes_((bits + 7) / 8), bits_(bits) {
  if (data.size() < bytes_.size()) {
    throw std::invalid_argument("BitString: not enough input bytes");
  }
  std::copy_n(data.begin(), bytes_.size(), bytes_.begin());
  if (bits_ % 8 != 0) {
    bytes_.back() &= static_cast<uint8_t>(0xff << (8 - bits_ % 8));
  }
}

BitString BitString::Zero(size_t bits) {
  Bytes zeros((bits + 7) / 8, 0);
  return BitString(zeros, bits);
}

absl::StatusOr<BitString> BitString::FromBytes(std::span<const uint8_t> data,
                                               size_t bits) {
  if (data.size() != (bits + 7) / 8) {
    return absl::InvalidArgumentError("bit string has wrong byte length");
  }
  BitString s(data, bits);
  if (!std::equal(s.bytes_.begin(), s.bytes_.end(), data.begin())) {
    return absl::InvalidArgumentError("bit string has nonzero padding");
  }
  return s;
}

bool BitString::bit(size_t i) const {
  return (bytes_[i / 8] >> (7 - i % 8)) & 1;
}

void BitString::flip(size_t i) {
  bytes_[i / 8] ^= static_cast<uint8_t>(1u << (7 - i % 8));
}

BitString BitString::Prefix(size_t bits) const { return Slice(0, bits); }

BitString BitString::Slice(size_t offset, size_t bits) const {
  if (offset + bits > bits_) throw std::out_of_range("BitString::Slice");
  BitString out = Zero(bits);
  for (size_t i = 0; i < bits; ++i) {
    if (bit(offset + i)) out.flip(i);
  }
  return out;
}

BitString BitString::Concat(const BitString& other) const {
  BitString out = Zero(bits_ + other.bits_);
  if (bits_ % 8 == 0) {
    std::copy(bytes_.begin(), bytes_.end(), out.bytes_.begin());
    std::copy(other.bytes_.begin(), other.bytes_.end(),
              out.bytes_.begin() + bytes_.size());
    return out;
  }
  for (size_t i = 0; i < bits_; ++i) {
    if (bit(i)) out.flip(i);
  }
  for (size_t i = 0; i < other.bits_; ++i) {
    if (other.bit(i)) out.flip(bits_ + i);
  }
  return out;
}

std::string BitString::ToBinary() const {
  std::string out;
  out.reserve(bits_);
  for (size_t i = 0; i < bits_; ++i) out.push_back(bit(i) ? '1' : '0');
  return out;
}

void AppendU32(Bytes& out, uint32_t v) {
  out.push_back(static_cast<uint8_t>(v >> 24));
  out.push_back(static_cast<uint8_t>(v >> 16));
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v));
}

uint32_t ReadU32(std::span<const uint8_t> in) {
  return (uint32_t{in[0]} << 24) | (uint32_t{in[1]} << 16) |
         (uint32_t{in[2]} << 8) | uint32_t{in[3]};
}

FieldWriter& FieldWriter::Add(std::span<const uint8_t> field) {
  AppendU32(out_, static_cast<uint32_t>(field.size()));
  out_.insert(out_.end(), field.begin(), field.end());
  return *this;
}

FieldWriter& FieldWriter::Add(std::string_view field) {
  return Add(std::span<const uint8_t>(
      reinterpret_cast<const uint8_t*>(field.data()), field.size()));
}

FieldWriter& FieldWriter::AddU32(uint32_t v) {
  Bytes b;
  AppendU32(b, v);
  return Add(b);
}

absl::StatusOr<std::span<const uint8_t>> FieldReader::Next() {
  if (in_.size() - pos_ < 4) {
    return absl::InvalidArgumentError("truncated field length");
  }
  uint32_t len = ReadU32(in_.subspan(pos_, 4));
  pos_ += 4;
  if (in_.size() - pos_ < len) {
    return absl::InvalidArgumentError("truncated field body");
  }
  auto field = in_.subspan(pos_, len);
  pos_ += len;
  return field;
}

absl::StatusOr<uint32_t> FieldReader::NextU32() {
  auto field = Next();
  if (!field.ok()) return field.status();
  if (field->size() != 4) {
    return absl::InvalidArgumentError("integer field must be 4 bytes");
  }
  return ReadU32(*field);
}

}  // namespace hpspake
