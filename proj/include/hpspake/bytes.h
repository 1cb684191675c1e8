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

#ifndef HPSPAKE_BYTES_H_
#define HPSPAKE_BYTES_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace hpspake {

using Bytes = std::vector<uint8_t>;

std::string ToHex(std::span<const uint8_t> data);
absl::StatusOr<Bytes> FromHex(std::string_view hex);
Bytes ToBytes(std::string_view s);

// A string of `size()` bits packed MSB-first. Bits past size() in the last
// byte are always zero, so byte-wise equality is bit-wise equality.
class BitString {
 public:
  BitString() = default;
  // Takes the first `bits` bits of `data`; data must hold at least that many.
  BitString(std::span<const uint8_t> data, size_t bits);
  static BitString Zero(size_t bits);
  static absl::StatusOr<BitString> FromBytes(std::span<const uint8_t> data,
                                             size_t bits);

  size_t size() const { return bits_; }
  const Bytes& bytes() const { return bytes_; }
  bool bit(size_t i) const;
  void flip(size_t i);

  // First `bits` bits of this string.
  BitString Prefix(size_t bits) const;
  BitString Slice(size_t offset, size_t bits) const;
  BitString Concat(const BitString& other) const;
  std::string ToBinary() const;

  friend bool operator==(const BitString&, const BitString&) = default;
  friend auto operator<=>(const BitString&, const BitString&) = default;

 private:
  Bytes bytes_;
  size_t bits_ = 0;
};

// Length-prefixed field concatenation. Every field is a 4-byte big-endian
// length followed by its bytes; this is the one encoding used for MAC
// inputs, hash inputs, session ids, and wire payloads.
class FieldWriter {
 public:
  FieldWriter& Add(std::span<const uint8_t> field);
  FieldWriter& Add(std::string_view field);
  FieldWriter& AddU32(uint32_t v);
  const Bytes& bytes() const& { return out_; }
  Bytes bytes() && { return std::move(out_); }

 private:
  Bytes out_;
};

class FieldReader {
 public:
  explicit FieldReader(std::span<const uint8_t> in) : in_(in) {}
  absl::StatusOr<std::span<const uint8_t>> Next();
  absl::StatusOr<uint32_t> NextU32();
  bool done() const { return pos_ == in_.size(); }

 private:
  std::span<const uint8_t> in_;
  size_t pos_ = 0;
};

void AppendU32(Bytes& out, uint32_t v);
uint32_t ReadU32(std::span<const uint8_t> in);

}  // namespace hpspake

#endif  // HPSPAKE_BYTES_H_
