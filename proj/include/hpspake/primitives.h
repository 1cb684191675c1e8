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

#ifndef HPSPAKE_PRIMITIVES_H_
#define HPSPAKE_PRIMITIVES_H_

#include <cstdint>
#include <span>

#include "hpspake/bytes.h"
#include "hpspake/group.h"

namespace hpspake {

// kLeastBits is the "least bits of the input" KDF: exact, but only close to
// uniform when the group is much larger than 2^(2 kappa). kHash extracts
// with SHA-256.
enum class KdfMode { kLeastBits, kHash };

inline constexpr size_t kDemoKappa = 128;
inline constexpr size_t kToyKappa = 8;

struct HashIndex {
  Bytes lambda;  // kappa/8 bytes
};

// (k0, k1) in {0,1}^(2 kappa): k0 keys the MAC, k1 is the session key.
struct KeyMaterial {
  BitString k0;
  BitString k1;

  BitString Joined() const { return k0.Concat(k1); }
  friend bool operator==(const KeyMaterial&, const KeyMaterial&) = default;
};

Bytes Sha256(std::span<const uint8_t> data);

// HMAC-SHA256 under the key bytes, truncated to the first `kappa` bits.
BitString Mac(const BitString& key, std::span<const uint8_t> message,
              size_t kappa);

KeyMaterial Kdf(const GroupParams& gp, const Element& v, size_t kappa,
                KdfMode mode);

// h_lambda(z, u1, u2): SHA-256(lambda || fields(z, u1, u2)) reduced mod q.
mpz_class HashToZq(const HashIndex& idx, const GroupParams& gp,
                   std::span<const uint8_t> tag, const Element& u1,
                   const Element& u2);

// Counts MAC evaluations made through it: the unit of work in the
// persistency experiment.
class MacMeter {
 public:
  BitString Mac(const BitString& key, std::span<const uint8_t> message,
                size_t kappa) {
    ++count_;
    return hpspake::Mac(key, message, kappa);
  }
  uint64_t count() const { return count_; }

 private:
  uint64_t count_ = 0;
};

}  // namespace hpspake

#endif  // HPSPAKE_PRIMITIVES_H_
