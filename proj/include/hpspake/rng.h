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

#ifndef HPSPAKE_RNG_H_
#define HPSPAKE_RNG_H_

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>

#include "hpspake/bytes.h"

namespace hpspake {

// Deterministic ChaCha20 keystream generator. Seeded instances reproduce the
// same stream on every platform; FromOs() draws the key from the OS entropy
// pool. Fork() derives independent per-trial / per-thread streams.
class Rng {
 public:
  using result_type = uint64_t;

  static Rng FromSeed(std::span<const uint8_t> seed, uint64_t stream = 0);
  static Rng FromSeed(uint64_t seed, uint64_t stream = 0);
  static Rng FromOs();

  Rng(Rng&&) noexcept;
  Rng& operator=(Rng&&) noexcept;
  ~Rng();

  Rng Fork(uint64_t stream) const;

  void Fill(std::span<uint8_t> out);
  Bytes NextBytes(size_t n);
  BitString NextBits(size_t n);
  uint64_t NextU64();
  // Uniform on [0, n) by rejection; n > 0.
  uint64_t UniformBelow(uint64_t n);
  mpz_class UniformBelow(const mpz_class& n);
  // Uniform double in [0, 1).
  double UniformUnit();

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() { return NextU64(); }

 private:
  explicit Rng(const std::array<uint8_t, 32>& key);
  void Refill();

  struct CipherCtx;
  std::array<uint8_t, 32> key_{};
  std::unique_ptr<CipherCtx> ctx_;
  std::array<uint8_t, 1024> buf_{};
  size_t pos_ = 1024;
};

}  // namespace hpspake

#endif  // HPSPAKE_RNG_H_
