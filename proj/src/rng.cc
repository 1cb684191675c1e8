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

#include "hpspake/rng.h"

#include <openssl/evp.h>
#include <openssl/rand.h>

#include <algorithm>
#include <cstring>
#include <stdexcept>

namespace hpspake {

struct Rng::CipherCtx {
  EVP_CIPHER_CTX* ctx = nullptr;
  ~CipherCtx() { EVP_CIPHER_CTX_free(ctx); }
};

namespace {

std::array<uint8_t, 32> Sha256Key(std::span<const uint8_t> a,
                                  std::span<const uint8_t> b) {
  Bytes in(a.begin(), a.end());
  in.insert(in.end(), b.begin(), b.end());
  std::array<uint8_t, 32> out;
  EVP_Digest(in.data(), in.size(), out.data(), nullptr, EVP_sha256(), nullptr);
  return out;
}

Bytes U64Bytes(uint64_t v) {
  Bytes out(8);
  for (int i = 7; i >= 0; --i) {
    out[i] = static_cast<uint8_t>(v);
    v >>= 8;
  }
  return out;
}

}  // namespace

Rng::Rng(const std::array<uint8_t, 32>& key)
    : key_(key), ctx_(std::make_unique<CipherCtx>()) {
  ctx_->ctx = EVP_CIPHER_CTX_new();
  uint8_t iv[16] = {0};
  if (ctx_->ctx == nullptr ||
      EVP_EncryptInit_ex(ctx_->ctx, EVP_chacha20(), nullptr, key_.data(), iv) !=
          1) {
    throw std::runtime_error("chacha20 initialisation failed");
  }
}

Rng::Rng(Rng&&) noexcept = default;
Rng& Rng::operator=(Rng&&) noexcept = default;
Rng::~Rng() = default;

Rng Rng::FromSeed(std::span<const uint8_t> seed, uint64_t stream) {
  static constexpr uint8_t kLabel[] = {'h', 'p', 's', 'p', 'a', 'k', 'e'};
  Bytes material(std::begin(kLabel), std::end(kLabel));
  Bytes s = U64Bytes(stream);
  material.insert(material.end(), s.begin(), s.end());
  return Rng(Sha256Key(seed, material));
}

Rng Rng::FromSeed(uint64_t seed, uint64_t stream) {
  return FromSeed(U64Bytes(seed), stream);
}

Rng Rng::FromOs() {
  std::array<uint8_t, 32> key;
  if (RAND_bytes(key.data(), static_cast<int>(key.size())) != 1) {
    throw std::runtime_error("OS entropy source unavailable");
  }
  return Rng(key);
}

Rng Rng::Fork(uint64_t stream) const {
  Bytes s = U64Bytes(stream);
  s.push_back('f');
  return Rng(Sha256Key(key_, s));
}

void Rng::Refill() {
  std::array<uint8_t, 1024> zeros{};
  int len = 0;
  EVP_EncryptUpdate(ctx_->ctx, buf_.data(), &len, zeros.data(),
                    static_cast<int>(zeros.size()));
  pos_ = 0;
}

void Rng::Fill(std::span<uint8_t> out) {
  size_t done = 0;
  while (done < out.size()) {
    if (pos_ == buf_.size()) Refill();
    size_t n = std::min(out.size() - done, buf_.size() - pos_);
    std::memcpy(out.data() + done, buf_.data() + pos_, n);
    pos_ += n;
    done += n;
  }
}

Bytes Rng::NextBytes(size_t n) {
  Bytes out(n);
  Fill(out);
  return out;
}

BitString Rng::NextBits(size_t n) {
  Bytes b = NextBytes((n + 7) / 8);
  return BitString(b, n);
}

uint64_t Rng::NextU64() {
  uint8_t b[8];
  Fill(b);
  uint64_t v = 0;
  for (uint8_t x : b) v = (v << 8) | x;
  return v;
}

uint64_t Rng::UniformBelow(uint64_t n) {
  if (n == 0) throw std::invalid_argument("UniformBelow(0)");
  // Largest multiple of n that fits; values at or above it are rejected.
  uint64_t limit = max() - max() % n;
  for (;;) {
    uint64_t v = NextU64();
    if (v < limit) return v % n;
  }
}

mpz_class Rng::UniformBelow(const mpz_class& n) {
  if (n <= 0) throw std::invalid_argument("UniformBelow(<=0)");
  size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  size_t nbytes = (bits + 7) / 8;
  Bytes buf(nbytes);
  mpz_class v;
  for (;;) {
    Fill(buf);
    if (bits % 8 != 0) buf[0] &= static_cast<uint8_t>((1u << (bits % 8)) - 1);
    mpz_import(v.get_mpz_t(), buf.size(), 1, 1, 1, 0, buf.data());
    if (v < n) return v;
  }
}

double Rng::UniformUnit() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

}  // namespace hpspake
