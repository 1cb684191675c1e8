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

#include "hpspake/primitives.h"

#include <openssl/evp.h>
#include <openssl/hmac.h>

namespace hpspake {

Bytes Sha256(std::span<const uint8_t> data) {
  Bytes out(32);
  EVP_Digest(data.data(), data.size(), out.data(), nullptr, EVP_sha256(),
             nullptr);
  return out;
}

BitString Mac(const BitString& key, std::span<const uint8_t> message,
              size_t kappa) {
  uint8_t digest[32];
  unsigned int len = 0;
  HMAC(EVP_sha256(), key.bytes().data(), static_cast<int>(key.bytes().size()),
       message.data(), message.size(), digest, &len);
  return BitString(std::span<const uint8_t>(digest, len), kappa);
}

KeyMaterial Kdf(const GroupParams& gp, const Element& v, size_t kappa,
                KdfMode mode) {
  const size_t out_bits = 2 * kappa;
  const size_t out_bytes = (out_bits + 7) / 8;
  Bytes material;
  if (mode == KdfMode::kLeastBits) {
    // v mod 2^(2 kappa), as a big-endian string of exactly 2 kappa bits.
    mpz_class low;
    mpz_fdiv_r_2exp(low.get_mpz_t(), v.get_mpz_t(), out_bits);
    mpz_mul_2exp(low.get_mpz_t(), low.get_mpz_t(), out_bytes * 8 - out_bits);
    material.assign(out_bytes, 0);
    size_t need = (mpz_sizeinbase(low.get_mpz_t(), 2) + 7) / 8;
    if (low != 0) {
      mpz_export(material.data() + (out_bytes - need), nullptr, 1, 1, 1, 0,
                 low.get_mpz_t());
    }
  } else {
    Bytes enc = EncodeElement(gp, v);
    if (out_bits <= 256) {
      material = Sha256(enc);
    } else {
      for (uint32_t block = 0; material.size() < out_bytes; ++block) {
        Bytes in = enc;
        AppendU32(in, block);
        Bytes h = Sha256(in);
        material.insert(material.end(), h.begin(), h.end());
      }
    }
  }
  BitString all(material, out_bits);
  return KeyMaterial{all.Prefix(kappa), all.Slice(kappa, kappa)};
}

mpz_class HashToZq(const HashIndex& idx, const GroupParams& gp,
                   std::span<const uint8_t> tag, const Element& u1,
                   const Element& u2) {
  Bytes in = idx.lambda;
  FieldWriter fw;
  fw.Add(tag).Add(EncodeElement(gp, u1)).Add(EncodeElement(gp, u2));
  in.insert(in.end(), fw.bytes().begin(), fw.bytes().end());
  Bytes digest = Sha256(in);
  mpz_class t;
  mpz_import(t.get_mpz_t(), digest.size(), 1, 1, 1, 0, digest.data());
  return mpz_class(t % gp.q);
}

}  // namespace hpspake
