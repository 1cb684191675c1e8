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

#include <gtest/gtest.h>

#include "hpspake/primitives.h"
#include "test_util.h"

namespace hpspake {
namespace {

TEST(Sha256, KnownAnswer) {
  EXPECT_EQ(ToHex(Sha256(ToBytes("abc"))),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

// HMAC-SHA256 test case 1 of RFC 4231, truncated to 128 bits.
TEST(Mac, Rfc4231CaseOneTruncated) {
  BitString key(Bytes(20, 0x0b), 160);
  BitString tag = Mac(key, ToBytes("Hi There"), 128);
  EXPECT_EQ(ToHex(tag.bytes()), "b0344c61d8db38535ca8afceaf0bf12b");
  EXPECT_EQ(Mac(key, ToBytes("Hi There"), 12).ToBinary(), "101100000011");
}

TEST(Mac, MeterCountsEveryEvaluation) {
  MacMeter m;
  BitString key = BitString::Zero(128);
  for (int i = 0; i < 5; ++i) m.Mac(key, ToBytes("x"), 128);
  EXPECT_EQ(m.count(), 5u);
}

TEST(Kdf, LeastBitsSplitsLowOrderBits) {
  const GroupParams& gp = testing::TinyParams().gp;
  KeyMaterial k = Kdf(gp, 13, 2, KdfMode::kLeastBits);  // 13 = 0b1101
  EXPECT_EQ(k.k0.ToBinary(), "11");
  EXPECT_EQ(k.k1.ToBinary(), "01");
  KeyMaterial z = Kdf(gp, 16, 2, KdfMode::kLeastBits);  // 16 mod 16 = 0
  EXPECT_EQ(z.Joined().ToBinary(), "0000");
  KeyMaterial w = Kdf(gp, 0x1ab, 4, KdfMode::kLeastBits);
  EXPECT_EQ(w.Joined().ToBinary(), "10101011");
}

TEST(Kdf, HashModeLengthsAndExpansion) {
  const GroupParams& gp = testing::HashedParams().gp;
  for (size_t kappa : {8u, 128u, 200u}) {
    KeyMaterial k = Kdf(gp, gp.g1, kappa, KdfMode::kHash);
    EXPECT_EQ(k.k0.size(), kappa);
    EXPECT_EQ(k.k1.size(), kappa);
  }
  EXPECT_NE(Kdf(gp, gp.g1, 128, KdfMode::kHash),
            Kdf(gp, gp.g2, 128, KdfMode::kHash));
}

TEST(HashToZq, DependsOnEveryInput) {
  const PhfParams& pp = testing::HashedParams();
  const GroupParams& gp = pp.gp;
  mpz_class base = HashToZq(pp.idx, gp, ToBytes("C1"), gp.g1, gp.g2);
  EXPECT_LT(base, gp.q);
  EXPECT_NE(base, HashToZq(pp.idx, gp, ToBytes("C2"), gp.g1, gp.g2));
  EXPECT_NE(base, HashToZq(pp.idx, gp, ToBytes("C1"), gp.g2, gp.g1));
  HashIndex other{Bytes(pp.idx.lambda.size(), 0)};
  EXPECT_NE(base, HashToZq(other, gp, ToBytes("C1"), gp.g1, gp.g2));
}

}  // namespace
}  // namespace hpspake
