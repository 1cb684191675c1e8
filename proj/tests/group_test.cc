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

#include <cmath>
#include <map>

#include "hpspake/group.h"
#include "hpspake/rng.h"
#include "test_util.h"

namespace hpspake {
namespace {

using testing::TinyParams;
using testing::ToyParams;

TEST(Group, FourBitGroupIsTwentyThree) {
  const GroupParams& gp = TinyParams().gp;
  EXPECT_EQ(gp.p, 23);
  EXPECT_EQ(gp.q, 11);
  EXPECT_TRUE(ValidateGroup(gp).ok());
  EXPECT_NE(gp.g1, gp.g2);
  EXPECT_TRUE(InSubgroup(gp, gp.g1));
  EXPECT_TRUE(InSubgroup(gp, gp.g2));
}

TEST(Group, GenerationIsSeededAndSafe) {
  auto a = GenerateGroup(40, 3), b = GenerateGroup(40, 3), c = GenerateGroup(40, 4);
  ASSERT_TRUE(a.ok() && b.ok() && c.ok());
  EXPECT_EQ(*a, *b);
  EXPECT_NE(a->p, c->p);
  EXPECT_TRUE(ValidateGroup(*a).ok());
  EXPECT_EQ(mpz_sizeinbase(a->q.get_mpz_t(), 2), 40u);
}

TEST(Group, SearchBudgetExhaustion) {
  auto r = GenerateGroup(64, Bytes{1, 2, 3}, 1);
  if (!r.ok()) EXPECT_TRUE(absl::IsResourceExhausted(r.status()));
}

TEST(Group, Modp2048IsSafePrime) {
  GroupParams gp = Modp2048Group(1);
  EXPECT_EQ(mpz_sizeinbase(gp.p.get_mpz_t(), 2), 2048u);
  EXPECT_TRUE(ValidateGroup(gp).ok());
  EXPECT_FALSE(gp.Enumerable());
}

TEST(Group, QuadraticResiduesAreExactlyTheSubgroup) {
  const GroupParams& gp = TinyParams().gp;
  std::set<long> squares;
  for (long v = 1; v < 23; ++v) squares.insert(v * v % 23);
  for (long v = 1; v < 23; ++v) {
    EXPECT_EQ(InSubgroup(gp, mpz_class(v)), squares.contains(v)) << v;
  }
  EXPECT_EQ(squares.size(), 11u);
}

TEST(Group, SquareRootInverseOfSquaring) {
  const GroupParams& gp = ToyParams().gp;
  Rng rng = Rng::FromSeed(3);
  for (int i = 0; i < 200; ++i) {
    Element y = PowMod(gp, gp.g1, rng.UniformBelow(gp.q));
    auto root = SqrtInG(gp, y);
    ASSERT_TRUE(root.ok());
    EXPECT_TRUE(InSubgroup(gp, *root));
    EXPECT_EQ(SquareMod(gp, *root), y);
  }
  // p - 1 is a non-residue for safe primes with q odd.
  EXPECT_FALSE(SqrtInG(gp, gp.p - 1).ok());
}

TEST(Group, SquaringForcesMembership) {
  const GroupParams& gp = TinyParams().gp;
  for (long v = 1; v < 23; ++v) {
    Pair sq = SquarePair(gp, Pair{v, v});
    EXPECT_TRUE(InSubgroup(gp, sq.u1));
  }
}

TEST(Group, LanguageOracleMatchesDefinition) {
  const GroupParams& gp = TinyParams().gp;
  int in_l = 0;
  for (long r1 = 0; r1 < 11; ++r1) {
    for (long r2 = 0; r2 < 11; ++r2) {
      Pair x{PowMod(gp, gp.g1, r1), PowMod(gp, gp.g2, r2)};
      auto v = IsInL(gp, x);
      ASSERT_TRUE(v.ok());
      EXPECT_EQ(*v, r1 == r2);
      in_l += *v;
    }
  }
  EXPECT_EQ(in_l, 11);
  EXPECT_FALSE(IsInL(testing::HashedParams().gp, Pair{1, 1}).ok());
}

TEST(Group, SamplersLandWhereTheySay) {
  const GroupParams& gp = TinyParams().gp;
  Rng rng = Rng::FromSeed(4);
  for (int i = 0; i < 300; ++i) {
    auto [x, w] = SampleL(gp, rng);
    EXPECT_TRUE(*IsInL(gp, x));
    EXPECT_EQ(x.u1, PowMod(gp, gp.g1, w.r));
    EXPECT_FALSE(*IsInL(gp, SampleXMinusL(gp, rng)));
  }
}

// X \ L has 121 - 11 = 110 points; the sampler should hit each equally.
TEST(Group, XMinusLSamplerIsUniform) {
  const GroupParams& gp = TinyParams().gp;
  Rng rng = Rng::FromSeed(8);
  std::map<std::pair<long, long>, int> hist;
  const int draws = 110 * 200;
  for (int i = 0; i < draws; ++i) {
    Pair x = SampleXMinusL(gp, rng);
    hist[{x.u1.get_si(), x.u2.get_si()}]++;
  }
  EXPECT_EQ(hist.size(), 110u);
  double chi2 = 0;
  for (const auto& [k, n] : hist) chi2 += std::pow(n - 200.0, 2) / 200.0;
  // 109 degrees of freedom; 99.9th percentile is about 160.
  EXPECT_LT(chi2, 160.0);
}

TEST(Group, ElementEncoding) {
  const GroupParams& gp = ToyParams().gp;
  Bytes e = EncodeElement(gp, gp.g1);
  EXPECT_EQ(e.size(), gp.ElementBytes());
  EXPECT_EQ(*DecodeElement(gp, e), gp.g1);
  EXPECT_FALSE(DecodeElement(gp, Bytes(gp.ElementBytes(), 0)).ok());
  Bytes too_big = EncodeElement(gp, gp.p - 1);
  too_big.back() += 1;  // p
  EXPECT_FALSE(DecodeElement(gp, too_big).ok());
  EXPECT_FALSE(DecodeElement(gp, Bytes{1}).ok());
  auto parsed = ParseGroupParams(SerializeGroupParams(gp));
  ASSERT_TRUE(parsed.ok());
  EXPECT_EQ(*parsed, gp);
}

TEST(Group, OpCountersTrackCalls) {
  const GroupParams& gp = ToyParams().gp;
  ResetOpCounters();
  PowMod(gp, gp.g1, 5);
  InSubgroup(gp, gp.g1);
  MulMod(gp, gp.g1, gp.g2);
  SquareMod(gp, gp.g1);
  const OpCounters& c = ThreadOpCounters();
  EXPECT_EQ(c.exponentiations, 1u);
  EXPECT_EQ(c.membership_checks, 1u);
  EXPECT_EQ(c.multiplications, 1u);
  EXPECT_EQ(c.squarings, 1u);
}

}  // namespace
}  // namespace hpspake
