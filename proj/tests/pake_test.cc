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

#include "hpspake/pake.h"
#include "test_util.h"

namespace hpspake {
namespace {

using testing::HashedParams;
using testing::TinyParams;
using testing::ToyParams;

struct Parties {
  ServerConfig server;
  ClientConfig client;
};

Parties MakeParties(const PhfParams& pp, Mode mode, uint64_t pw, uint64_t n,
                uint64_t seed, uint64_t server_pw = 0) {
  Rng rng = Rng::FromSeed(seed);
  auto [sk, proj] = Keygen(pp, rng);
  auto table = std::make_shared<PasswordTable>();
  EXPECT_TRUE(table
                  ->Register(pp.gp, ClientIdentity{"C1", 1},
                             *Password::Make(server_pw ? server_pw : pw, n))
                  .ok());
  ServerConfig server{pp, sk, proj, "S", mode, table};
  ClientConfig client = *MakeClientConfig(pp, proj, ClientIdentity{"C1", 1},
                                          "S", *Password::Make(pw, n), mode);
  return {std::move(server), std::move(client)};
}

class HonestRun : public ::testing::TestWithParam<Mode> {};

TEST_P(HonestRun, BothSidesAcceptWithEqualKeys) {
  Parties s = MakeParties(HashedParams(), GetParam(), 5, 16, 1);
  Rng rng = Rng::FromSeed(2);
  for (int i = 0; i < 50; ++i) {
    ClientHello hello = ClientStart(s.client, rng);
    ServerReply reply = ServerOnFlow1(s.server, hello.flow, rng);
    ASSERT_TRUE(reply.flow.has_value());
    auto f3 = ClientOnFlow2(hello.state, *reply.flow);
    ASSERT_TRUE(f3.has_value());
    ASSERT_TRUE(ServerOnFlow3(reply.state, *f3));
    EXPECT_TRUE(hello.state.accepted());
    EXPECT_TRUE(reply.state.accepted());
    EXPECT_EQ(*hello.state.session_key, *reply.state.session_key);
    EXPECT_EQ(hello.state.session_key->size(), kDemoKappa);
    EXPECT_TRUE(Partnered(hello.state, reply.state));
    EXPECT_EQ(hello.state.y, reply.state.y);
  }
}

INSTANTIATE_TEST_SUITE_P(Modes, HonestRun,
                         ::testing::Values(Mode::kBase, Mode::kSquareTrick));

TEST(Pake, ToyProfileRunsToCompletion) {
  Parties s = MakeParties(ToyParams(), Mode::kSquareTrick, 3, 16, 3);
  Rng rng = Rng::FromSeed(4);
  ClientHello hello = ClientStart(s.client, rng);
  ServerReply reply = ServerOnFlow1(s.server, hello.flow, rng);
  ASSERT_TRUE(reply.flow);
  auto f3 = ClientOnFlow2(hello.state, *reply.flow);
  ASSERT_TRUE(f3);
  EXPECT_TRUE(ServerOnFlow3(reply.state, *f3));
  EXPECT_EQ(hello.state.session_key->size(), kToyKappa);
}

TEST(Pake, WrongPasswordIsRejectedAtFlow1) {
  Parties s = MakeParties(HashedParams(), Mode::kSquareTrick, 5, 16, 5, 6);
  Rng rng = Rng::FromSeed(6);
  ClientHello hello = ClientStart(s.client, rng);
  ServerReply reply = ServerOnFlow1(s.server, hello.flow, rng);
  EXPECT_FALSE(reply.flow.has_value());
  EXPECT_EQ(reply.state.phase, Phase::kRejected);
  EXPECT_EQ(reply.state.reject_reason, RejectReason::kBadMac);
}

TEST(Pake, UnknownClientIsRejected) {
  Parties s = MakeParties(HashedParams(), Mode::kBase, 5, 16, 7);
  Rng rng = Rng::FromSeed(8);
  ClientHello hello = ClientStart(s.client, rng);
  hello.flow.client_id = "C9";
  ServerReply reply = ServerOnFlow1(s.server, hello.flow, rng);
  EXPECT_FALSE(reply.flow);
  EXPECT_EQ(reply.state.reject_reason, RejectReason::kUnknownClient);
}

TEST(Pake, BaseModeRefusesNonResidues) {
  Parties s = MakeParties(HashedParams(), Mode::kBase, 5, 16, 9);
  Rng rng = Rng::FromSeed(10);
  ClientHello hello = ClientStart(s.client, rng);
  hello.flow.y.u1 = s.server.params.gp.p - 1;
  ServerReply reply = ServerOnFlow1(s.server, hello.flow, rng);
  EXPECT_FALSE(reply.flow);
  EXPECT_EQ(reply.state.reject_reason, RejectReason::kNotInGroup);
  hello.flow.y.u1 = 0;
  EXPECT_EQ(ServerOnFlow1(s.server, hello.flow, rng).state.reject_reason,
            RejectReason::kMalformed);
}

TEST(Pake, AnyTagBitFlipIsRejected) {
  Parties s = MakeParties(ToyParams(), Mode::kSquareTrick, 9, 16, 11);
  Rng rng = Rng::FromSeed(12);
  for (size_t bit = 0; bit < kToyKappa; ++bit) {
    ClientHello hello = ClientStart(s.client, rng);
    Flow1 bad = hello.flow;
    bad.tau0.flip(bit);
    EXPECT_FALSE(ServerOnFlow1(s.server, bad, rng).flow) << "tau0 bit " << bit;

    ServerReply reply = ServerOnFlow1(s.server, hello.flow, rng);
    ASSERT_TRUE(reply.flow);
    Flow2 bad2 = *reply.flow;
    bad2.tau1.flip(bit);
    SessionState copy = hello.state;
    EXPECT_FALSE(ClientOnFlow2(copy, bad2)) << "tau1 bit " << bit;
    EXPECT_EQ(copy.phase, Phase::kRejected);

    auto f3 = ClientOnFlow2(hello.state, *reply.flow);
    ASSERT_TRUE(f3);
    Flow3 bad3 = *f3;
    bad3.tau2.flip(bit);
    SessionState server_copy = reply.state;
    EXPECT_FALSE(ServerOnFlow3(server_copy, bad3)) << "tau2 bit " << bit;
    EXPECT_TRUE(ServerOnFlow3(reply.state, *f3));
  }
}

TEST(Pake, ZetaChangeBreaksConfirmation) {
  Parties s = MakeParties(HashedParams(), Mode::kSquareTrick, 2, 16, 13);
  Rng rng = Rng::FromSeed(14);
  ClientHello hello = ClientStart(s.client, rng);
  ServerReply reply = ServerOnFlow1(s.server, hello.flow, rng);
  Flow2 f2 = *reply.flow;
  f2.zeta.flip(0);
  EXPECT_FALSE(ClientOnFlow2(hello.state, f2));
}

TEST(Pake, DuplicateAndOutOfPhaseMessagesAreRefused) {
  Parties s = MakeParties(HashedParams(), Mode::kSquareTrick, 2, 16, 15);
  Rng rng = Rng::FromSeed(16);
  ClientHello hello = ClientStart(s.client, rng);
  ServerReply reply = ServerOnFlow1(s.server, hello.flow, rng);
  auto f3 = ClientOnFlow2(hello.state, *reply.flow);
  ASSERT_TRUE(f3);
  // Second Flow2 after acceptance: refused, state untouched.
  SessionState before = hello.state;
  EXPECT_FALSE(ClientOnFlow2(hello.state, *reply.flow));
  EXPECT_TRUE(hello.state.accepted());
  EXPECT_EQ(*hello.state.session_key, *before.session_key);
  // Flow3 to a client state is a role mismatch.
  EXPECT_FALSE(ServerOnFlow3(hello.state, *f3));
  ASSERT_TRUE(ServerOnFlow3(reply.state, *f3));
  EXPECT_FALSE(ServerOnFlow3(reply.state, *f3));
  EXPECT_TRUE(reply.state.accepted());
}

TEST(Pake, WrongServerIdentityRejected) {
  Parties s = MakeParties(HashedParams(), Mode::kBase, 2, 16, 17);
  Rng rng = Rng::FromSeed(18);
  ClientHello hello = ClientStart(s.client, rng);
  ServerReply reply = ServerOnFlow1(s.server, hello.flow, rng);
  Flow2 f2 = *reply.flow;
  f2.server_id = "T";
  EXPECT_FALSE(ClientOnFlow2(hello.state, f2));
  EXPECT_EQ(hello.state.reject_reason, RejectReason::kWrongPeer);
}

// Same witness and nonce in both modes: the squared y, the tags and the key
// all coincide.
TEST(SquareTrick, MatchesBaseModeUnderMatchedRandomness) {
  const PhfParams& pp = HashedParams();
  Parties base = MakeParties(pp, Mode::kBase, 7, 16, 19);
  Parties sq = MakeParties(pp, Mode::kSquareTrick, 7, 16, 19);
  Rng rng = Rng::FromSeed(20);
  for (int i = 0; i < 100; ++i) {
    Witness w{rng.UniformBelow(pp.gp.q)};
    BitString zeta = rng.NextBits(pp.kappa);
    ClientHello hb = ClientStartWithWitness(base.client, w);
    ClientHello hs = ClientStartWithWitness(sq.client, w);
    EXPECT_EQ(SquarePair(pp.gp, hs.flow.y), hb.flow.y);
    EXPECT_EQ(hb.flow.tau0, hs.flow.tau0);
    ServerReply rb = ServerOnFlow1WithNonce(base.server, hb.flow, zeta);
    ServerReply rs = ServerOnFlow1WithNonce(sq.server, hs.flow, zeta);
    ASSERT_TRUE(rb.flow && rs.flow);
    EXPECT_EQ(*rb.flow, *rs.flow);
    auto fb = ClientOnFlow2(hb.state, *rb.flow);
    auto fs = ClientOnFlow2(hs.state, *rs.flow);
    ASSERT_TRUE(fb && fs);
    EXPECT_EQ(*fb, *fs);
    ASSERT_TRUE(ServerOnFlow3(rb.state, *fb));
    ASSERT_TRUE(ServerOnFlow3(rs.state, *fs));
    EXPECT_EQ(rb.state.sid, rs.state.sid);
    EXPECT_EQ(*rb.state.session_key, *rs.state.session_key);
  }
}

TEST(OpCount, ClientFourServerTwoInSquareMode) {
  Parties s = MakeParties(HashedParams(), Mode::kSquareTrick, 4, 16, 21);
  Rng rng = Rng::FromSeed(22);
  ResetOpCounters();
  ClientHello hello = ClientStart(s.client, rng);
  OpCounters client = ThreadOpCounters();
  ResetOpCounters();
  ServerReply reply = ServerOnFlow1(s.server, hello.flow, rng);
  OpCounters server = ThreadOpCounters();
  ResetOpCounters();
  auto f3 = ClientOnFlow2(hello.state, *reply.flow);
  ASSERT_TRUE(f3);
  ASSERT_TRUE(ServerOnFlow3(reply.state, *f3));
  OpCounters tail = ThreadOpCounters();
  EXPECT_EQ(client.exponentiations, 4u);
  EXPECT_EQ(client.membership_checks, 0u);
  EXPECT_LE(client.squarings, 2u);
  EXPECT_EQ(server.exponentiations, 2u);
  EXPECT_EQ(server.membership_checks, 0u);
  EXPECT_EQ(server.squarings, 2u);
  EXPECT_EQ(tail.exponentiations, 0u);
}

TEST(OpCount, BaseModeServerChecksMembership) {
  Parties s = MakeParties(HashedParams(), Mode::kBase, 4, 16, 23);
  Rng rng = Rng::FromSeed(24);
  ClientHello hello = ClientStart(s.client, rng);
  ResetOpCounters();
  ServerReply reply = ServerOnFlow1(s.server, hello.flow, rng);
  EXPECT_EQ(ThreadOpCounters().membership_checks, 2u);
  EXPECT_EQ(ThreadOpCounters().exponentiations, 2u);
}

TEST(Transform, RoundTrip) {
  const PhfParams& pp = HashedParams();
  Rng rng = Rng::FromSeed(25);
  for (int i = 0; i < 1000; ++i) {
    Password pi = *Password::Make(1 + rng.UniformBelow(uint64_t{1000}), 1000);
    Pair x = rng.UniformBelow(uint64_t{2}) ? SampleL(pp.gp, rng).first
                                           : SampleXMinusL(pp.gp, rng);
    ASSERT_EQ(Untransform(pp.gp, pi, Transform(pp.gp, pi, x)), x);
  }
}

// Every y in G^2 of the 4-bit group: at most one password maps back into L.
TEST(Transform, AtMostOnePasswordMapsIntoL) {
  const GroupParams& gp = TinyParams().gp;
  const uint64_t n = 10;  // N < q = 11
  std::vector<Element> g;
  for (mpz_class v = 1; v < gp.p; ++v) {
    if (InSubgroup(gp, v)) g.push_back(v);
  }
  ASSERT_EQ(g.size(), 11u);
  for (const Element& u1 : g) {
    for (const Element& u2 : g) {
      int hits = 0;
      for (uint64_t pw = 1; pw <= n; ++pw) {
        if (*IsInL(gp, Untransform(gp, *Password::Make(pw, n), Pair{u1, u2}))) {
          ++hits;
        }
      }
      ASSERT_LE(hits, 1);
    }
  }
}

TEST(Password, RangeChecked) {
  EXPECT_FALSE(Password::Make(0, 16).ok());
  EXPECT_FALSE(Password::Make(17, 16).ok());
  EXPECT_TRUE(Password::Make(16, 16).ok());
  const PhfParams& pp = TinyParams();
  EXPECT_FALSE(MakeClientConfig(pp, Projection{}, ClientIdentity{"C1", 1}, "S",
                                *Password::Make(1, 11), Mode::kBase)
                   .ok());
}

TEST(Mode, NamesRoundTrip) {
  for (Mode m : {Mode::kBase, Mode::kSquareTrick}) {
    EXPECT_EQ(*ParseMode(ModeName(m)), m);
  }
  EXPECT_FALSE(ParseMode("bogus").ok());
}

}  // namespace
}  // namespace hpspake
