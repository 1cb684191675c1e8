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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// line fails. Tolerances are fixed here and never adjusted per run.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "hpspake/game.h"
#include "hpspake/redball.h"
#include "hpspake/transcript.h"
#include "hpspake/wire.h"

namespace hpspake {
namespace {

// Game experiments run on a generated 64-bit group with the hash KDF.
constexpr int kGameBits = 64;
constexpr uint64_t kSeed = 20260101;

constexpr double kOptimalPlaySeconds = 120;
constexpr double kTailBoundSeconds = 60;
constexpr double kUniversal2Seconds = 60;

struct Line {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void Report(int id, const char* name, const std::function<Line()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Line line = body();
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  std::printf("%s [%02d] %s: %s (%.1fs)\n", line.pass ? "PASS" : "FAIL", id,
              name, line.detail.c_str(), secs);
  std::fflush(stdout);
  if (!line.pass) ++failures;
}

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

std::string Fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string Fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

std::string Describe(const ExperimentReport& r) {
  std::string out = Fmt("%llu/%llu freq=%.5f expected=%.5f sigma=%.5f",
                        static_cast<unsigned long long>(r.successes),
                        static_cast<unsigned long long>(r.trials), r.frequency,
                        r.expected, r.sigma);
  for (const auto& [k, v] : r.details) out += " " + k + "=" + v;
  return out;
}

Line FromStatus(const absl::Status& st) { return Line{false, std::string(st.message())}; }

const PhfParams& GameParams() {
  static const PhfParams pp = *MakeHashedParams(kGameBits, kSeed);
  return pp;
}

Line OptimalPlay() {
  const auto start = std::chrono::steady_clock::now();
  OptimalPlayGridReport rep = CheckOptimalPlayGrid(5, 6, 20);
  const double secs = Seconds(start);
  std::string d = Fmt("vectors=%llu cells=%llu mismatches=%llu",
                      static_cast<unsigned long long>(rep.vectors),
                      static_cast<unsigned long long>(rep.cells),
                      static_cast<unsigned long long>(rep.mismatches));
  for (const auto& f : rep.failures) d += " [" + f + "]";
  return {rep.mismatches == 0 && rep.vectors == 461 && secs < kOptimalPlaySeconds, d};
}

Line TailBound() {
  const auto start = std::chrono::steady_clock::now();
  auto cells = CheckTailBoundGrid({4, 8, 16, 32}, {5, 10, 20},
                                 {mpq_class(1, 10), mpq_class(1, 4), mpq_class(2, 5)});
  const double secs = Seconds(start);
  int violations = 0;
  double worst_ratio = 0;
  for (const auto& c : cells) {
    if (!c.holds) ++violations;
    worst_ratio = std::max(worst_ratio, c.closed_form.get_d() / c.bound);
  }
  return {cells.size() == 36 && violations == 0 && secs < kTailBoundSeconds,
          Fmt("cells=%zu violations=%d max(closed/bound)=%.4g", cells.size(),
              violations, worst_ratio)};
}

Line Projective() {
  struct Profile {
    const char* name;
    PhfParams pp;
  };
  std::vector<Profile> profiles = {
      {"toy", *MakeToyParams(16, kSeed)},
      {"hashed", GameParams()},
      {"demo", MakeDemoParams(kSeed)},
  };
  std::string d;
  bool ok = true;
  for (const Profile& p : profiles) {
    Rng rng = Rng::FromSeed(kSeed, 3);
    int fails = 0;
    for (int i = 0; i < 1000; ++i) {
      auto [sk, proj] = Keygen(p.pp, rng);
      Bytes tag = rng.NextBytes(1 + rng.UniformBelow(uint64_t{32}));
      auto [x, w] = SampleL(p.pp.gp, rng);
      auto pub = HashPublic(p.pp, proj, tag, x, w);
      if (!pub.ok() || !(*pub == HashPrivate(p.pp, sk, tag, x))) ++fails;
    }
    ok = ok && fails == 0;
    d += Fmt("%s=%d/1000 ", p.name, 1000 - fails);
  }
  return {ok, d + "agree"};
}

Line Universal2() {
  const auto start = std::chrono::steady_clock::now();
  const PhfParams pp = *MakeToyParams(4, kSeed);
  if (pp.gp.q != 11) return {false, "toy group q != 11"};
  Rng rng = Rng::FromSeed(kSeed, 4);
  int checked = 0, bad = 0, skipped = 0;
  while (checked < 8) {
    Universal2Case c = SampleUniversal2Case(pp, rng);
    auto rep = VerifyUniversal2Exhaustive(pp, c);
    if (!rep.ok()) return FromStatus(rep.status());
    if (rep->degenerate) {
      ++skipped;
      continue;
    }
    ++checked;
    if (!rep->pass || rep->keys_enumerated != 14641 || rep->support != 11) ++bad;
  }
  const double secs = Seconds(start);
  return {bad == 0 && secs < kUniversal2Seconds,
          Fmt("cases=%d non-uniform=%d (tau collisions resampled: %d), 14641 "
              "keys each",
              checked, bad, skipped)};
}

Line Transformation() {
  const PhfParams& hp = GameParams();
  Rng rng = Rng::FromSeed(kSeed, 5);
  int r1 = 0;
  for (int i = 0; i < 1000; ++i) {
    Password pi = *Password::Make(1 + rng.UniformBelow(uint64_t{1000}), 1000);
    Pair x = rng.UniformBelow(uint64_t{2}) ? SampleL(hp.gp, rng).first
                                           : SampleXMinusL(hp.gp, rng);
    if (!(Untransform(hp.gp, pi, Transform(hp.gp, pi, x)) == x)) ++r1;
  }
  uint64_t points = 0;
  int r2 = 0;
  for (int bits : {4, 6}) {
    const PhfParams toy = *MakeToyParams(bits, kSeed);
    const GroupParams& gp = toy.gp;
    const uint64_t n = gp.q.get_ui() - 1;
    std::vector<Element> g;
    for (mpz_class v = 1; v < gp.p; ++v) {
      if (InSubgroup(gp, v)) g.push_back(v);
    }
    std::vector<Element> neg(n + 1);
    for (uint64_t pw = 1; pw <= n; ++pw) {
      neg[pw] = ComputePasswordElements(gp, *Password::Make(pw, n)).g2_neg_pi;
    }
    for (const Element& u1 : g) {
      for (const Element& u2 : g) {
        ++points;
        int hits = 0;
        for (uint64_t pw = 1; pw <= n; ++pw) {
          Pair x{u1, MulMod(gp, u2, neg[pw])};
          if (*IsInL(gp, x)) ++hits;
        }
        if (hits > 1) ++r2;
      }
    }
  }
  return {r1 == 0 && r2 == 0,
          Fmt("round-trip violations=%d/1000, uniqueness violations=%d over "
              "%llu points (q=11 and q<64, N=q-1)",
              r1, r2, static_cast<unsigned long long>(points))};
}

Line Partnering() {
  PartneringConfig cfg;
  cfg.sessions = 1000;
  cfg.seed = kSeed;
  auto rep = RunPartneringSuite(GameParams(), cfg);
  if (!rep.ok()) return FromStatus(rep.status());
  return {rep->pass && rep->successes == 0, Describe(*rep)};
}

Line Guessing() {
  GuessingConfig cfg;
  cfg.trials = 10000;
  cfg.seed = kSeed;
  auto direct = RunOnlineGuessing(GameParams(), cfg);
  if (!direct.ok()) return FromStatus(direct.status());
  cfg.target = GuessingConfig::Target::kIsolation;
  auto iso = RunOnlineGuessing(GameParams(), cfg);
  if (!iso.ok()) return FromStatus(iso.status());
  const bool ok = direct->pass && iso->pass &&
                  WithinThreeSigma(direct->successes, direct->trials, 0.25) &&
                  iso->successes == 0;
  return {ok, "direct " + Describe(*direct) + " | isolation " + Describe(*iso)};
}

Line Insider() {
  InsiderConfig cfg;
  cfg.trials = 1000;
  cfg.seed = kSeed;
  auto rep = RunInsiderAttack(GameParams(), cfg);
  if (!rep.ok()) return FromStatus(rep.status());
  return {rep->pass && rep->successes == 0, Describe(*rep)};
}

Line Persistency() {
  PersistencyConfig cfg;
  cfg.trials = 10000;
  cfg.seed = kSeed;
  auto rep = RunPersistency(GameParams(), cfg);
  if (!rep.ok()) return FromStatus(rep.status());
  const double bound = std::exp(-0.8);
  const bool under_bound = rep->frequency <= bound + 3 * rep->sigma;
  const bool matches =
      std::abs(rep->frequency - rep->expected) <=
      3 * BinomialSigma(rep->expected, rep->trials);
  return {rep->pass && under_bound && matches,
          Describe(*rep) + Fmt(" bound=%.6f", bound)};
}

Line SquareTrick() {
  const PhfParams& pp = GameParams();
  Rng rng = Rng::FromSeed(kSeed, 10);
  auto [sk, proj] = Keygen(pp, rng);
  Password pw = *Password::Make(7, 16);
  auto table = std::make_shared<PasswordTable>();
  (void)table->Register(pp.gp, ClientIdentity{"C1", 1}, pw);
  ServerConfig base_s{pp, sk, proj, "S", Mode::kBase, table};
  ServerConfig sq_s{pp, sk, proj, "S", Mode::kSquareTrick, table};
  ClientConfig base_c = *MakeClientConfig(pp, proj, {"C1", 1}, "S", pw, Mode::kBase);
  ClientConfig sq_c =
      *MakeClientConfig(pp, proj, {"C1", 1}, "S", pw, Mode::kSquareTrick);
  int mismatches = 0;
  uint64_t variant_membership = 0;
  for (int i = 0; i < 1000; ++i) {
    Witness w{rng.UniformBelow(pp.gp.q)};
    BitString zeta = rng.NextBits(pp.kappa);
    ClientHello hb = ClientStartWithWitness(base_c, w);
    ClientHello hs = ClientStartWithWitness(sq_c, w);
    ServerReply rb = ServerOnFlow1WithNonce(base_s, hb.flow, zeta);
    ResetOpCounters();
    ServerReply rs = ServerOnFlow1WithNonce(sq_s, hs.flow, zeta);
    variant_membership += ThreadOpCounters().membership_checks;
    if (!rb.flow || !rs.flow || !(*rb.flow == *rs.flow) ||
        !(hb.flow.tau0 == hs.flow.tau0) || !(rb.state.y == rs.state.y)) {
      ++mismatches;
      continue;
    }
    auto fb = ClientOnFlow2(hb.state, *rb.flow);
    auto fs = ClientOnFlow2(hs.state, *rs.flow);
    ResetOpCounters();
    bool acc = fb && fs && *fb == *fs && ServerOnFlow3(rb.state, *fb) &&
               ServerOnFlow3(rs.state, *fs);
    variant_membership += ThreadOpCounters().membership_checks;
    if (!acc || rb.state.sid != rs.state.sid ||
        !(*rb.state.session_key == *rs.state.session_key)) {
      ++mismatches;
    }
  }
  return {mismatches == 0 && variant_membership == 0,
          Fmt("transcript mismatches=%d/1000, variant server membership "
              "checks=%llu",
              mismatches, static_cast<unsigned long long>(variant_membership))};
}

Line Efficiency() {
  const PhfParams& pp = GameParams();
  Rng rng = Rng::FromSeed(kSeed, 11);
  auto [sk, proj] = Keygen(pp, rng);
  Password pw = *Password::Make(3, 16);
  auto table = std::make_shared<PasswordTable>();
  (void)table->Register(pp.gp, ClientIdentity{"C1", 1}, pw);
  ServerConfig server{pp, sk, proj, "S", Mode::kSquareTrick, table};
  ClientConfig client =
      *MakeClientConfig(pp, proj, {"C1", 1}, "S", pw, Mode::kSquareTrick);
  OpCounters worst_client, worst_server;
  bool all_accepted = true;
  for (int i = 0; i < 100; ++i) {
    ResetOpCounters();
    ClientHello hello = ClientStart(client, rng);
    OpCounters c = ThreadOpCounters();
    ResetOpCounters();
    ServerReply reply = ServerOnFlow1(server, hello.flow, rng);
    OpCounters s = ThreadOpCounters();
    ResetOpCounters();
    auto f3 = reply.flow ? ClientOnFlow2(hello.state, *reply.flow) : std::nullopt;
    c.exponentiations += ThreadOpCounters().exponentiations;
    c.squarings += ThreadOpCounters().squarings;
    ResetOpCounters();
    all_accepted = all_accepted && f3 && ServerOnFlow3(reply.state, *f3);
    s.exponentiations += ThreadOpCounters().exponentiations;
    s.membership_checks += ThreadOpCounters().membership_checks;
    worst_client.exponentiations = std::max(worst_client.exponentiations, c.exponentiations);
    worst_client.squarings = std::max(worst_client.squarings, c.squarings);
    worst_client.multiplications = std::max(worst_client.multiplications, c.multiplications);
    worst_server.exponentiations = std::max(worst_server.exponentiations, s.exponentiations);
    worst_server.membership_checks =
        std::max(worst_server.membership_checks, s.membership_checks);
    worst_server.squarings = std::max(worst_server.squarings, s.squarings);
  }
  const bool ok = all_accepted && worst_client.exponentiations <= 4 &&
                  worst_server.exponentiations <= 2 &&
                  worst_server.membership_checks == 0;
  return {ok, Fmt("client exps=%llu sq=%llu mul=%llu; server exps=%llu sq=%llu "
                  "membership=%llu (max over 100 sessions)",
                  static_cast<unsigned long long>(worst_client.exponentiations),
                  static_cast<unsigned long long>(worst_client.squarings),
                  static_cast<unsigned long long>(worst_client.multiplications),
                  static_cast<unsigned long long>(worst_server.exponentiations),
                  static_cast<unsigned long long>(worst_server.squarings),
                  static_cast<unsigned long long>(worst_server.membership_checks))};
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Line Wire() {
  int fixture_failures = 0;
  std::optional<PhfParams> toy;
  std::vector<Bytes> seeds;
  for (const char* name : {"golden_square.json", "golden_base.json"}) {
    auto g = GoldenTranscript::FromJson(
        ReadFile(std::string(HPSPAKE_FIXTURE_DIR) + "/" + name));
    if (!g.ok()) {
      ++fixture_failures;
      continue;
    }
    auto pub = DecodePublicParams(g->public_params);
    if (!pub.ok() || EncodePublicParams(*pub) != g->public_params) {
      ++fixture_failures;
      continue;
    }
    toy = pub->params;
    for (const Bytes* f : {&g->flow1, &g->flow2, &g->flow3}) {
      auto msg = DecodeFlow(pub->params, *f);
      if (!msg.ok() || EncodeFlow(pub->params, *msg) != *f) ++fixture_failures;
      seeds.push_back(*f);
    }
    auto regen = MakeGoldenTranscript(g->seed, g->mode);
    if (!regen.ok() || !(*regen == *g)) ++fixture_failures;
  }
  if (!toy) return {false, "fixtures unreadable"};

  seeds.push_back(EncodeFlow(*toy, RejectMessage{}));
  Rng rng = Rng::FromSeed(kSeed, 12);
  uint64_t decoded = 0, inconsistent = 0;
  constexpr int kMutations = 100000;
  for (int i = 0; i < kMutations; ++i) {
    Bytes frame = seeds[rng.UniformBelow(seeds.size())];
    const int edits = 1 + static_cast<int>(rng.UniformBelow(uint64_t{4}));
    for (int e = 0; e < edits; ++e) {
      switch (rng.UniformBelow(uint64_t{4})) {
        case 0:
          if (!frame.empty()) {
            frame[rng.UniformBelow(frame.size())] ^=
                static_cast<uint8_t>(1u << rng.UniformBelow(uint64_t{8}));
          }
          break;
        case 1:
          if (!frame.empty()) {
            frame[rng.UniformBelow(frame.size())] =
                static_cast<uint8_t>(rng.NextU64());
          }
          break;
        case 2:
          frame.resize(rng.UniformBelow(frame.size() + 1));
          break;
        default:
          frame.insert(frame.begin() + static_cast<long>(
                                           rng.UniformBelow(frame.size() + 1)),
                       static_cast<uint8_t>(rng.NextU64()));
      }
    }
    auto msg = DecodeFlow(*toy, frame);
    if (msg.ok()) {
      ++decoded;
      if (EncodeFlow(*toy, *msg) != frame) ++inconsistent;
    }
  }
  return {fixture_failures == 0 && inconsistent == 0,
          Fmt("fixture failures=%d; %d mutations, no crash, %llu still decoded, "
              "%llu re-encoded differently",
              fixture_failures, kMutations,
              static_cast<unsigned long long>(decoded),
              static_cast<unsigned long long>(inconsistent))};
}

Line Secrecy() {
  SecrecyConfig cfg;
  cfg.trials = 10000;
  cfg.seed = kSeed;
  auto rep = RunSecrecySmoke(GameParams(), cfg);
  if (!rep.ok()) return FromStatus(rep.status());
  return {rep->pass && WithinThreeSigma(rep->successes, rep->trials, 0.5),
          Describe(*rep)};
}

}  // namespace
}  // namespace hpspake

int main() {
  using namespace hpspake;
  Report(1, "red-ball optimal play equals closed form (n<=5, a<=6, t<=20)", OptimalPlay);
  Report(2, "red-ball closed form below exp(-2(1/2-alpha)^2 ell)", TailBound);
  Report(3, "public and private hash agree (toy, hashed, MODP-2048)", Projective);
  Report(4, "conditional hash uniform over G (q=11, all keys)", Universal2);
  Report(5, "transformation round-trip and uniqueness", Transformation);
  Report(6, "interleaved sessions uniquely partnered, equal keys", Partnering);
  Report(7, "online guessing 4/16 and cross-client isolation", Guessing);
  Report(8, "insider replay of tau0 never accepted", Insider);
  Report(9, "persistency after theta leak (N=32, ell=10, alpha=0.3)", Persistency);
  Report(10, "square trick matches base transcripts, no membership checks", SquareTrick);
  Report(11, "client <= 4 and server <= 2 exponentiations", Efficiency);
  Report(12, "golden fixtures bit-exact, 1e5 fuzzed frames", Wire);
  Report(13, "Execute-only Test guess near 1/2", Secrecy);
  std::printf("%s: %d failing criteria\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
