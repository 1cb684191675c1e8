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

#include "hpspake/tag_phf.h"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>
#include <vector>

namespace hpspake {
namespace {

HashIndex SeededIndex(uint64_t seed, size_t kappa) {
  Rng rng = Rng::FromSeed(ToBytes("hash-index"), seed);
  return HashIndex{rng.NextBytes((kappa + 7) / 8)};
}

mpz_class ModQ(const GroupParams& gp, const mpz_class& v) {
  mpz_class out;
  mpz_mod(out.get_mpz_t(), v.get_mpz_t(), gp.q.get_mpz_t());
  return out;
}

// Small-group power table: table[k] = base^k mod p for k in [0, q).
std::vector<uint64_t> PowerTable(uint64_t base, uint64_t p, uint64_t q) {
  std::vector<uint64_t> t(q);
  uint64_t acc = 1;
  for (uint64_t k = 0; k < q; ++k) {
    t[k] = acc;
    acc = acc * base % p;
  }
  return t;
}

struct SmallTables {
  uint64_t p, q;
  std::vector<uint64_t> g1, g2, x1u1, x1u2, x2u1, x2u2;
  uint64_t theta1, theta2, v1;
  uint64_t tau1, tau2;
};

// Histogram of the pre-KDF value at the second point, restricted to keys
// with the reference projection and reference value at the first point.
void EnumerateSlice(const SmallTables& t, uint64_t a1,
                    std::unordered_map<uint64_t, uint64_t>& hist,
                    uint64_t& consistent) {
  const uint64_t p = t.p, q = t.q;
  for (uint64_t a2 = 0; a2 < q; ++a2) {
    if (t.g1[a1] * t.g2[a2] % p != t.theta1) continue;
    for (uint64_t b1 = 0; b1 < q; ++b1) {
      for (uint64_t b2 = 0; b2 < q; ++b2) {
        if (t.g1[b1] * t.g2[b2] % p != t.theta2) continue;
        uint64_t e1 = (a1 + b1 * t.tau1) % q;
        uint64_t e2 = (a2 + b2 * t.tau1) % q;
        if (t.x1u1[e1] * t.x1u2[e2] % p != t.v1) continue;
        uint64_t f1 = (a1 + b1 * t.tau2) % q;
        uint64_t f2 = (a2 + b2 * t.tau2) % q;
        ++hist[t.x2u1[f1] * t.x2u2[f2] % p];
        ++consistent;
      }
    }
  }
}

}  // namespace

absl::StatusOr<PhfParams> MakeToyParams(int bits, uint64_t seed) {
  if (bits > 16) {
    return absl::InvalidArgumentError("toy profile requires q < 2^16");
  }
  auto gp = GenerateGroup(bits, seed);
  if (!gp.ok()) return gp.status();
  return PhfParams{*gp, SeededIndex(seed, kToyKappa), kToyKappa,
                   KdfMode::kLeastBits};
}

PhfParams MakeDemoParams(uint64_t seed) {
  return PhfParams{Modp2048Group(seed), SeededIndex(seed, kDemoKappa),
                   kDemoKappa, KdfMode::kHash};
}

absl::StatusOr<PhfParams> MakeHashedParams(int bits, uint64_t seed,
                                           size_t kappa) {
  auto gp = GenerateGroup(bits, seed);
  if (!gp.ok()) return gp.status();
  return PhfParams{*gp, SeededIndex(seed, kappa), kappa, KdfMode::kHash};
}

std::pair<PhfSecretKey, Projection> Keygen(const PhfParams& pp, Rng& rng) {
  PhfSecretKey sk{rng.UniformBelow(pp.gp.q), rng.UniformBelow(pp.gp.q),
                  rng.UniformBelow(pp.gp.q), rng.UniformBelow(pp.gp.q)};
  Projection proj = Project(pp, sk);
  return {std::move(sk), std::move(proj)};
}

Projection Project(const PhfParams& pp, const PhfSecretKey& sk) {
  const GroupParams& gp = pp.gp;
  return Projection{
      MulMod(gp, PowMod(gp, gp.g1, sk.a1), PowMod(gp, gp.g2, sk.a2)),
      MulMod(gp, PowMod(gp, gp.g1, sk.b1), PowMod(gp, gp.g2, sk.b2))};
}

mpz_class Tau(const PhfParams& pp, std::span<const uint8_t> tag,
              const Pair& x) {
  return HashToZq(pp.idx, pp.gp, tag, x.u1, x.u2);
}

Element PreKdfValue(const GroupParams& gp, const PhfSecretKey& sk,
                    const mpz_class& tau, const Pair& x) {
  mpz_class e1 = ModQ(gp, sk.a1 + sk.b1 * tau);
  mpz_class e2 = ModQ(gp, sk.a2 + sk.b2 * tau);
  return MulMod(gp, PowMod(gp, x.u1, e1), PowMod(gp, x.u2, e2));
}

KeyMaterial HashPrivate(const PhfParams& pp, const PhfSecretKey& sk,
                        std::span<const uint8_t> tag, const Pair& x) {
  return Kdf(pp.gp, PreKdfValue(pp.gp, sk, Tau(pp, tag, x), x), pp.kappa,
             pp.kdf);
}

absl::StatusOr<KeyMaterial> HashPublic(const PhfParams& pp,
                                       const Projection& proj,
                                       std::span<const uint8_t> tag,
                                       const Pair& x, const Witness& w) {
  mpz_class r = ModQ(pp.gp, w.r);
  mpz_class c1, c2;
  mpz_powm(c1.get_mpz_t(), pp.gp.g1.get_mpz_t(), r.get_mpz_t(),
           pp.gp.p.get_mpz_t());
  mpz_powm(c2.get_mpz_t(), pp.gp.g2.get_mpz_t(), r.get_mpz_t(),
           pp.gp.p.get_mpz_t());
  if (c1 != x.u1 || c2 != x.u2) {
    return absl::InvalidArgumentError("witness does not match x");
  }
  return HashPublicUnchecked(pp, proj, tag, x, w);
}

KeyMaterial HashPublicUnchecked(const PhfParams& pp, const Projection& proj,
                                std::span<const uint8_t> tag, const Pair& x,
                                const Witness& w) {
  const GroupParams& gp = pp.gp;
  mpz_class tau = Tau(pp, tag, x);
  Element base = MulMod(gp, proj.theta1, PowMod(gp, proj.theta2, tau));
  return Kdf(gp, PowMod(gp, base, w.r), pp.kappa, pp.kdf);
}

Bytes SerializeSecretKey(const PhfParams& pp, const PhfSecretKey& sk) {
  FieldWriter fw;
  for (const mpz_class* v : {&sk.a1, &sk.a2, &sk.b1, &sk.b2}) {
    fw.Add(EncodeElement(pp.gp, *v));
  }
  return std::move(fw).bytes();
}

absl::StatusOr<PhfSecretKey> ParseSecretKey(const PhfParams& pp,
                                            std::span<const uint8_t> in) {
  FieldReader fr(in);
  PhfSecretKey sk;
  for (mpz_class* v : {&sk.a1, &sk.a2, &sk.b1, &sk.b2}) {
    auto f = fr.Next();
    if (!f.ok()) return f.status();
    if (f->size() != pp.gp.ElementBytes()) {
      return absl::InvalidArgumentError("secret key field has wrong width");
    }
    mpz_import(v->get_mpz_t(), f->size(), 1, 1, 1, 0, f->data());
    if (*v >= pp.gp.q) {
      return absl::InvalidArgumentError("secret key component not in Z_q");
    }
  }
  if (!fr.done()) return absl::InvalidArgumentError("trailing bytes");
  return sk;
}

Bytes SerializeProjection(const PhfParams& pp, const Projection& proj) {
  FieldWriter fw;
  fw.Add(EncodeElement(pp.gp, proj.theta1))
      .Add(EncodeElement(pp.gp, proj.theta2));
  return std::move(fw).bytes();
}

absl::StatusOr<Projection> ParseProjection(const PhfParams& pp,
                                           std::span<const uint8_t> in) {
  FieldReader fr(in);
  Projection proj;
  for (Element* v : {&proj.theta1, &proj.theta2}) {
    auto f = fr.Next();
    if (!f.ok()) return f.status();
    auto e = DecodeElement(pp.gp, *f);
    if (!e.ok()) return e.status();
    if (!InSubgroup(pp.gp, *e)) {
      return absl::InvalidArgumentError("projection component not in G");
    }
    *v = *e;
  }
  if (!fr.done()) return absl::InvalidArgumentError("trailing bytes");
  return proj;
}

Universal2Case SampleUniversal2Case(const PhfParams& pp, Rng& rng) {
  for (;;) {
    Universal2Case c;
    c.tag1 = rng.NextBytes(4);
    c.tag2 = rng.NextBytes(4);
    c.x1 = SampleXMinusL(pp.gp, rng);
    c.x2 = SampleXMinusL(pp.gp, rng);
    c.reference_key = Keygen(pp, rng).first;
    if (c.tag1 == c.tag2 && c.x1 == c.x2) continue;
    if (Tau(pp, c.tag1, c.x1) == Tau(pp, c.tag2, c.x2)) continue;
    return c;
  }
}

absl::StatusOr<Universal2Report> VerifyUniversal2Exhaustive(
    const PhfParams& pp, const Universal2Case& c, ExecutionPolicy policy) {
  const GroupParams& gp = pp.gp;
  if (!gp.Enumerable()) {
    return absl::FailedPreconditionError(
        "universal_2 oracle unavailable: group too large to enumerate");
  }
  Universal2Report rep;
  rep.q = gp.q.get_ui();
  rep.tau1 = Tau(pp, c.tag1, c.x1);
  rep.tau2 = c.tau2_override ? *c.tau2_override : Tau(pp, c.tag2, c.x2);
  rep.degenerate = rep.tau1 == rep.tau2;
  auto in1 = IsInL(gp, c.x1);
  auto in2 = IsInL(gp, c.x2);
  if (!in1.ok()) return in1.status();
  if (!in2.ok()) return in2.status();
  rep.x1_in_l = *in1;
  rep.x2_in_l = *in2;

  Projection proj = Project(pp, c.reference_key);
  SmallTables t;
  t.p = gp.p.get_ui();
  t.q = rep.q;
  t.g1 = PowerTable(gp.g1.get_ui(), t.p, t.q);
  t.g2 = PowerTable(gp.g2.get_ui(), t.p, t.q);
  t.x1u1 = PowerTable(c.x1.u1.get_ui(), t.p, t.q);
  t.x1u2 = PowerTable(c.x1.u2.get_ui(), t.p, t.q);
  t.x2u1 = PowerTable(c.x2.u1.get_ui(), t.p, t.q);
  t.x2u2 = PowerTable(c.x2.u2.get_ui(), t.p, t.q);
  t.theta1 = proj.theta1.get_ui();
  t.theta2 = proj.theta2.get_ui();
  t.tau1 = rep.tau1.get_ui();
  t.tau2 = rep.tau2.get_ui();
  t.v1 = PreKdfValue(gp, c.reference_key, rep.tau1, c.x1).get_ui();

  std::unordered_map<uint64_t, uint64_t> hist;
  uint64_t consistent = 0;
  const int64_t q = static_cast<int64_t>(t.q);
  if (policy == ExecutionPolicy::kSerial) {
    for (int64_t a1 = 0; a1 < q; ++a1) EnumerateSlice(t, a1, hist, consistent);
  } else {
#pragma omp parallel
    {
      std::unordered_map<uint64_t, uint64_t> local;
      uint64_t local_consistent = 0;
#pragma omp for schedule(dynamic)
      for (int64_t a1 = 0; a1 < q; ++a1) {
        EnumerateSlice(t, a1, local, local_consistent);
      }
#pragma omp critical
      {
        for (const auto& [v, n] : local) hist[v] += n;
        consistent += local_consistent;
      }
    }
  }

  rep.keys_enumerated = t.q * t.q * t.q * t.q;
  rep.consistent_keys = consistent;
  rep.histogram.insert(hist.begin(), hist.end());
  rep.support = rep.histogram.size();
  bool equal = !rep.histogram.empty();
  for (const auto& [v, n] : rep.histogram) {
    if (n != rep.histogram.begin()->second) equal = false;
  }
  rep.uniform_over_g = equal && rep.support == t.q;
  rep.pass = !rep.degenerate && !rep.x1_in_l && !rep.x2_in_l &&
             rep.uniform_over_g;
  return rep;
}

std::string Universal2Report::Summary() const {
  std::ostringstream os;
  os << "universal2 q=" << q << " tau1=" << tau1.get_str()
     << " tau2=" << tau2.get_str() << " keys=" << keys_enumerated
     << " consistent=" << consistent_keys << " support=" << support
     << " uniform=" << (uniform_over_g ? "yes" : "no");
  if (degenerate) os << " DEGENERATE(tau collision, excluded)";
  if (x1_in_l || x2_in_l) os << " (point in L)";
  os << " verdict=" << (pass ? "PASS" : "FAIL");
  return os.str();
}

std::string Universal2Report::Csv() const {
  std::ostringstream os;
  os << "value,count\n";
  for (const auto& [v, n] : histogram) os << v << ',' << n << '\n';
  return os.str();
}

LocalUniquenessReport VerifyLocal1Uniqueness(const PhfParams& pp,
                                             const PhfSecretKey& sk,
                                             uint64_t dictionary_size,
                                             uint64_t trials, uint64_t seed,
                                             ExecutionPolicy policy) {
  const GroupParams& gp = pp.gp;
  LocalUniquenessReport rep;
  rep.trials = trials;
  rep.dictionary_size = dictionary_size;
  const uint64_t n = dictionary_size;
  rep.pairs = trials * (n * (n - 1) / 2);

  std::vector<Element> g2_neg_pi(n + 1);
  for (uint64_t pi = 1; pi <= n; ++pi) {
    g2_neg_pi[pi] = InvMod(gp, PowMod(gp, gp.g2, mpz_class(pi)));
  }

  auto run_trial = [&](uint64_t trial) -> uint64_t {
    Rng rng = Rng::FromSeed(seed, trial);
    Bytes z = rng.NextBytes(8);
    Pair y{PowMod(gp, gp.g1, rng.UniformBelow(gp.q)),
           PowMod(gp, gp.g2, rng.UniformBelow(gp.q))};
    std::vector<BitString> prefixes;
    prefixes.reserve(n);
    for (uint64_t pi = 1; pi <= n; ++pi) {
      Pair x{y.u1, MulMod(gp, y.u2, g2_neg_pi[pi])};
      prefixes.push_back(HashPrivate(pp, sk, z, x).k0);
    }
    std::sort(prefixes.begin(), prefixes.end());
    uint64_t hits = 0;
    for (size_t i = 0; i < prefixes.size();) {
      size_t j = i;
      while (j < prefixes.size() && prefixes[j] == prefixes[i]) ++j;
      uint64_t run = j - i;
      hits += run * (run - 1) / 2;
      i = j;
    }
    return hits;
  };

  uint64_t collisions = 0;
  const int64_t count = static_cast<int64_t>(trials);
  if (policy == ExecutionPolicy::kSerial) {
    for (int64_t t = 0; t < count; ++t) collisions += run_trial(t);
  } else {
#pragma omp parallel for reduction(+ : collisions) schedule(dynamic, 16)
    for (int64_t t = 0; t < count; ++t) collisions += run_trial(t);
  }
  rep.collisions = collisions;
  rep.rate = rep.pairs ? static_cast<double>(collisions) / rep.pairs : 0.0;

  const double uniform = std::ldexp(1.0, -static_cast<int>(pp.kappa));
  rep.expected_rate = uniform;
  rep.delta = 0;
  if (gp.Enumerable() && pp.kappa <= 24) {
    // Exact distribution of the KDF prefix of a uniform element of G.
    std::vector<uint64_t> counts(size_t{1} << pp.kappa, 0);
    const uint64_t q = gp.q.get_ui();
    Element v = 1;
    for (uint64_t k = 0; k < q; ++k) {
      BitString pre = Kdf(gp, v, pp.kappa, pp.kdf).k0;
      uint64_t idx = 0;
      for (size_t i = 0; i < pre.size(); ++i) idx = (idx << 1) | pre.bit(i);
      ++counts[idx];
      v = (v * gp.g1) % gp.p;
    }
    double collide = 0, dist = 0;
    for (uint64_t c : counts) {
      double pr = static_cast<double>(c) / q;
      collide += pr * pr;
      dist += std::fabs(pr - uniform);
    }
    rep.expected_rate = collide;
    rep.delta = dist / 2;
  }
  rep.bound = 2 * rep.delta + uniform;
  const double b = std::min(1.0, std::max(rep.bound, rep.expected_rate));
  rep.sigma = rep.pairs ? std::sqrt(b * (1 - b) / rep.pairs) : 0.0;
  rep.pass = rep.rate <= b + 3 * rep.sigma;
  return rep;
}

std::string LocalUniquenessReport::Summary() const {
  std::ostringstream os;
  os << "local-1-uniqueness N=" << dictionary_size << " trials=" << trials
     << " pairs=" << pairs << " collisions=" << collisions
     << " rate=" << rate << " expected=" << expected_rate
     << " delta=" << delta << " bound=" << bound
     << " verdict=" << (pass ? "PASS" : "FAIL");
  return os.str();
}

}  // namespace hpspake
