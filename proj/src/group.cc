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

#include "hpspake/group.h"

#include <string>

namespace hpspake {
namespace {

constexpr char kModp2048Hex[] =
    "FFFFFFFFFFFFFFFFC90FDAA22168C234C4C6628B80DC1CD129024E088A67CC74"
    "020BBEA63B139B22514A08798E3404DDEF9519B3CD3A431B302B0A6DF25F1437"
    "4FE1356D6D51C245E485B576625E7EC6F44C42E9A637ED6B0BFF5CB6F406B7ED"
    "EE386BFB5A899FA5AE9F24117C4B1FE649286651ECE45B3DC2007CB8A163BF05"
    "98DA48361C55D39A69163FA8FD24CF5F83655D23DCA3AD961C62F356208552BB"
    "9ED529077096966D670C354E4ABC9804F1746C08CA18217C32905E462E36CE3B"
    "E39E772C180E86039B2783A2EC07A28FB5C55DF06F4C52C9DE2BCBF695581718"
    "3995497CEA956AE515D2261898FA051015728E5A8AACAA68FFFFFFFFFFFFFFFF";

constexpr int kPrimalityReps = 40;

bool IsProbablePrime(const mpz_class& n) {
  return mpz_probab_prime_p(n.get_mpz_t(), kPrimalityReps) != 0;
}

Element SampleGenerator(const mpz_class& p, Rng& rng) {
  for (;;) {
    // h uniform on [1, p-1]
    mpz_class h = rng.UniformBelow(mpz_class(p - 1)) + 1;
    mpz_class g = (h * h) % p;
    if (g != 1) return g;
  }
}

void PickGenerators(GroupParams& gp, Rng& rng) {
  gp.g1 = SampleGenerator(gp.p, rng);
  do {
    gp.g2 = SampleGenerator(gp.p, rng);
  } while (gp.g2 == gp.g1);
}

Bytes U64Seed(uint64_t seed) {
  Bytes out(8);
  for (int i = 7; i >= 0; --i) {
    out[i] = static_cast<uint8_t>(seed);
    seed >>= 8;
  }
  return out;
}

Bytes ExportFixed(const mpz_class& v, size_t width) {
  Bytes out(width, 0);
  size_t count = 0;
  size_t need = (mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8;
  if (v == 0) return out;
  mpz_export(out.data() + (width - need), &count, 1, 1, 1, 0, v.get_mpz_t());
  return out;
}

mpz_class Import(std::span<const uint8_t> in) {
  mpz_class v;
  if (!in.empty()) mpz_import(v.get_mpz_t(), in.size(), 1, 1, 1, 0, in.data());
  return v;
}

}  // namespace

size_t GroupParams::ElementBytes() const {
  return (mpz_sizeinbase(p.get_mpz_t(), 2) + 7) / 8;
}

bool GroupParams::Enumerable() const { return q <= kEnumerationLimit; }

OpCounters& ThreadOpCounters() {
  thread_local OpCounters counters;
  return counters;
}

void ResetOpCounters() { ThreadOpCounters() = OpCounters{}; }

absl::StatusOr<GroupParams> GenerateGroup(int bits,
                                          std::span<const uint8_t> seed,
                                          int max_iterations) {
  if (bits < 4) return absl::InvalidArgumentError("bits must be at least 4");
  Rng rng = Rng::FromSeed(seed);
  mpz_class low, high;
  mpz_ui_pow_ui(low.get_mpz_t(), 2, bits - 1);
  mpz_ui_pow_ui(high.get_mpz_t(), 2, bits);

  mpz_class q = low + rng.UniformBelow(mpz_class(high - low));
  if (mpz_even_p(q.get_mpz_t())) q += 1;
  for (int i = 0; i < max_iterations; ++i) {
    if (q >= high) q = low + 1;
    if (IsProbablePrime(q)) {
      mpz_class p = 2 * q + 1;
      if (IsProbablePrime(p)) {
        GroupParams gp{.p = p, .q = q, .g1 = 0, .g2 = 0, .bits = bits};
        PickGenerators(gp, rng);
        return gp;
      }
    }
    q += 2;
  }
  return absl::ResourceExhaustedError("safe-prime search exhausted after " +
                                      std::to_string(max_iterations) +
                                      " candidates");
}

absl::StatusOr<GroupParams> GenerateGroup(int bits, uint64_t seed) {
  return GenerateGroup(bits, U64Seed(seed));
}

GroupParams Modp2048Group(uint64_t seed) {
  GroupParams gp;
  gp.p.set_str(kModp2048Hex, 16);
  gp.q = (gp.p - 1) / 2;
  gp.bits = static_cast<int>(mpz_sizeinbase(gp.q.get_mpz_t(), 2));
  Bytes material = ToBytes("modp2048-generators");
  Bytes s = U64Seed(seed);
  material.insert(material.end(), s.begin(), s.end());
  Rng rng = Rng::FromSeed(material);
  PickGenerators(gp, rng);
  return gp;
}

absl::Status ValidateGroup(const GroupParams& gp) {
  if (gp.p != 2 * gp.q + 1) {
    return absl::InvalidArgumentError("p != 2q + 1");
  }
  if (!IsProbablePrime(gp.q) || !IsProbablePrime(gp.p)) {
    return absl::InvalidArgumentError("p or q not prime");
  }
  for (const mpz_class* g : {&gp.g1, &gp.g2}) {
    if (*g <= 1 || *g >= gp.p) {
      return absl::InvalidArgumentError("generator out of range");
    }
    mpz_class t;
    mpz_powm(t.get_mpz_t(), g->get_mpz_t(), gp.q.get_mpz_t(),
             gp.p.get_mpz_t());
    if (t != 1) return absl::InvalidArgumentError("generator not in G");
  }
  if (static_cast<size_t>(gp.bits) != mpz_sizeinbase(gp.q.get_mpz_t(), 2)) {
    return absl::InvalidArgumentError("bits does not match q");
  }
  return absl::OkStatus();
}

Element PowMod(const GroupParams& gp, const Element& base,
               const mpz_class& exponent) {
  ++ThreadOpCounters().exponentiations;
  Element out;
  mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exponent.get_mpz_t(),
           gp.p.get_mpz_t());
  return out;
}

Element MulMod(const GroupParams& gp, const Element& a, const Element& b) {
  ++ThreadOpCounters().multiplications;
  return Element((a * b) % gp.p);
}

Element SquareMod(const GroupParams& gp, const Element& a) {
  ++ThreadOpCounters().squarings;
  return Element((a * a) % gp.p);
}

Element InvMod(const GroupParams& gp, const Element& a) {
  Element out;
  mpz_invert(out.get_mpz_t(), a.get_mpz_t(), gp.p.get_mpz_t());
  return out;
}

bool InSubgroup(const GroupParams& gp, const Element& v) {
  if (!InZpStar(gp, v)) return false;
  ++ThreadOpCounters().membership_checks;
  Element t;
  mpz_powm(t.get_mpz_t(), v.get_mpz_t(), gp.q.get_mpz_t(), gp.p.get_mpz_t());
  return t == 1;
}

bool InZpStar(const GroupParams& gp, const Element& v) {
  return v >= 1 && v < gp.p;
}

std::pair<Pair, Witness> SampleL(const GroupParams& gp, Rng& rng) {
  Witness w{rng.UniformBelow(gp.q)};
  Pair x{PowMod(gp, gp.g1, w.r), PowMod(gp, gp.g2, w.r)};
  return {std::move(x), std::move(w)};
}

Pair SampleXMinusL(const GroupParams& gp, Rng& rng) {
  mpz_class r1 = rng.UniformBelow(gp.q);
  // r2 uniform over Z_q \ {r1}
  mpz_class r2 = rng.UniformBelow(mpz_class(gp.q - 1));
  if (r2 >= r1) r2 += 1;
  return Pair{PowMod(gp, gp.g1, r1), PowMod(gp, gp.g2, r2)};
}

absl::StatusOr<bool> IsInL(const GroupParams& gp, const Pair& x) {
  if (!gp.Enumerable()) {
    return absl::FailedPreconditionError(
        "membership oracle unavailable: group too large to enumerate");
  }
  const uint64_t q = gp.q.get_ui();
  const uint64_t p = gp.p.get_ui();
  const uint64_t g1 = gp.g1.get_ui();
  const uint64_t g2 = gp.g2.get_ui();
  if (!InZpStar(gp, x.u1) || !InZpStar(gp, x.u2)) return false;
  const uint64_t u1 = x.u1.get_ui();
  const uint64_t u2 = x.u2.get_ui();
  uint64_t a = 1;
  uint64_t b = 1;
  for (uint64_t r = 0; r < q; ++r) {
    if (a == u1) return b == u2;
    a = a * g1 % p;
    b = b * g2 % p;
  }
  return false;
}

absl::StatusOr<Element> SqrtInG(const GroupParams& gp, const Element& y) {
  if (!InSubgroup(gp, y)) {
    return absl::InvalidArgumentError("sqrt_in_G: argument not in G");
  }
  return PowMod(gp, y, mpz_class((gp.q + 1) / 2));
}

Pair SquarePair(const GroupParams& gp, const Pair& y_prime) {
  return Pair{SquareMod(gp, y_prime.u1), SquareMod(gp, y_prime.u2)};
}

Bytes EncodeElement(const GroupParams& gp, const Element& v) {
  return ExportFixed(v, gp.ElementBytes());
}

absl::StatusOr<Element> DecodeElement(const GroupParams& gp,
                                      std::span<const uint8_t> in) {
  if (in.size() != gp.ElementBytes()) {
    return absl::InvalidArgumentError("element has wrong width");
  }
  Element v = Import(in);
  if (!InZpStar(gp, v)) {
    return absl::InvalidArgumentError("element outside [1, p-1]");
  }
  return v;
}

Bytes SerializeGroupParams(const GroupParams& gp) {
  const size_t w = gp.ElementBytes();
  FieldWriter fw;
  fw.Add(ExportFixed(gp.p, w))
      .Add(ExportFixed(gp.q, w))
      .Add(ExportFixed(gp.g1, w))
      .Add(ExportFixed(gp.g2, w));
  return std::move(fw).bytes();
}

absl::StatusOr<GroupParams> ParseGroupParams(std::span<const uint8_t> in) {
  FieldReader fr(in);
  GroupParams gp;
  mpz_class* slots[] = {&gp.p, &gp.q, &gp.g1, &gp.g2};
  size_t width = 0;
  for (mpz_class* slot : slots) {
    auto field = fr.Next();
    if (!field.ok()) return field.status();
    if (width == 0) width = field->size();
    if (field->size() != width || width == 0) {
      return absl::InvalidArgumentError("group parameter widths differ");
    }
    *slot = Import(*field);
  }
  if (!fr.done()) return absl::InvalidArgumentError("trailing bytes");
  gp.bits = gp.q > 0 ? static_cast<int>(mpz_sizeinbase(gp.q.get_mpz_t(), 2))
                     : 0;
  if (gp.ElementBytes() != width) {
    return absl::InvalidArgumentError("group parameter width mismatch");
  }
  if (auto st = ValidateGroup(gp); !st.ok()) return st;
  return gp;
}

}  // namespace hpspake
