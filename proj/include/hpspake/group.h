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

#ifndef HPSPAKE_GROUP_H_
#define HPSPAKE_GROUP_H_

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <utility>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "hpspake/bytes.h"
#include "hpspake/rng.h"

namespace hpspake {

// An element of Z_p^*. Members of the order-q subgroup G are the quadratic
// residues mod p.
using Element = mpz_class;

// Safe-prime group p = 2q + 1 with two generators of the order-q subgroup.
struct GroupParams {
  mpz_class p;
  mpz_class q;
  mpz_class g1;
  mpz_class g2;
  int bits = 0;  // bit length of q

  size_t ElementBytes() const;
  bool Enumerable() const;

  friend bool operator==(const GroupParams&, const GroupParams&) = default;
};

// x = (u1, u2) in X = G x G.
struct Pair {
  Element u1;
  Element u2;

  friend bool operator==(const Pair&, const Pair&) = default;
};

struct Witness {
  mpz_class r;
};

// Groups with q at or below this bound get the exponential-time
// membership oracle (the "toy" profile).
inline constexpr uint64_t kEnumerationLimit = uint64_t{1} << 16;

// Per-thread instrumentation of the expensive group operations.
// Membership checks (u^q == 1) are tallied separately from exponentiations.
struct OpCounters {
  uint64_t exponentiations = 0;
  uint64_t membership_checks = 0;
  uint64_t squarings = 0;
  uint64_t multiplications = 0;
};
OpCounters& ThreadOpCounters();
void ResetOpCounters();

// Seeded search for a safe prime with a `bits`-bit q, then seeded generators
// g = h^2 mod p (h uniform, retried while g == 1 or g1 == g2).
absl::StatusOr<GroupParams> GenerateGroup(int bits,
                                          std::span<const uint8_t> seed,
                                          int max_iterations = 1 << 20);
absl::StatusOr<GroupParams> GenerateGroup(int bits, uint64_t seed);

// The 2048-bit MODP safe prime of RFC 3526 with seeded generators.
GroupParams Modp2048Group(uint64_t seed);

absl::Status ValidateGroup(const GroupParams& gp);

Element PowMod(const GroupParams& gp, const Element& base,
               const mpz_class& exponent);
Element MulMod(const GroupParams& gp, const Element& a, const Element& b);
Element SquareMod(const GroupParams& gp, const Element& a);
Element InvMod(const GroupParams& gp, const Element& a);
bool InSubgroup(const GroupParams& gp, const Element& v);
bool InZpStar(const GroupParams& gp, const Element& v);

std::pair<Pair, Witness> SampleL(const GroupParams& gp, Rng& rng);
Pair SampleXMinusL(const GroupParams& gp, Rng& rng);

// Test-only membership oracle: one discrete log by enumeration.
// Fails with FailedPrecondition when q exceeds kEnumerationLimit.
absl::StatusOr<bool> IsInL(const GroupParams& gp, const Pair& x);

// s with s^2 = y, computed as y^((q+1)/2). y must lie in G.
absl::StatusOr<Element> SqrtInG(const GroupParams& gp, const Element& y);
Pair SquarePair(const GroupParams& gp, const Pair& y_prime);

// Fixed-width big-endian encoding of ElementBytes() bytes.
Bytes EncodeElement(const GroupParams& gp, const Element& v);
// Rejects wrong widths and values outside [1, p-1].
absl::StatusOr<Element> DecodeElement(const GroupParams& gp,
                                      std::span<const uint8_t> in);

Bytes SerializeGroupParams(const GroupParams& gp);
absl::StatusOr<GroupParams> ParseGroupParams(std::span<const uint8_t> in);

}  // namespace hpspake

#endif  // HPSPAKE_GROUP_H_
