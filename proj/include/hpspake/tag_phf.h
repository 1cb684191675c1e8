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

#ifndef HPSPAKE_TAG_PHF_H_
#define HPSPAKE_TAG_PHF_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>

#include "absl/status/statusor.h"
#include "hpspake/bytes.h"
#include "hpspake/group.h"
#include "hpspake/parallel.h"
#include "hpspake/primitives.h"
#include "hpspake/rng.h"

namespace hpspake {

// desc(Psi) plus the symmetric-key profile: group, hash index lambda,
// security parameter kappa, and which KDF is in use.
struct PhfParams {
  GroupParams gp;
  HashIndex idx;
  size_t kappa = kDemoKappa;
  KdfMode kdf = KdfMode::kHash;
};

// Toy profile: q < 2^bits <= 2^16, least-bits KDF, kappa = 8. Membership and
// universal_2 oracles are available.
absl::StatusOr<PhfParams> MakeToyParams(int bits, uint64_t seed);
// Demo profile: 2048-bit MODP prime, SHA-256 KDF, kappa = 128.
PhfParams MakeDemoParams(uint64_t seed);
// Generated safe-prime group of the given size with the demo KDF. Used by
// the Monte Carlo experiments, where thousands of sessions must be cheap.
absl::StatusOr<PhfParams> MakeHashedParams(int bits, uint64_t seed,
                                           size_t kappa = kDemoKappa);

// theta = (a1, a2, b1, b2) in Z_q^4.
struct PhfSecretKey {
  mpz_class a1, a2, b1, b2;
  friend bool operator==(const PhfSecretKey&, const PhfSecretKey&) = default;
};

// Theta = alpha(theta) = (g1^a1 g2^a2, g1^b1 g2^b2).
struct Projection {
  Element theta1, theta2;
  friend bool operator==(const Projection&, const Projection&) = default;
};

std::pair<PhfSecretKey, Projection> Keygen(const PhfParams& pp, Rng& rng);
Projection Project(const PhfParams& pp, const PhfSecretKey& sk);

mpz_class Tau(const PhfParams& pp, std::span<const uint8_t> tag, const Pair& x);

// u1^(a1 + b1 tau) * u2^(a2 + b2 tau): the hash value before the KDF.
Element PreKdfValue(const GroupParams& gp, const PhfSecretKey& sk,
                    const mpz_class& tau, const Pair& x);

// H_theta(tag, x), defined on all of X.
KeyMaterial HashPrivate(const PhfParams& pp, const PhfSecretKey& sk,
                        std::span<const uint8_t> tag, const Pair& x);
// KDF((Theta1 Theta2^tau)^w). Fails when x != (g1^w, g2^w).
absl::StatusOr<KeyMaterial> HashPublic(const PhfParams& pp,
                                       const Projection& proj,
                                       std::span<const uint8_t> tag,
                                       const Pair& x, const Witness& w);
// Same, trusting the caller that (x, w) is in R. Two exponentiations.
KeyMaterial HashPublicUnchecked(const PhfParams& pp, const Projection& proj,
                                std::span<const uint8_t> tag, const Pair& x,
                                const Witness& w);

Bytes SerializeSecretKey(const PhfParams& pp, const PhfSecretKey& sk);
absl::StatusOr<PhfSecretKey> ParseSecretKey(const PhfParams& pp,
                                            std::span<const uint8_t> in);
Bytes SerializeProjection(const PhfParams& pp, const Projection& proj);
absl::StatusOr<Projection> ParseProjection(const PhfParams& pp,
                                           std::span<const uint8_t> in);

// ---------------------------------------------------------------------------
// Exhaustive universal_2 check (toy profile only).
//
// Fixes a reference key, its projection, and the pre-KDF value at
// (tag1, x1). Enumerates all q^4 keys, keeps those consistent with both, and
// tallies the pre-KDF value each one gives at (tag2, x2).

struct Universal2Case {
  Bytes tag1;
  Pair x1;
  Bytes tag2;
  Pair x2;
  PhfSecretKey reference_key;
  // Replaces h_lambda at the second point; used to inject tau collisions.
  std::optional<mpz_class> tau2_override;
};

Universal2Case SampleUniversal2Case(const PhfParams& pp, Rng& rng);

struct Universal2Report {
  uint64_t q = 0;
  mpz_class tau1, tau2;
  bool x1_in_l = false;
  bool x2_in_l = false;
  bool degenerate = false;  // tau1 == tau2: excluded from the verdict
  uint64_t keys_enumerated = 0;
  uint64_t consistent_keys = 0;
  std::map<uint64_t, uint64_t> histogram;  // pre-KDF value -> #keys
  size_t support = 0;
  bool uniform_over_g = false;  // every element of G hit equally often
  bool pass = false;

  std::string Summary() const;
  std::string Csv() const;
};

absl::StatusOr<Universal2Report> VerifyUniversal2Exhaustive(
    const PhfParams& pp, const Universal2Case& c,
    ExecutionPolicy policy = ExecutionPolicy::kParallel);

// ---------------------------------------------------------------------------
// Local 1-uniqueness: over random adversarial (z, y), how often do the first
// kappa bits of H(z, T*(pi1, y)) and H(z, T*(pi2, y)) agree for pi1 != pi2?

struct LocalUniquenessReport {
  uint64_t trials = 0;
  uint64_t dictionary_size = 0;
  uint64_t pairs = 0;
  uint64_t collisions = 0;
  double rate = 0;
  // Collision probability of two independent KDF prefixes of uniform G
  // elements; exact for enumerable groups, 2^-kappa otherwise.
  double expected_rate = 0;
  // Statistical distance of the KDF prefix from uniform (exact when
  // enumerable, 0 assumed for the hash KDF).
  double delta = 0;
  double bound = 0;  // 2 delta + 2^-kappa
  double sigma = 0;
  bool pass = false;

  std::string Summary() const;
};

LocalUniquenessReport VerifyLocal1Uniqueness(
    const PhfParams& pp, const PhfSecretKey& sk, uint64_t dictionary_size,
    uint64_t trials, uint64_t seed,
    ExecutionPolicy policy = ExecutionPolicy::kParallel);

}  // namespace hpspake

#endif  // HPSPAKE_TAG_PHF_H_
