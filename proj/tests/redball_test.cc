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

#include <algorithm>
#include <cmath>
#include <functional>

#include "hpspake/redball.h"

namespace hpspake {
namespace {

mpq_class Q(long n, long d) {
  mpq_class v(n, d);
  v.canonicalize();
  return v;
}

// Independent oracle: plays every strategy over the explicit set of red-ball
// positions still consistent with what has been seen.
mpq_class BruteForce(int t, int ell, std::vector<int> remaining,
                     std::vector<int> found) {
  if (ell == 0) return 1;
  if (t == 0) return 0;
  mpq_class best = 0;
  for (size_t j = 0; j < remaining.size(); ++j) {
    if (found[j] || remaining[j] == 0) continue;
    // Red ball uniform among the remaining balls of box j.
    mpq_class hit(1, remaining[j]);
    std::vector<int> r = remaining;
    std::vector<int> f = found;
    f[j] = 1;
    mpq_class v = hit * BruteForce(t - 1, ell - 1, r, f);
    if (remaining[j] > 1) {
      r = remaining;
      --r[j];
      v += (1 - hit) * BruteForce(t - 1, ell, r, found);
    }
    if (v > best) best = v;
  }
  return best;
}

struct Known {
  std::vector<int> boxes;
  int t, ell;
  mpq_class value;
};

TEST(RedBall, KnownValues) {
  const std::vector<Known> cases = {
      {{2, 2}, 3, 2, Q(3, 4)},      {{2, 3, 5}, 4, 2, Q(5, 6)},
      {{3, 4, 5}, 5, 2, Q(3, 4)},   {{2, 3, 4}, 6, 3, Q(5, 8)},
      {{3, 3, 3}, 4, 2, Q(2, 3)},   {{4, 4, 4}, 7, 3, Q(1, 2)},
      {{1, 1, 6}, 3, 3, Q(1, 6)},   {{6, 6}, 5, 2, Q(5, 18)},
      {{1, 2, 3}, 4, 2, Q(1, 1)},
  };
  for (const Known& k : cases) {
    auto inst = *RedBallInstance::Make(k.boxes, k.t, k.ell);
    EXPECT_EQ(*ThetaOptimalDp(inst), k.value);
    EXPECT_EQ(ThetaClosedForm(inst), k.value);
  }
}

TEST(RedBall, DpMatchesBruteForceOracle) {
  for (int n = 1; n <= 3; ++n) {
    for (const auto& boxes : AscendingBoxVectors(n, 4)) {
      for (int ell = 0; ell <= n; ++ell) {
        for (int t = 0; t <= 9; ++t) {
          auto inst = *RedBallInstance::Make(boxes, t, ell);
          mpq_class oracle =
              BruteForce(t, ell, boxes, std::vector<int>(boxes.size(), 0));
          ASSERT_EQ(*ThetaOptimalDp(inst), oracle);
        }
      }
    }
  }
}

TEST(RedBall, BoundaryCases) {
  auto inst = *RedBallInstance::Make({3, 5}, 0, 0);
  EXPECT_EQ(*ThetaOptimalDp(inst), 1);
  EXPECT_EQ(ThetaClosedForm(inst), 1);
  inst = *RedBallInstance::Make({3, 5}, 1, 2);  // t < ell
  EXPECT_EQ(*ThetaOptimalDp(inst), 0);
  EXPECT_EQ(ThetaClosedForm(inst), 0);
  inst = *RedBallInstance::Make({3, 5}, 8, 2);  // enough draws for everything
  EXPECT_EQ(*ThetaOptimalDp(inst), 1);
  EXPECT_EQ(ThetaClosedForm(inst), 1);
}

TEST(RedBall, InvalidInstancesRefused) {
  EXPECT_FALSE(RedBallInstance::Make({0, 2}, 1, 1).ok());
  EXPECT_FALSE(RedBallInstance::Make({2, 2}, -1, 1).ok());
  EXPECT_FALSE(RedBallInstance::Make({2, 2}, 1, 3).ok());
  EXPECT_FALSE(BoundParams::Make(0.5).ok());
  EXPECT_FALSE(BoundParams::Make(0.7).ok());
  EXPECT_FALSE(BoundParams::Make(0.0).ok());
  EXPECT_TRUE(BoundParams::Make(0.3).ok());
}

TEST(RedBall, PermutationInvariant) {
  std::vector<int> boxes{5, 2, 4, 3};
  std::vector<int> sorted = boxes;
  std::sort(sorted.begin(), sorted.end());
  mpq_class ref = *ThetaOptimalDp(*RedBallInstance::Make(sorted, 7, 3));
  do {
    auto inst = *RedBallInstance::Make(boxes, 7, 3);
    ASSERT_EQ(*ThetaOptimalDp(inst), ref);
    ASSERT_EQ(ThetaClosedForm(inst), ref);
  } while (std::next_permutation(boxes.begin(), boxes.end()));
}

TEST(RedBall, StateLimitReported) {
  auto inst = *RedBallInstance::Make({6, 6, 6, 6, 6}, 20, 5);
  auto v = ThetaOptimalDp(inst, 10);
  EXPECT_EQ(v.status().code(), absl::StatusCode::kResourceExhausted);
}

TEST(RedBall, SmallOptimalPlayGrid) {
  OptimalPlayGridReport rep = CheckOptimalPlayGrid(3, 4, 10, ExecutionPolicy::kSerial);
  EXPECT_EQ(rep.mismatches, 0u);
  EXPECT_EQ(rep.vectors, 4u + 10u + 20u);  // multisets of size 1..3 from 4
  EXPECT_GT(rep.cells, 0u);
}

TEST(RedBall, OptimalPlayGridSerialMatchesParallel) {
  OptimalPlayGridReport a = CheckOptimalPlayGrid(3, 5, 12, ExecutionPolicy::kSerial);
  OptimalPlayGridReport b = CheckOptimalPlayGrid(3, 5, 12, ExecutionPolicy::kParallel);
  EXPECT_EQ(a.vectors, b.vectors);
  EXPECT_EQ(a.cells, b.cells);
  EXPECT_EQ(a.mismatches, b.mismatches);
}

TEST(RedBall, AscendingVectorsCount) {
  // C(max_a + n - 1, n)
  EXPECT_EQ(AscendingBoxVectors(2, 6).size(), 21u);
  EXPECT_EQ(AscendingBoxVectors(5, 6).size(), 252u);
  for (const auto& v : AscendingBoxVectors(3, 3)) {
    EXPECT_TRUE(std::is_sorted(v.begin(), v.end()));
  }
}

TEST(RedBall, SimulationAgreesWithClosedForm) {
  auto inst = *RedBallInstance::Make({4, 4, 4, 4, 4}, 10, 4);
  double exact = ThetaClosedForm(inst).get_d();
  SimulationResult sim = SimulateGreedy(inst, 40000, 3);
  EXPECT_EQ(sim.trials, 40000u);
  EXPECT_NEAR(sim.frequency, exact, sim.radius());
}

TEST(RedBall, SimulationIndependentOfPolicy) {
  auto inst = *RedBallInstance::Make({3, 5, 7}, 8, 2);
  SimulationResult a = SimulateGreedy(inst, 10000, 9, ExecutionPolicy::kSerial);
  SimulationResult b = SimulateGreedy(inst, 10000, 9, ExecutionPolicy::kParallel);
  EXPECT_EQ(a.successes, b.successes);
}

TEST(RedBall, HoeffdingBoundValue) {
  auto bp = *BoundParams::Make(0.3);
  EXPECT_NEAR(bp.beta(), 0.08, 1e-15);
  EXPECT_NEAR(*HoeffdingBound(32, bp, 10), std::exp(-0.8), 1e-15);
}

TEST(RedBall, TailBoundSmallGrid) {
  auto cells = CheckTailBoundGrid({4, 8}, {5, 10}, {Q(1, 10), Q(2, 5)});
  ASSERT_EQ(cells.size(), 8u);
  for (const auto& c : cells) {
    EXPECT_TRUE(c.holds) << "a=" << c.a << " ell=" << c.ell;
    EXPECT_LT(c.closed_form.get_d(), c.bound);
  }
  // a=4, ell=5, alpha=1/10: t = ceil(2) - 1 = 1
  EXPECT_EQ(cells[0].t, 1);
}

}  // namespace
}  // namespace hpspake
