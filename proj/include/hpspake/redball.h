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

#ifndef HPSPAKE_REDBALL_H_
#define HPSPAKE_REDBALL_H_

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "absl/status/statusor.h"
#include "hpspake/parallel.h"

namespace hpspake {

// n boxes; box i holds a_i balls of which exactly one is red. A player draws
// t balls without replacement, choosing the box adaptively, and wins on
// collecting ell red balls. A box whose red ball is found is retired.
struct RedBallInstance {
  std::vector<int> boxes;
  int t = 0;
  int ell = 0;

  // Requires a_i >= 1, t >= 0 and 0 <= ell <= n. Box order is kept.
  static absl::StatusOr<RedBallInstance> Make(std::vector<int> boxes, int t,
                                              int ell);
};

struct BoundParams {
  double alpha = 0;
  double beta() const { return 2 * (0.5 - alpha) * (0.5 - alpha); }

  static absl::StatusOr<BoundParams> Make(double alpha);
};

// Optimal success probability by exhaustive recursion over strategies:
//   V(t, B, l) = max_j [ V(t-1, B \ {j}, l-1) / a_j
//                        + (1 - 1/a_j) V(t-1, B with a_j - 1, l) ]
// with V(., ., 0) = 1 and V(0, ., l >= 1) = 0, memoized on
// (t, l, sorted B). One solver's memo is shared by all queries made on it.
class RedBallSolver {
 public:
  explicit RedBallSolver(size_t state_limit = size_t{1} << 22)
      : state_limit_(state_limit) {}

  absl::StatusOr<mpq_class> Value(int t, int ell, std::vector<int> boxes);
  size_t states() const { return memo_.size(); }

 private:
  const mpq_class& Solve(int t, int ell, const std::vector<int>& sorted);

  size_t state_limit_;
  bool overflow_ = false;
  std::unordered_map<std::string, mpq_class> memo_;
  mpq_class zero_ = 0;
  mpq_class one_ = 1;
};

absl::StatusOr<mpq_class> ThetaOptimalDp(const RedBallInstance& inst,
                                         size_t state_limit = size_t{1} << 22);

// Pr[x_1 + ... + x_ell <= t] for independent x_i uniform on {1..a_i} over
// the ell smallest boxes, by exact convolution.
mpq_class ThetaClosedForm(const RedBallInstance& inst);

struct SimulationResult {
  uint64_t trials = 0;
  uint64_t successes = 0;
  double frequency = 0;
  double sigma = 0;  // binomial standard error of the frequency

  double radius() const { return 3 * sigma; }
};

// Monte Carlo of the box-by-box strategy: exhaust the smallest box until its
// red ball appears, then move to the next.
SimulationResult SimulateGreedy(const RedBallInstance& inst, uint64_t trials,
                                uint64_t seed,
                                ExecutionPolicy policy = ExecutionPolicy::kParallel);

// exp(-2 (0.5 - alpha)^2 ell); `box_size` is carried for the caller's
// t < alpha * ell * a precondition.
absl::StatusOr<double> HoeffdingBound(int box_size, const BoundParams& bp,
                                      int ell);

// Exact DP == closed form over every ascending box vector with
// n <= max_n, a_i <= max_a, all ell <= n and all t <= max_t.
struct OptimalPlayGridReport {
  uint64_t vectors = 0;
  uint64_t cells = 0;
  uint64_t mismatches = 0;
  std::vector<std::string> failures;  // first few offending cells
};

OptimalPlayGridReport CheckOptimalPlayGrid(int max_n, int max_a, int max_t,
                                 ExecutionPolicy policy = ExecutionPolicy::kParallel);

struct TailBoundCell {
  int a = 0;
  int ell = 0;
  mpq_class alpha;
  int t = 0;  // ceil(alpha * ell * a) - 1
  mpq_class closed_form;
  double bound = 0;
  bool holds = false;
};

std::vector<TailBoundCell> CheckTailBoundGrid(const std::vector<int>& box_sizes,
                                            const std::vector<int>& ells,
                                            const std::vector<mpq_class>& alphas);

std::vector<std::vector<int>> AscendingBoxVectors(int n, int max_a);

}  // namespace hpspake

#endif  // HPSPAKE_REDBALL_H_
