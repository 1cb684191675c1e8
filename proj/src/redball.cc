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

#include "hpspake/redball.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hpspake/rng.h"

namespace hpspake {
namespace {

std::string MemoKey(int t, int ell, const std::vector<int>& sorted) {
  std::string key;
  key.reserve(8 + sorted.size() * 2);
  auto put16 = [&key](int v) {
    key.push_back(static_cast<char>(v & 0xff));
    key.push_back(static_cast<char>((v >> 8) & 0xff));
  };
  put16(t);
  put16(ell);
  for (int a : sorted) put16(a);
  return key;
}

// Trials are split into fixed blocks, each with its own stream, so results
// do not depend on the thread count.
constexpr uint64_t kTrialBlock = 4096;

uint64_t GreedyBlock(const std::vector<int>& sorted, int t, int ell,
                     uint64_t seed, uint64_t block, uint64_t count) {
  Rng rng = Rng::FromSeed(seed, block);
  uint64_t wins = 0;
  for (uint64_t i = 0; i < count; ++i) {
    int draws = t;
    int reds = 0;
    for (int a : sorted) {
      if (reds == ell || draws == 0) break;
      for (int left = a; draws > 0; --left) {
        --draws;
        if (rng.UniformBelow(static_cast<uint64_t>(left)) == 0) {
          ++reds;
          break;
        }
      }
    }
    if (reds >= ell) ++wins;
  }
  return wins;
}

void AscendingRec(int n, int lo, int max_a, std::vector<int>& cur,
                  std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == n) {
    out.push_back(cur);
    return;
  }
  for (int a = lo; a <= max_a; ++a) {
    cur.push_back(a);
    AscendingRec(n, a, max_a, cur, out);
    cur.pop_back();
  }
}

}  // namespace

absl::StatusOr<RedBallInstance> RedBallInstance::Make(std::vector<int> boxes,
                                                      int t, int ell) {
  if (t < 0) return absl::InvalidArgumentError("t must be >= 0");
  if (ell < 0 || ell > static_cast<int>(boxes.size())) {
    return absl::InvalidArgumentError("ell must lie in [0, n]");
  }
  for (int a : boxes) {
    if (a < 1) return absl::InvalidArgumentError("box sizes must be >= 1");
  }
  return RedBallInstance{std::move(boxes), t, ell};
}

absl::StatusOr<BoundParams> BoundParams::Make(double alpha) {
  if (!(alpha > 0 && alpha < 0.5)) {
    return absl::InvalidArgumentError("alpha must lie in (0, 0.5)");
  }
  return BoundParams{alpha};
}

absl::StatusOr<mpq_class> RedBallSolver::Value(int t, int ell,
                                               std::vector<int> boxes) {
  std::sort(boxes.begin(), boxes.end());
  overflow_ = false;
  mpq_class v = Solve(t, ell, boxes);
  if (overflow_) {
    return absl::ResourceExhaustedError(
        "red-ball state space exceeds the configured limit");
  }
  return v;
}

const mpq_class& RedBallSolver::Solve(int t, int ell,
                                      const std::vector<int>& sorted) {
  if (ell == 0) return one_;
  // Every red ball costs at least one draw.
  if (t < ell || static_cast<int>(sorted.size()) < ell) return zero_;
  std::string key = MemoKey(t, ell, sorted);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  if (overflow_ || memo_.size() >= state_limit_) {
    overflow_ = true;
    return zero_;
  }

  mpq_class best = 0;
  std::vector<int> next;
  for (size_t j = 0; j < sorted.size(); ++j) {
    if (j > 0 && sorted[j] == sorted[j - 1]) continue;
    const int a = sorted[j];
    next = sorted;
    next.erase(next.begin() + static_cast<long>(j));
    mpq_class v = Solve(t - 1, ell - 1, next) / a;
    if (a > 1) {
      next = sorted;
      next[j] = a - 1;
      // Still ascending: sorted[j-1] < a, so a - 1 >= sorted[j-1].
      v += mpq_class(a - 1, a) * Solve(t - 1, ell, next);
    }
    v.canonicalize();
    if (v > best) best = v;
  }
  return memo_.emplace(std::move(key), std::move(best)).first->second;
}

absl::StatusOr<mpq_class> ThetaOptimalDp(const RedBallInstance& inst,
                                         size_t state_limit) {
  RedBallSolver solver(state_limit);
  return solver.Value(inst.t, inst.ell, inst.boxes);
}

mpq_class ThetaClosedForm(const RedBallInstance& inst) {
  if (inst.ell == 0) return mpq_class(1);
  std::vector<int> sorted = inst.boxes;
  std::sort(sorted.begin(), sorted.end());
  sorted.resize(inst.ell);

  // counts[s] = number of outcomes (x_1..x_k) with sum s.
  std::vector<mpz_class> counts{mpz_class(1)};
  mpz_class total = 1;
  for (int a : sorted) {
    std::vector<mpz_class> next(counts.size() + a, mpz_class(0));
    for (size_t s = 0; s < counts.size(); ++s) {
      if (counts[s] == 0) continue;
      for (int x = 1; x <= a; ++x) next[s + x] += counts[s];
    }
    counts = std::move(next);
    total *= a;
  }
  mpz_class good = 0;
  for (size_t s = 0; s < counts.size() && static_cast<int>(s) <= inst.t; ++s) {
    good += counts[s];
  }
  mpq_class out(good, total);
  out.canonicalize();
  return out;
}

SimulationResult SimulateGreedy(const RedBallInstance& inst, uint64_t trials,
                                uint64_t seed, ExecutionPolicy policy) {
  std::vector<int> sorted = inst.boxes;
  std::sort(sorted.begin(), sorted.end());
  const int64_t blocks =
      static_cast<int64_t>((trials + kTrialBlock - 1) / kTrialBlock);
  auto block_size = [&](int64_t b) {
    return std::min<uint64_t>(kTrialBlock, trials - b * kTrialBlock);
  };
  uint64_t wins = 0;
  if (policy == ExecutionPolicy::kSerial) {
    for (int64_t b = 0; b < blocks; ++b) {
      wins += GreedyBlock(sorted, inst.t, inst.ell, seed, b, block_size(b));
    }
  } else {
#pragma omp parallel for reduction(+ : wins) schedule(dynamic)
    for (int64_t b = 0; b < blocks; ++b) {
      wins += GreedyBlock(sorted, inst.t, inst.ell, seed, b, block_size(b));
    }
  }
  SimulationResult r;
  r.trials = trials;
  r.successes = wins;
  r.frequency = trials ? static_cast<double>(wins) / trials : 0.0;
  r.sigma = trials ? std::sqrt(r.frequency * (1 - r.frequency) / trials) : 0.0;
  return r;
}

absl::StatusOr<double> HoeffdingBound(int box_size, const BoundParams& bp,
                                      int ell) {
  if (!(bp.alpha > 0 && bp.alpha < 0.5)) {
    return absl::InvalidArgumentError("alpha must lie in (0, 0.5)");
  }
  if (box_size < 1 || ell < 0) {
    return absl::InvalidArgumentError("bad box size or ell");
  }
  return std::exp(-bp.beta() * ell);
}

std::vector<std::vector<int>> AscendingBoxVectors(int n, int max_a) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  AscendingRec(n, 1, max_a, cur, out);
  return out;
}

OptimalPlayGridReport CheckOptimalPlayGrid(int max_n, int max_a, int max_t,
                                 ExecutionPolicy policy) {
  std::vector<std::vector<int>> vectors;
  for (int n = 1; n <= max_n; ++n) {
    auto v = AscendingBoxVectors(n, max_a);
    vectors.insert(vectors.end(), v.begin(), v.end());
  }
  OptimalPlayGridReport rep;
  rep.vectors = vectors.size();

  auto check_vector = [&](const std::vector<int>& boxes, uint64_t& cells,
                          uint64_t& bad, std::vector<std::string>& notes) {
    RedBallSolver solver;
    const int n = static_cast<int>(boxes.size());
    for (int ell = 0; ell <= n; ++ell) {
      for (int t = 0; t <= max_t; ++t) {
        ++cells;
        RedBallInstance inst{boxes, t, ell};
        auto dp = solver.Value(t, ell, boxes);
        if (!dp.ok() || *dp != ThetaClosedForm(inst)) {
          ++bad;
          if (notes.size() < 8) {
            std::ostringstream os;
            os << "boxes=(";
            for (size_t i = 0; i < boxes.size(); ++i) {
              os << (i ? "," : "") << boxes[i];
            }
            os << ") t=" << t << " ell=" << ell;
            notes.push_back(os.str());
          }
        }
      }
    }
  };

  const int64_t count = static_cast<int64_t>(vectors.size());
  if (policy == ExecutionPolicy::kSerial) {
    for (int64_t i = 0; i < count; ++i) {
      check_vector(vectors[i], rep.cells, rep.mismatches, rep.failures);
    }
  } else {
    uint64_t cells = 0, bad = 0;
#pragma omp parallel reduction(+ : cells, bad)
    {
      std::vector<std::string> notes;
#pragma omp for schedule(dynamic)
      for (int64_t i = 0; i < count; ++i) {
        check_vector(vectors[i], cells, bad, notes);
      }
#pragma omp critical
      rep.failures.insert(rep.failures.end(), notes.begin(), notes.end());
    }
    rep.cells = cells;
    rep.mismatches = bad;
  }
  return rep;
}

std::vector<TailBoundCell> CheckTailBoundGrid(
    const std::vector<int>& box_sizes, const std::vector<int>& ells,
    const std::vector<mpq_class>& alphas) {
  std::vector<TailBoundCell> out;
  for (int a : box_sizes) {
    for (int ell : ells) {
      for (const mpq_class& alpha : alphas) {
        TailBoundCell c;
        c.a = a;
        c.ell = ell;
        c.alpha = alpha;
        mpq_class budget = alpha * ell * a;
        mpz_class ceil_budget;
        mpz_cdiv_q(ceil_budget.get_mpz_t(), budget.get_num_mpz_t(),
                   budget.get_den_mpz_t());
        c.t = static_cast<int>(ceil_budget.get_si()) - 1;
        RedBallInstance inst{std::vector<int>(ell, a), c.t, ell};
        c.closed_form = ThetaClosedForm(inst);
        c.bound = std::exp(-2.0 * std::pow(0.5 - alpha.get_d(), 2) * ell);
        c.holds = c.closed_form < mpq_class(c.bound);
        out.push_back(std::move(c));
      }
    }
  }
  return out;
}

}  // namespace hpspake
