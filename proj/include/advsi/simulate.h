// Copyright 2026 The advsi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ADVSI_SIMULATE_H_
#define ADVSI_SIMULATE_H_

#include <cstdint>
#include <functional>
#include <vector>

#include "advsi/pmf.h"
#include "advsi/transport.h"

namespace advsi {

struct SimulationReport {
  std::int64_t n = 0;
  std::int64_t trials = 0;
  std::int64_t fp_count = 0;
  std::int64_t fn_count = 0;
  double p_fp_hat = 0.0;
  double p_fn_hat = 0.0;
  // -log2(p_hat) / n; +inf when the count is zero (censored).
  double fp_exponent_hat = 0.0;
  double fn_exponent_hat = 0.0;
  std::uint64_t seed = 0;
  GameConfig config_echo;
  // alpha > 0 but round(alpha m) = 0: no training sample is corrupted.
  bool fake_samples_rounded_to_zero = false;
  // lambda - delta_n <= 0 in finite-n mode: H0 is always rejected.
  bool degenerate_threshold = false;

  bool fp_censored() const { return fp_count == 0; }
  bool fn_censored() const { return fn_count == 0; }
};

struct SimulationOptions {
  // 0 picks std::thread::hardware_concurrency().
  int threads = 0;
};

// Monte Carlo estimate of the false positive and false negative rates of the
// game at test length n. Every trial draws one H0 and one H1 instance from its
// own random stream, so the report depends only on (inputs, seed).
SimulationReport RunGameTrials(const Pmf& p_x, const Pmf& p_y,
                               const GameConfig& cfg, const CostMatrix& cost,
                               std::int64_t n, std::int64_t trials,
                               std::uint64_t seed,
                               const SimulationOptions& options = {});

// One report per n, each run with its own stream of `seed`.
std::vector<SimulationReport> ExponentSweep(
    const Pmf& p_x, const Pmf& p_y, const GameConfig& cfg,
    const CostMatrix& cost, const std::vector<std::int64_t>& n_list,
    std::int64_t trials, std::uint64_t seed,
    const SimulationOptions& options = {});

using PmfPredicate = std::function<bool(const Pmf&)>;

struct SanovPoint {
  std::int64_t n;
  std::int64_t hits;
  double empirical_exponent;  // +inf when censored
  double divergence_bound;
  bool censored;
};

// min D(Q || P) over Q satisfying the predicate: grid search (step 1e-5 for
// K = 2, a lattice for K >= 3) refined by a local pattern search.
double MinDivergenceOver(const Pmf& p, const PmfPredicate& in_set);

// Frequency with which the type of n i.i.d. draws from P falls in the set,
// turned into an exponent estimate, for each n.
std::vector<SanovPoint> SanovProbe(const Pmf& p, const PmfPredicate& in_set,
                                   const std::vector<std::int64_t>& n_list,
                                   std::int64_t trials, std::uint64_t seed,
                                   const SimulationOptions& options = {});

// Hausdorff distance between finite sets of pmfs under the L1 metric.
double HausdorffDistance(const std::vector<Pmf>& a, const std::vector<Pmf>& b);

// Integer realization of a corrupted training pmf under Replacement: counts
// summing to sum(clean) that differ from `clean` by at most `budget` replaced
// samples and are as close as rounding allows to target * sum(clean).
std::vector<std::int64_t> ReplacementCounts(
    const std::vector<std::int64_t>& clean, const Pmf& target,
    std::int64_t budget);

// Integer counts of an attacked test sequence: the rows of `s` are rounded to
// the observed counts and, if rounding broke the budget n L, the most
// expensive moved samples are put back until it holds.
std::vector<std::int64_t> RealizeAttack(const TransportMap& s,
                                        const std::vector<std::int64_t>& counts,
                                        double L, const CostMatrix& cost);

}  // namespace advsi

#endif  // ADVSI_SIMULATE_H_
