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

#ifndef ADVSI_DEFENDER_H_
#define ADVSI_DEFENDER_H_

#include <span>
#include <vector>

#include "advsi/pmf.h"

namespace advsi {

// Minimum of h_ratio(p_v, P') over a convex set of candidate cleaned training
// pmfs P', with the minimizing P'.
struct CleanedMinimum {
  double value;
  Pmf p_prime;
};

// P' ranges over the simplex intersected with the box P' <= upper.
// Requires sum(upper) >= 1.
CleanedMinimum MinHcOverBox(const Pmf& p_v, std::span<const double> upper,
                            double ratio);

// P' ranges over the simplex intersected with the L1 ball of `radius`
// around `center`.
CleanedMinimum MinHcOverBall(const Pmf& p_v, const Pmf& center, double radius,
                             double ratio);

struct AdditionStatistic {
  double value;
  Pmf q;        // fake-sample pmf the defender attributes to the attacker
  Pmf cleaned;  // (P_t - alpha q) / (1 - alpha)
};

// min over Q with P_t - alpha Q >= 0 of h_{(1-alpha)c}(P_v, (P_t - alpha Q)/(1-alpha)).
AdditionStatistic StatisticAddition(const Pmf& p_v, const Pmf& p_t,
                                    double alpha, double c);

struct ReplacementStatistic {
  double value;
  Pmf q_r;
  Pmf q_a;
  Pmf cleaned;  // P_t + alpha (q_r - q_a)
};

// min over (Q_R, Q_A) of h_c(P_v, P_t + alpha (Q_R - Q_A)), computed over the
// equivalent set {P' : l1(P', P_t) <= 2 alpha}.
ReplacementStatistic StatisticReplacement(const Pmf& p_v, const Pmf& p_t,
                                          double alpha, double c);

// Statistic of the configured variant.
double DefenderStatistic(const Pmf& p_v, const Pmf& p_t, const GameConfig& cfg);

// lambda - delta_n in finite-n mode, lambda in asymptotic mode.
double DecisionThreshold(std::int64_t n, const GameConfig& cfg);

struct DecisionOutcome {
  double statistic;
  double threshold;
  bool accept_h0;
  // Set when threshold <= 0: the acceptance region is empty.
  bool degenerate_threshold;
  // {Q} for Addition, {Q_R, Q_A} for Replacement.
  std::vector<Pmf> minimizer;
};

// Throws std::domain_error if t.n differs from c v.n by more than one sample
// or the alphabets differ.
DecisionOutcome Decide(const EmpiricalType& v, const EmpiricalType& t,
                       const GameConfig& cfg);

}  // namespace advsi

#endif  // ADVSI_DEFENDER_H_
