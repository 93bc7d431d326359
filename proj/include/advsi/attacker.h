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

#ifndef ADVSI_ATTACKER_H_
#define ADVSI_ATTACKER_H_

#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "advsi/pmf.h"
#include "advsi/transport.h"

namespace advsi {

struct AttackResult {
  // Addition: pmf Q of the fake samples. Replacement: the whole corrupted
  // training pmf. attack_test leaves the training untouched and reports it.
  Pmf fake_training;
  // Training pmf the defender observes after the corruption.
  Pmf corrupted_training;
  TransportMap transport;
  Pmf attacked_pmf;  // column marginal of transport
  // Defender statistic on (attacked_pmf, corrupted_training).
  double achieved_statistic;
};

// Best distortion-constrained attack on the test pmf for a fixed training
// pmf P_t, against the statistic of cfg.variant.
AttackResult AttackTest(const Pmf& p_y, const Pmf& p_t, const GameConfig& cfg,
                        const CostMatrix& cost);

// Joint choice of fake samples Q and transport map against the clean
// training pmf P_tau (Addition).
AttackResult AttackTargetedAddition(const Pmf& p_tau, const Pmf& p_y,
                                    const GameConfig& cfg,
                                    const CostMatrix& cost);

// Joint choice of the corrupted training pmf (within L1 distance 2 alpha of
// P_tau) and transport map (Replacement).
AttackResult AttackTargetedReplacement(const Pmf& p_tau, const Pmf& p_y,
                                       const GameConfig& cfg,
                                       const CostMatrix& cost);

// Targeted attack of the configured variant.
AttackResult AttackTargeted(const Pmf& p_tau, const Pmf& p_y,
                            const GameConfig& cfg, const CostMatrix& cost);

// Transport of P_y, within budget L, whose column marginal is closest in L1
// to `goal`.
TransportMap ClosestTransport(const Pmf& p_y, const Pmf& goal, double L,
                              const CostMatrix& cost);

// Two-step attack: the training corruption is optimized against the model
// P_Y instead of the observed test pmf, then the observed pmf is moved as
// close as possible to the attacked pmf planned in the first step. Step-one
// results are cached per clean training pmf; the cache is guarded so the
// object may be shared between threads.
class NonTargetedAttacker {
 public:
  NonTargetedAttacker(Pmf p_y_model, GameConfig cfg, CostMatrix cost);

  // Step one: targeted attack on (P_tau, P_Y model).
  AttackResult Plan(const Pmf& p_tau) const;
  AttackResult Attack(const Pmf& p_tau, const Pmf& p_y_observed) const;

  std::size_t cache_size() const;

 private:
  Pmf p_y_model_;
  GameConfig cfg_;
  CostMatrix cost_;
  mutable std::mutex mu_;
  mutable std::map<std::vector<double>, AttackResult> cache_;
};

AttackResult AttackNonTargetedAddition(const Pmf& p_tau, const Pmf& p_y_model,
                                       const Pmf& p_y_observed,
                                       const GameConfig& cfg,
                                       const CostMatrix& cost);

// Convex pieces shared with the analysis module.
namespace internal {

// Candidate cleaned training pmfs: simplex intersected with a box P' <= upper
// or with an L1 ball.
struct TrainingSet {
  bool is_ball = false;
  std::vector<double> upper;   // box
  std::vector<double> center;  // ball
  double radius = 0.0;         // ball
};

struct JointSolution {
  double value;  // bits, as returned by the convex solver
  TransportMap transport;
  Pmf p_prime;
};

// min h_ratio(col marginal of S, P') over S in A(L, P_y) and P' in `set`.
JointSolution SolveJoint(const Pmf& p_y, const CostMatrix& cost, double L,
                         double ratio, const TrainingSet& set);

}  // namespace internal
}  // namespace advsi

#endif  // ADVSI_ATTACKER_H_
