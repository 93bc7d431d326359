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

#ifndef ADVSI_ANALYSIS_H_
#define ADVSI_ANALYSIS_H_

#include "advsi/pmf.h"
#include "advsi/transport.h"

namespace advsi {

// Numerical slack used to classify boundary points as members.
inline constexpr double kMembershipSlack = 1e-11;

// Membership of P in the no-distortion indistinguishability region of R.
// lambda = 0 checks l1(P, R) <= 2 alpha / (1 - alpha) (Addition) or 4 alpha
// (Replacement); lambda > 0 checks that some training pmf reachable from R
// brings the defender statistic of P to at most lambda. The statistic weight
// is (1 - alpha) c for Addition and c for Replacement.
bool Gamma0Membership(const Pmf& p, const Pmf& r, double lambda, double alpha,
                      double c, Variant variant);

// min over V with EMD(P, V) <= L of l1(V, target), with the minimizing V.
struct ClosestWithinBudget {
  double l1;
  Pmf v;
};
ClosestWithinBudget MinL1WithinEmd(const Pmf& p, const Pmf& target, double L,
                                   const CostMatrix& cost);

// Membership of P in the ultimate (lambda -> 0) indistinguishability region
// of P_X with corruption cfg.alpha and distortion budget cfg.L.
bool IndistMembership(const Pmf& p, const Pmf& p_x, const GameConfig& cfg,
                      const CostMatrix& cost);

// Membership of P in the region of P_X at the configured lambda > 0: the
// targeted attack brings the statistic to at most lambda. Falls back to
// IndistMembership when lambda = 0.
bool GammaMembership(const Pmf& p, const Pmf& p_x, const GameConfig& cfg,
                     const CostMatrix& cost);

// Smallest corruption level at which P_X and P_Y become indistinguishable
// without distortion: d / (2 + d) for Addition, d / 4 for Replacement, with
// d = l1(P_X, P_Y).
double BlindingLevel(const Pmf& p_x, const Pmf& p_y, Variant variant);

struct SecurityMarginResult {
  double margin;
  double alpha_blinding;
  bool at_blinding;  // P_Y already inside the no-distortion region
  Pmf witness_v;
};

// Largest distortion budget under which P_X and P_Y remain distinguishable at
// corruption level alpha in [0, 1/2].
SecurityMarginResult SecurityMargin(const Pmf& p_x, const Pmf& p_y,
                                    double alpha, const CostMatrix& cost,
                                    Variant variant);

struct ExponentResult {
  double exponent;  // bits; +inf when no pmf can be disguised
  Pmf minimizer_r;
  Pmf minimizer_p;
};

// Equilibrium false-negative error exponent
//   min_R [c' D(R || P_X) + min_{P in Gamma(R)} D(P || P_Y)]
// with c' = (1 - alpha) c (Addition) or c (Replacement).
ExponentResult ErrorExponent(const Pmf& p_x, const Pmf& p_y,
                             const GameConfig& cfg, const CostMatrix& cost);

}  // namespace advsi

#endif  // ADVSI_ANALYSIS_H_
