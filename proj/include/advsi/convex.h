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

#ifndef ADVSI_CONVEX_H_
#define ADVSI_CONVEX_H_

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace advsi {

// Value of a smooth convex function with optional gradient and Hessian.
// Returns +inf (and leaves the outputs untouched) outside its domain.
using ConvexFunction = std::function<double(
    const Eigen::VectorXd& x, Eigen::VectorXd* grad, Eigen::MatrixXd* hess)>;

// minimize objective(x)
//   subject to G x <= h, nonlinear[i](x) <= 0, A x = b.
struct BarrierProblem {
  int num_vars = 0;
  ConvexFunction objective;
  Eigen::MatrixXd G;
  Eigen::VectorXd h;
  std::vector<ConvexFunction> nonlinear;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
};

struct BarrierOptions {
  // Stop once the duality gap bound (number of inequalities) / t is below this.
  double gap_tolerance = 1e-10;
  double mu = 16.0;
  int max_newton_per_center = 200;
  int max_outer = 60;
  // Stop as soon as a centered iterate has objective below this value.
  double stop_below = -std::numeric_limits<double>::infinity();
};

struct BarrierResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int newton_steps = 0;
  bool converged = false;
};

// Log-barrier interior point method. `x0` must satisfy the inequalities
// strictly and the equalities up to rounding; the Newton steps correct any
// equality residual.
BarrierResult SolveBarrier(const BarrierProblem& problem,
                           const Eigen::VectorXd& x0,
                           const BarrierOptions& options = {});

// Phase I: minimizes s subject to every inequality relaxed by s and returns a
// point satisfying all inequalities strictly, or nullopt if none is found.
// `x0` must satisfy the equalities and lie in the domain of the nonlinear
// constraints.
std::optional<Eigen::VectorXd> FindStrictlyFeasible(
    const BarrierProblem& problem, const Eigen::VectorXd& x0);

}  // namespace advsi

#endif  // ADVSI_CONVEX_H_
