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

#include "advsi/convex.h"

#include <cmath>

#include <Eigen/Dense>
#include <gtest/gtest.h>

namespace advsi {
namespace {

ConvexFunction Quadratic(Eigen::VectorXd center) {
  return [center](const Eigen::VectorXd& x, Eigen::VectorXd* g,
                  Eigen::MatrixXd* h) {
    const Eigen::VectorXd d = x - center;
    if (g != nullptr) *g = 2.0 * d;
    if (h != nullptr) {
      *h = 2.0 * Eigen::MatrixXd::Identity(x.size(), x.size());
    }
    return d.squaredNorm();
  };
}

ConvexFunction Linear(Eigen::VectorXd w) {
  return [w](const Eigen::VectorXd& x, Eigen::VectorXd* g,
             Eigen::MatrixXd* h) {
    if (g != nullptr) *g = w;
    if (h != nullptr) *h = Eigen::MatrixXd::Zero(x.size(), x.size());
    return w.dot(x);
  };
}

// x^T x - 1 <= 0.
double UnitDisk(const Eigen::VectorXd& x, Eigen::VectorXd* g,
                Eigen::MatrixXd* h) {
  if (g != nullptr) *g = 2.0 * x;
  if (h != nullptr) *h = 2.0 * Eigen::MatrixXd::Identity(x.size(), x.size());
  return x.squaredNorm() - 1.0;
}

TEST(BarrierTest, BoxConstrainedQuadratic) {
  BarrierProblem prob;
  prob.num_vars = 2;
  prob.objective = Quadratic(Eigen::Vector2d(2.0, -3.0));
  prob.G.resize(4, 2);
  prob.G << 1, 0, -1, 0, 0, 1, 0, -1;
  prob.h = Eigen::Vector4d(1.0, 1.0, 1.0, 1.0);
  const BarrierResult r = SolveBarrier(prob, Eigen::Vector2d::Zero());
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x[0], 1.0, 1e-8);
  EXPECT_NEAR(r.x[1], -1.0, 1e-8);
  EXPECT_NEAR(r.value, 5.0, 1e-8);
}

TEST(BarrierTest, EqualityConstrainedEntropy) {
  // Minimizing sum x log x on the simplex gives the uniform point.
  BarrierProblem prob;
  prob.num_vars = 3;
  prob.objective = [](const Eigen::VectorXd& x, Eigen::VectorXd* g,
                      Eigen::MatrixXd* h) {
    if ((x.array() <= 0.0).any()) return std::numeric_limits<double>::infinity();
    if (g != nullptr) *g = (x.array().log() + 1.0).matrix();
    if (h != nullptr) *h = x.cwiseInverse().asDiagonal();
    return (x.array() * x.array().log()).sum();
  };
  prob.G = -Eigen::MatrixXd::Identity(3, 3);
  prob.h = Eigen::VectorXd::Zero(3);
  prob.A = Eigen::RowVector3d(1.0, 1.0, 1.0);
  prob.b = Eigen::VectorXd::Ones(1);
  const BarrierResult r = SolveBarrier(prob, Eigen::Vector3d(0.6, 0.3, 0.1));
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(r.x[i], 1.0 / 3.0, 1e-6);
  EXPECT_NEAR(r.value, -std::log(3.0), 1e-9);
}

TEST(BarrierTest, NonlinearConstraint) {
  BarrierProblem prob;
  prob.num_vars = 2;
  prob.objective = Linear(Eigen::Vector2d(1.0, 1.0));
  prob.G.resize(0, 2);
  prob.h.resize(0);
  prob.nonlinear = {UnitDisk};
  const BarrierResult r = SolveBarrier(prob, Eigen::Vector2d::Zero());
  EXPECT_NEAR(r.value, -std::sqrt(2.0), 1e-8);
}

TEST(PhaseOneTest, FindsInteriorPoint) {
  BarrierProblem prob;
  prob.num_vars = 2;
  prob.objective = Linear(Eigen::Vector2d(1.0, 0.0));
  prob.G.resize(1, 2);
  prob.G << 1.0, 1.0;
  prob.h = Eigen::VectorXd::Constant(1, -1.0);
  prob.nonlinear = {UnitDisk};
  const auto x = FindStrictlyFeasible(prob, Eigen::Vector2d(0.0, 0.0));
  ASSERT_TRUE(x.has_value());
  EXPECT_LT(x->sum(), -1.0);
  EXPECT_LT(x->squaredNorm(), 1.0);
}

TEST(PhaseOneTest, ReportsInfeasible) {
  // x + y <= -2 misses the unit disk.
  BarrierProblem prob;
  prob.num_vars = 2;
  prob.objective = Linear(Eigen::Vector2d(1.0, 0.0));
  prob.G.resize(1, 2);
  prob.G << 1.0, 1.0;
  prob.h = Eigen::VectorXd::Constant(1, -2.0);
  prob.nonlinear = {UnitDisk};
  EXPECT_FALSE(FindStrictlyFeasible(prob, Eigen::Vector2d::Zero()).has_value());
}

}  // namespace
}  // namespace advsi
