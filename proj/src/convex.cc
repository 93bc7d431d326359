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
#include <limits>
#include <stdexcept>

namespace advsi {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// t f0(x) - sum log(h - G x) - sum log(-f_i(x)); +inf outside the domain.
double Barrier(const BarrierProblem& p, const Eigen::VectorXd& x, double t,
               Eigen::VectorXd* grad, Eigen::MatrixXd* hess) {
  const int n = p.num_vars;
  Eigen::VectorXd g0;
  Eigen::MatrixXd h0;
  if (grad != nullptr) {
    g0.setZero(n);
    h0.setZero(n, n);
  }
  const double f0 = p.objective(x, grad ? &g0 : nullptr, hess ? &h0 : nullptr);
  if (!std::isfinite(f0)) return kInf;
  double value = t * f0;
  if (grad != nullptr) {
    *grad = t * g0;
    *hess = t * h0;
  }
  if (p.G.rows() > 0) {
    const Eigen::VectorXd slack = p.h - p.G * x;
    if ((slack.array() <= 0.0).any()) return kInf;
    value -= slack.array().log().sum();
    if (grad != nullptr) {
      const Eigen::VectorXd inv = slack.cwiseInverse();
      *grad += p.G.transpose() * inv;
      *hess += p.G.transpose() * inv.cwiseAbs2().asDiagonal() * p.G;
    }
  }
  for (const ConvexFunction& f : p.nonlinear) {
    Eigen::VectorXd gi;
    Eigen::MatrixXd hi;
    if (grad != nullptr) {
      gi.setZero(n);
      hi.setZero(n, n);
    }
    const double fi = f(x, grad ? &gi : nullptr, hess ? &hi : nullptr);
    if (!(fi < 0.0)) return kInf;
    value -= std::log(-fi);
    if (grad != nullptr) {
      *grad += gi / (-fi);
      *hess += gi * gi.transpose() / (fi * fi) + hi / (-fi);
    }
  }
  return value;
}

Eigen::VectorXd SolveKkt(const Eigen::MatrixXd& hess, const Eigen::MatrixXd& a,
                         const Eigen::VectorXd& grad,
                         const Eigen::VectorXd& residual) {
  const int n = static_cast<int>(hess.rows());
  const int m = static_cast<int>(a.rows());
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + m, n + m);
  kkt.topLeftCorner(n, n) = hess;
  if (m > 0) {
    kkt.topRightCorner(n, m) = a.transpose();
    kkt.bottomLeftCorner(m, n) = a;
  }
  Eigen::VectorXd rhs(n + m);
  rhs.head(n) = -grad;
  if (m > 0) rhs.tail(m) = -residual;
  Eigen::VectorXd sol = kkt.partialPivLu().solve(rhs);
  if (!sol.allFinite()) sol = kkt.completeOrthogonalDecomposition().solve(rhs);
  return sol.head(n);
}

}  // namespace

BarrierResult SolveBarrier(const BarrierProblem& problem,
                           const Eigen::VectorXd& x0,
                           const BarrierOptions& options) {
  const int n = problem.num_vars;
  if (x0.size() != n) throw std::invalid_argument("barrier: bad start size");
  const int num_ineq =
      static_cast<int>(problem.G.rows() + problem.nonlinear.size());
  if (!std::isfinite(Barrier(problem, x0, 1.0, nullptr, nullptr))) {
    throw std::invalid_argument("barrier: start point is not strictly feasible");
  }

  BarrierResult result;
  Eigen::VectorXd x = x0;
  double t = 1.0;
  for (int outer = 0; outer < options.max_outer; ++outer) {
    for (int it = 0; it < options.max_newton_per_center; ++it) {
      Eigen::VectorXd grad;
      Eigen::MatrixXd hess;
      const double phi = Barrier(problem, x, t, &grad, &hess);
      Eigen::VectorXd residual;
      if (problem.A.rows() > 0) residual = problem.A * x - problem.b;
      const Eigen::VectorXd dx = SolveKkt(hess, problem.A, grad, residual);
      ++result.newton_steps;
      const double slope = grad.dot(dx);
      const double decrement = -slope;
      const bool residual_small =
          residual.size() == 0 || residual.lpNorm<Eigen::Infinity>() < 1e-13;
      if (residual_small && decrement < 1e-11) break;
      double step = 1.0;
      double phi_new = kInf;
      for (int ls = 0; ls < 80; ++ls, step *= 0.5) {
        phi_new = Barrier(problem, x + step * dx, t, nullptr, nullptr);
        if (!std::isfinite(phi_new)) continue;
        const double slack = 1e-13 * std::max(1.0, std::abs(phi));
        if (!residual_small || phi_new <= phi + 0.25 * step * slope + slack) {
          break;
        }
      }
      if (!std::isfinite(phi_new)) break;
      x += step * dx;
      if (step * dx.lpNorm<Eigen::Infinity>() < 1e-16) break;
    }
    if (problem.objective(x, nullptr, nullptr) < options.stop_below) {
      result.converged = true;
      break;
    }
    if (num_ineq == 0 || num_ineq / t < options.gap_tolerance) {
      result.converged = true;
      break;
    }
    t *= options.mu;
  }
  result.x = x;
  result.value = problem.objective(x, nullptr, nullptr);
  return result;
}

std::optional<Eigen::VectorXd> FindStrictlyFeasible(
    const BarrierProblem& problem, const Eigen::VectorXd& x0) {
  const int n = problem.num_vars;
  const int rows = static_cast<int>(problem.G.rows());
  double worst = -kInf;
  if (rows > 0) worst = (problem.G * x0 - problem.h).maxCoeff();
  for (const ConvexFunction& f : problem.nonlinear) {
    worst = std::max(worst, f(x0, nullptr, nullptr));
  }
  if (!std::isfinite(worst)) {
    if (worst < 0.0) return x0;
    return std::nullopt;
  }
  if (worst < -1e-12) return x0;

  BarrierProblem phase1;
  phase1.num_vars = n + 1;
  phase1.objective = [n](const Eigen::VectorXd& x, Eigen::VectorXd* grad,
                         Eigen::MatrixXd*) {
    if (grad != nullptr) (*grad)[n] = 1.0;
    return x[n];
  };
  phase1.G = Eigen::MatrixXd::Zero(rows + 1, n + 1);
  phase1.h = Eigen::VectorXd::Zero(rows + 1);
  if (rows > 0) {
    phase1.G.topLeftCorner(rows, n) = problem.G;
    phase1.G.block(0, n, rows, 1).setConstant(-1.0);
    phase1.h.head(rows) = problem.h;
  }
  phase1.G(rows, n) = -1.0;  // s >= -1
  phase1.h[rows] = 1.0;
  for (const ConvexFunction& f : problem.nonlinear) {
    phase1.nonlinear.push_back([f, n](const Eigen::VectorXd& x,
                                      Eigen::VectorXd* grad,
                                      Eigen::MatrixXd* hess) {
      const Eigen::VectorXd head = x.head(n);
      double value;
      if (grad != nullptr) {
        Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
        value = f(head, &g, &h);
        grad->head(n) = g;
        (*grad)[n] = -1.0;
        hess->topLeftCorner(n, n) = h;
      } else {
        value = f(head, nullptr, nullptr);
      }
      return value - x[n];
    });
  }
  if (problem.A.rows() > 0) {
    phase1.A = Eigen::MatrixXd::Zero(problem.A.rows(), n + 1);
    phase1.A.leftCols(n) = problem.A;
    phase1.b = problem.b;
  }
  Eigen::VectorXd start(n + 1);
  start.head(n) = x0;
  start[n] = std::max(worst, 0.0) + 1.0;
  BarrierOptions options;
  options.gap_tolerance = 1e-9;
  options.stop_below = -1e-3;
  const BarrierResult res = SolveBarrier(phase1, start, options);
  if (!(res.x[n] < -1e-11)) return std::nullopt;
  return Eigen::VectorXd(res.x.head(n));
}

}  // namespace advsi
