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

// Brute-force reference implementations used to check the solvers. None of
// them calls the optimization routines under test.

#ifndef ADVSI_TESTS_ORACLES_H_
#define ADVSI_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace advsi::oracle {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// KL divergence in bits, long double accumulation.
inline double Kl(const std::vector<double>& p, const std::vector<double>& q) {
  long double sum = 0.0L;
  for (std::size_t a = 0; a < p.size(); ++a) {
    if (p[a] <= 0.0) continue;
    if (q[a] <= 0.0) return kInf;
    sum += static_cast<long double>(p[a]) *
           std::log2(static_cast<long double>(p[a]) / q[a]);
  }
  return static_cast<double>(std::max(0.0L, sum));
}

// D(P || U) + c D(P' || U), U = (P + c P') / (1 + c).
inline double Hc(const std::vector<double>& p, const std::vector<double>& pp,
                 double c) {
  std::vector<double> u(p.size());
  for (std::size_t a = 0; a < p.size(); ++a) {
    u[a] = (p[a] + c * pp[a]) / (1.0 + c);
  }
  return Kl(p, u) + c * Kl(pp, u);
}

inline double L1(const std::vector<double>& p, const std::vector<double>& q) {
  double s = 0.0;
  for (std::size_t a = 0; a < p.size(); ++a) s += std::abs(p[a] - q[a]);
  return s;
}

// Calls f on every point of the simplex lattice with denominator `den`.
inline void ForEachLattice(int k, int den,
                           const std::function<void(const std::vector<double>&)>& f) {
  std::vector<int> idx(k, 0);
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == k - 1) {
      idx[pos] = left;
      std::vector<double> p(k);
      for (int a = 0; a < k; ++a) p[a] = static_cast<double>(idx[a]) / den;
      f(p);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      idx[pos] = v;
      rec(pos + 1, left - v);
    }
  };
  rec(0, den);
}

// Minimizes f over a finite-valued region of the simplex: lattice search
// followed by pair-exchange pattern search with a halving step. f returns
// +inf outside the region; `start`, when given, is a known feasible point.
inline double MinimizeOnSimplex(
    int k, int den, const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& start = {},
    std::vector<double>* argmin = nullptr) {
  double best = kInf;
  std::vector<double> best_p;
  if (!start.empty()) {
    best = f(start);
    best_p = start;
  }
  ForEachLattice(k, den, [&](const std::vector<double>& p) {
    const double v = f(p);
    if (v < best) {
      best = v;
      best_p = p;
    }
  });
  if (best_p.empty()) return kInf;
  for (double step = 1.0 / den; step > 1e-13; step *= 0.5) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) {
          if (a == b) continue;
          std::vector<double> p = best_p;
          const double move = std::min(step, p[a]);
          if (move <= 0.0) continue;
          p[a] -= move;
          p[b] += move;
          const double v = f(p);
          if (v < best - 1e-16) {
            best = v;
            best_p = p;
            improved = true;
          }
        }
      }
    }
  }
  if (argmin != nullptr) *argmin = best_p;
  return best;
}

// One-dimensional version on [lo, hi]: grid with `steps` cells, then golden
// section search on the two cells around the best grid point. f must be
// convex where finite; `start`, if not NaN, is a known feasible point.
inline double MinimizeOnInterval(double lo, double hi, int steps,
                                 const std::function<double(double)>& f,
                                 double start = std::nan(""),
                                 double* argmin = nullptr) {
  double best = kInf;
  double best_x = lo;
  if (!std::isnan(start)) {
    best = f(start);
    best_x = start;
  }
  for (int i = 0; i <= steps; ++i) {
    const double x = lo + (hi - lo) * i / steps;
    const double v = f(x);
    if (v < best) {
      best = v;
      best_x = x;
    }
  }
  const double h = (hi - lo) / steps;
  double a = std::max(lo, best_x - h);
  double b = std::min(hi, best_x + h);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
    const double x1 = b - g * (b - a);
    const double x2 = a + g * (b - a);
    if (f(x1) <= f(x2)) {
      b = x2;
    } else {
      a = x1;
    }
  }
  for (double x : {a, b, 0.5 * (a + b)}) {
    const double v = f(x);
    if (v < best) {
      best = v;
      best_x = x;
    }
  }
  if (argmin != nullptr) *argmin = best_x;
  return best;
}

// Addition statistic: min over Q with P_t - alpha Q >= 0.
inline double AdditionStatistic(const std::vector<double>& pv,
                                const std::vector<double>& pt, double alpha,
                                double c, int den) {
  const int k = static_cast<int>(pv.size());
  auto value = [&](const std::vector<double>& q) {
    std::vector<double> pp(k);
    for (int a = 0; a < k; ++a) {
      const double r = pt[a] - alpha * q[a];
      if (r < -1e-15) return kInf;
      pp[a] = std::max(0.0, r) / (1.0 - alpha);
    }
    return Hc(pv, pp, (1.0 - alpha) * c);
  };
  if (k == 2) {
    return MinimizeOnInterval(
        0.0, 1.0, den, [&](double q1) { return value({1.0 - q1, q1}); },
        pt[1]);
  }
  return MinimizeOnSimplex(k, den, value, pt);
}

// Replacement statistic over cleaned pmfs in the L1 ball of radius 2 alpha.
inline double ReplacementStatistic(const std::vector<double>& pv,
                                   const std::vector<double>& pt, double alpha,
                                   double c, int den) {
  const int k = static_cast<int>(pv.size());
  auto value = [&](const std::vector<double>& pp) {
    if (L1(pp, pt) > 2.0 * alpha + 1e-15) return kInf;
    return Hc(pv, pp, c);
  };
  if (k == 2) {
    return MinimizeOnInterval(
        0.0, 1.0, den, [&](double p1) { return value({1.0 - p1, p1}); },
        pt[1]);
  }
  return MinimizeOnSimplex(k, den, value, pt);
}

// Replacement statistic in the (Q_R, Q_A) parameterization, K = 2, plain grid.
inline double ReplacementStatisticPairs(const std::vector<double>& pv,
                                        const std::vector<double>& pt,
                                        double alpha, double c, int den) {
  double best = kInf;
  for (int i = 0; i <= den; ++i) {
    for (int j = 0; j <= den; ++j) {
      const double qr = static_cast<double>(i) / den;
      const double qa = static_cast<double>(j) / den;
      const double p1 = pt[1] + alpha * (qr - qa);
      if (p1 < 0.0 || p1 > 1.0) continue;
      best = std::min(best, Hc(pv, {1.0 - p1, p1}, c));
    }
  }
  return best;
}

// min c . x subject to A x = b, x >= 0, by enumerating basic solutions.
inline double VertexEnumerationLp(const Eigen::MatrixXd& a_in,
                                  const Eigen::VectorXd& b_in,
                                  const Eigen::VectorXd& c) {
  // Keep a maximal set of independent rows.
  std::vector<int> rows;
  for (int r = 0; r < a_in.rows(); ++r) {
    std::vector<int> trial = rows;
    trial.push_back(r);
    Eigen::MatrixXd sub(trial.size(), a_in.cols());
    for (std::size_t i = 0; i < trial.size(); ++i) sub.row(i) = a_in.row(trial[i]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
    lu.setThreshold(1e-10);
    if (lu.rank() == static_cast<int>(trial.size())) rows = trial;
  }
  const int m = static_cast<int>(rows.size());
  const int n = static_cast<int>(a_in.cols());
  Eigen::MatrixXd a(m, n);
  Eigen::VectorXd b(m);
  for (int i = 0; i < m; ++i) {
    a.row(i) = a_in.row(rows[i]);
    b[i] = b_in[rows[i]];
  }
  double best = kInf;
  std::vector<int> pick(m);
  std::function<void(int, int)> rec = [&](int pos, int start) {
    if (pos == m) {
      Eigen::MatrixXd basis(m, m);
      for (int i = 0; i < m; ++i) basis.col(i) = a.col(pick[i]);
      Eigen::FullPivLU<Eigen::MatrixXd> lu(basis);
      lu.setThreshold(1e-10);
      if (!lu.isInvertible()) return;
      const Eigen::VectorXd xb = lu.solve(b);
      if ((xb.array() < -1e-10).any()) return;
      double v = 0.0;
      for (int i = 0; i < m; ++i) v += c[pick[i]] * xb[i];
      best = std::min(best, v);
      return;
    }
    for (int j = start; j <= n - (m - pos); ++j) {
      pick[pos] = j;
      rec(pos + 1, j + 1);
    }
  };
  rec(0, 0);
  return best;
}

// EMD between p and v for a row-major K x K cost, by vertex enumeration.
inline double Emd(const std::vector<double>& p, const std::vector<double>& v,
                  const std::vector<double>& cost) {
  const int k = static_cast<int>(p.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * k, k * k);
  Eigen::VectorXd b(2 * k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      a(i, i * k + j) = 1.0;
      a(k + j, i * k + j) = 1.0;
    }
    b[i] = p[i];
    b[k + i] = v[i];
  }
  Eigen::VectorXd c(k * k);
  for (int e = 0; e < k * k; ++e) c[e] = cost[e];
  return VertexEnumerationLp(a, b, c);
}

// min over V with EMD(P, V) <= L of l1(V, target), by vertex enumeration of
// the linear program in (S, t, slacks).
inline double MinL1WithinEmd(const std::vector<double>& p,
                             const std::vector<double>& target, double L,
                             const std::vector<double>& cost) {
  const int k = static_cast<int>(p.size());
  const int ns = k * k;
  const int nvars = ns + k + 2 * k + 1;  // S, t, slacks for 2k + 1 rows
  const int nrows = k + 2 * k + 1;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(nrows, nvars);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(nrows);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) a(i, i * k + j) = 1.0;
    b[i] = p[i];
  }
  for (int j = 0; j < k; ++j) {
    const int up = k + 2 * j;
    const int down = up + 1;
    for (int i = 0; i < k; ++i) {
      a(up, i * k + j) = 1.0;
      a(down, i * k + j) = -1.0;
    }
    a(up, ns + j) = -1.0;
    a(down, ns + j) = -1.0;
    a(up, ns + k + 2 * j) = 1.0;
    a(down, ns + k + 2 * j + 1) = 1.0;
    b[up] = target[j];
    b[down] = -target[j];
  }
  for (int e = 0; e < ns; ++e) a(nrows - 1, e) = cost[e];
  a(nrows - 1, nvars - 1) = 1.0;
  b[nrows - 1] = L;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(nvars);
  for (int j = 0; j < k; ++j) c[ns + j] = 1.0;
  return VertexEnumerationLp(a, b, c);
}

// Pattern search for a convex f on R^d from a finite starting point. Poll
// directions: coordinate axes, pairwise diagonals, and for every consecutive
// coordinate pair a fan of 24 in-plane directions. The step halves when no
// direction improves.
inline double MinimizePattern(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double>* x, double step0, double step_min = 1e-11) {
  const int d = static_cast<int>(x->size());
  std::vector<std::vector<double>> dirs;
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      for (int s = 0; s < 24; ++s) {
        const double th = 2.0 * 3.14159265358979323846 * s / 24.0;
        std::vector<double> u(d, 0.0);
        u[i] = std::cos(th);
        u[j] = std::sin(th);
        dirs.push_back(u);
      }
    }
  }
  if (d == 1) dirs = {{1.0}, {-1.0}};
  double best = f(*x);
  for (double step = step0; step > step_min; step *= 0.5) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (const auto& u : dirs) {
        std::vector<double> y = *x;
        for (int i = 0; i < d; ++i) y[i] += step * u[i];
        const double v = f(y);
        if (v < best - 1e-15) {
          best = v;
          *x = y;
          improved = true;
        }
      }
    }
  }
  return best;
}

// Grid over the box [lo, hi]^d with `steps` cells per axis (points where f is
// infinite are skipped), then pattern search from the best grid point.
inline double MinimizeOnBox(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& lo, const std::vector<double>& hi, int steps,
    std::vector<double>* argmin = nullptr) {
  const int d = static_cast<int>(lo.size());
  double best = kInf;
  std::vector<double> best_x;
  std::vector<int> idx(d, 0);
  while (true) {
    std::vector<double> x(d);
    for (int i = 0; i < d; ++i) x[i] = lo[i] + (hi[i] - lo[i]) * idx[i] / steps;
    const double v = f(x);
    if (v < best) {
      best = v;
      best_x = x;
    }
    int i = 0;
    while (i < d && ++idx[i] > steps) idx[i++] = 0;
    if (i == d) break;
  }
  if (best_x.empty()) return kInf;
  double cell = 0.0;
  for (int i = 0; i < d; ++i) cell = std::max(cell, (hi[i] - lo[i]) / steps);
  best = MinimizePattern(f, &best_x, cell);
  if (argmin != nullptr) *argmin = best_x;
  return best;
}

// log2 P(Bin(n, p) >= k), summed in log space.
inline double Log2BinomialUpperTail(std::int64_t n, double p, std::int64_t k) {
  if (k <= 0) return 0.0;
  if (k > n) return -kInf;
  const long double lp = std::log(static_cast<long double>(p));
  const long double lq = std::log1p(-static_cast<long double>(p));
  auto term = [&](std::int64_t i) {
    return std::lgamma(static_cast<long double>(n) + 1) -
           std::lgamma(static_cast<long double>(i) + 1) -
           std::lgamma(static_cast<long double>(n - i) + 1) + i * lp +
           (n - i) * lq;
  };
  long double top = -std::numeric_limits<long double>::infinity();
  for (std::int64_t i = k; i <= n; ++i) top = std::max(top, term(i));
  long double sum = 0.0L;
  for (std::int64_t i = k; i <= n; ++i) sum += std::exp(term(i) - top);
  return static_cast<double>((top + std::log(sum)) / std::log(2.0L));
}

}  // namespace advsi::oracle

#endif  // ADVSI_TESTS_ORACLES_H_
