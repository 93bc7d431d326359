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

#include "advsi/analysis.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "advsi/attacker.h"
#include "advsi/convex.h"
#include "advsi/defender.h"

namespace advsi {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLn2 = 0.69314718055994530942;

void CheckSameSize(int a, int b) {
  if (a != b) {
    throw std::domain_error("alphabet size mismatch: " + std::to_string(a) +
                            " vs " + std::to_string(b));
  }
}

double ReachRadius(double alpha, Variant variant) {
  return variant == Variant::kAddition ? 2.0 * alpha / (1.0 - alpha)
                                       : 4.0 * alpha;
}

Pmf Normalized(std::vector<double> p) {
  double sum = 0.0;
  for (double& x : p) {
    x = std::max(0.0, x);
    sum += x;
  }
  for (double& x : p) x /= sum;
  return Pmf(std::move(p));
}

// A pmf coordinate in the exponent program: a variable or the constant 0.
constexpr int kZero = -1;

}  // namespace

bool Gamma0Membership(const Pmf& p, const Pmf& r, double lambda, double alpha,
                      double c, Variant variant) {
  CheckSameSize(p.size(), r.size());
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw std::domain_error("alpha: must lie in [0, 1)");
  }
  if (!(lambda >= 0.0)) throw std::domain_error("lambda: must be >= 0");
  const double radius = ReachRadius(alpha, variant);
  if (lambda == 0.0) return L1Distance(p, r) <= radius + kMembershipSlack;
  const double ratio = variant == Variant::kAddition ? (1.0 - alpha) * c : c;
  return MinHcOverBall(p, r, radius, ratio).value <= lambda + kMembershipSlack;
}

ClosestWithinBudget MinL1WithinEmd(const Pmf& p, const Pmf& target, double L,
                                   const CostMatrix& cost) {
  const TransportMap s = ClosestTransport(p, target, L, cost);
  Pmf v = ColMarginal(s);
  return {L1Distance(v, target), std::move(v)};
}

bool IndistMembership(const Pmf& p, const Pmf& p_x, const GameConfig& cfg,
                      const CostMatrix& cost) {
  cfg.Validate();
  CheckSameSize(p.size(), p_x.size());
  const double radius = cfg.ReachRadius();
  if (L1Distance(p, p_x) <= radius + kMembershipSlack) return true;
  return MinL1WithinEmd(p, p_x, cfg.L, cost).l1 <= radius + kMembershipSlack;
}

bool GammaMembership(const Pmf& p, const Pmf& p_x, const GameConfig& cfg,
                     const CostMatrix& cost) {
  if (cfg.lambda == 0.0) return IndistMembership(p, p_x, cfg, cost);
  if (IndistMembership(p, p_x, cfg, cost)) return true;
  return AttackTargeted(p_x, p, cfg, cost).achieved_statistic <=
         cfg.lambda + kMembershipSlack;
}

double BlindingLevel(const Pmf& p_x, const Pmf& p_y, Variant variant) {
  const double d = L1Distance(p_x, p_y);
  return variant == Variant::kAddition ? d / (2.0 + d) : d / 4.0;
}

SecurityMarginResult SecurityMargin(const Pmf& p_x, const Pmf& p_y,
                                    double alpha, const CostMatrix& cost,
                                    Variant variant) {
  CheckSameSize(p_x.size(), p_y.size());
  CheckSameSize(p_x.size(), cost.size());
  if (!(alpha >= 0.0 && alpha <= 0.5)) {
    throw std::domain_error("alpha: must lie in [0, 1/2]");
  }
  SecurityMarginResult out{0.0, BlindingLevel(p_x, p_y, variant), false, p_y};
  const double radius = ReachRadius(alpha, variant);
  if (L1Distance(p_x, p_y) <= radius + kMembershipSlack) {
    out.at_blinding = true;
    return out;
  }
  // L -> min_{EMD(P_Y, V) <= L} l1(V, P_X) is nonincreasing and reaches 0 at
  // L = EMD(P_X, P_Y).
  double lo = 0.0;
  double hi = Emd(p_y, p_x, cost).value;
  for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (MinL1WithinEmd(p_y, p_x, mid, cost).l1 <= radius) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  out.margin = hi;
  out.witness_v = MinL1WithinEmd(p_y, p_x, hi, cost).v;
  return out;
}

ExponentResult ErrorExponent(const Pmf& p_x, const Pmf& p_y,
                             const GameConfig& cfg, const CostMatrix& cost) {
  cfg.Validate();
  CheckSameSize(p_x.size(), p_y.size());
  CheckSameSize(p_x.size(), cost.size());
  const int k = p_x.size();
  if (GammaMembership(p_y, p_x, cfg, cost)) return {0.0, p_x, p_y};

  const double c_train =
      cfg.variant == Variant::kAddition ? (1.0 - cfg.alpha) * cfg.c : cfg.c;
  const double ratio = cfg.StatisticRatio();
  const double radius = cfg.ReachRadius();
  const bool has_lambda = cfg.lambda > 0.0;
  const bool ball = radius > 0.0 && radius < 2.0;
  // With lambda = 0 and no corruption the attacked pmf must equal R exactly.
  const bool v_equals_r = !has_lambda && radius == 0.0;

  int n = 0;
  std::vector<int> r_var(k, kZero);
  for (int a = 0; a < k; ++a) {
    if (p_x[a] > 0.0) r_var[a] = n++;
  }
  std::vector<std::pair<int, int>> s_vars;
  const int s_off = n;
  for (int i = 0; i < k; ++i) {
    if (p_y[i] <= 0.0) continue;
    for (int j = 0; j < k; ++j) {
      if (cfg.L <= 0.0 && j != i) continue;
      if (v_equals_r && r_var[j] == kZero) continue;
      s_vars.emplace_back(i, j);
    }
  }
  const int ns = static_cast<int>(s_vars.size());
  n += ns;
  if (ns == 0) return {kInf, p_x, p_y};

  // Training pmf compared against the attacked pmf (lambda > 0 only).
  std::vector<int> p_var(k, kZero);
  bool own_p = false;
  if (has_lambda) {
    if (radius == 0.0) {
      p_var = r_var;
    } else {
      own_p = true;
      for (int a = 0; a < k; ++a) p_var[a] = n++;
    }
  }
  const int e_off = n;
  const bool use_e = ball && !v_equals_r;
  if (use_e) n += k;

  auto val = [](const Eigen::VectorXd& x, int idx) {
    return idx == kZero ? 0.0 : x[idx];
  };

  BarrierProblem problem;
  problem.num_vars = n;
  problem.objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd* grad,
                          Eigen::MatrixXd* hess) -> double {
    double value = 0.0;
    for (int a = 0; a < k; ++a) {
      if (r_var[a] == kZero) continue;
      const double r = x[r_var[a]];
      if (r <= 0.0) return kInf;
      value += c_train * r * std::log(r / p_x[a]);
      if (grad != nullptr) {
        (*grad)[r_var[a]] = c_train * (std::log(r / p_x[a]) + 1.0);
        (*hess)(r_var[a], r_var[a]) = c_train / r;
      }
    }
    std::vector<double> rows(k, 0.0);
    for (int v = 0; v < ns; ++v) rows[s_vars[v].first] += x[s_off + v];
    for (int i = 0; i < k; ++i) {
      if (p_y[i] <= 0.0) continue;
      if (rows[i] <= 0.0) return kInf;
      value += rows[i] * std::log(rows[i] / p_y[i]);
    }
    if (grad != nullptr) {
      for (int v = 0; v < ns; ++v) {
        const int i = s_vars[v].first;
        (*grad)[s_off + v] = std::log(rows[i] / p_y[i]) + 1.0;
        for (int w = 0; w < ns; ++w) {
          if (s_vars[w].first == i) (*hess)(s_off + v, s_off + w) = 1.0 / rows[i];
        }
      }
    }
    return value;
  };

  std::vector<Eigen::VectorXd> g_rows;
  std::vector<double> h_vals;
  auto add_ineq = [&](Eigen::VectorXd row, double rhs) {
    g_rows.push_back(std::move(row));
    h_vals.push_back(rhs);
  };
  const int nonneg_end = use_e ? e_off : n;
  for (int v = 0; v < nonneg_end; ++v) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
    row[v] = -1.0;
    add_ineq(std::move(row), 0.0);
  }
  bool has_offdiag = false;
  for (const auto& [i, j] : s_vars) has_offdiag |= (i != j);
  if (has_offdiag) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
    for (int v = 0; v < ns; ++v) {
      row[s_off + v] = cost(s_vars[v].first, s_vars[v].second);
    }
    add_ineq(std::move(row), cfg.L);
  }
  // Column sum of S at symbol a as a linear form.
  auto column = [&](int a) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
    for (int v = 0; v < ns; ++v) {
      if (s_vars[v].second == a) row[s_off + v] = 1.0;
    }
    return row;
  };
  if (use_e) {
    // |X_a - R_a| <= e_a, sum e <= radius, with X the attacked pmf (lambda =
    // 0) or the training pmf compared against it (lambda > 0).
    for (int a = 0; a < k; ++a) {
      Eigen::VectorXd diff = Eigen::VectorXd::Zero(n);
      if (has_lambda) {
        diff[p_var[a]] = 1.0;
      } else {
        diff = column(a);
      }
      if (r_var[a] != kZero) diff[r_var[a]] -= 1.0;
      Eigen::VectorXd up = diff;
      up[e_off + a] = -1.0;
      add_ineq(std::move(up), 0.0);
      Eigen::VectorXd down = -diff;
      down[e_off + a] = -1.0;
      add_ineq(std::move(down), 0.0);
    }
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(n);
    for (int a = 0; a < k; ++a) sum[e_off + a] = 1.0;
    add_ineq(std::move(sum), radius);
  }
  problem.G.resize(static_cast<int>(g_rows.size()), n);
  problem.h.resize(static_cast<int>(h_vals.size()));
  for (std::size_t r = 0; r < g_rows.size(); ++r) {
    problem.G.row(static_cast<int>(r)) = g_rows[r].transpose();
    problem.h[static_cast<int>(r)] = h_vals[r];
  }

  if (has_lambda) {
    const double lambda_nats = cfg.lambda * kLn2;
    problem.nonlinear.push_back([&, lambda_nats](const Eigen::VectorXd& x,
                                                 Eigen::VectorXd* grad,
                                                 Eigen::MatrixXd* hess) {
      std::vector<double> v(k, 0.0);
      for (int s = 0; s < ns; ++s) v[s_vars[s].second] += x[s_off + s];
      double value = 0.0;
      std::vector<kernel::HcTerm> terms(k);
      for (int a = 0; a < k; ++a) {
        const double p = val(x, p_var[a]);
        if (v[a] < 0.0 || p < 0.0) return kInf;
        terms[a] = kernel::HcCoordinate(v[a], p, ratio);
        value += terms[a].value;
      }
      if (grad != nullptr) {
        for (int s = 0; s < ns; ++s) {
          const int a = s_vars[s].second;
          (*grad)[s_off + s] = terms[a].dv;
          for (int w = 0; w < ns; ++w) {
            if (s_vars[w].second == a) (*hess)(s_off + s, s_off + w) = terms[a].dvv;
          }
          if (p_var[a] != kZero) {
            (*hess)(s_off + s, p_var[a]) = terms[a].dvp;
            (*hess)(p_var[a], s_off + s) = terms[a].dvp;
          }
        }
        for (int a = 0; a < k; ++a) {
          if (p_var[a] == kZero) continue;
          (*grad)[p_var[a]] += terms[a].dp;
          (*hess)(p_var[a], p_var[a]) += terms[a].dpp;
        }
      }
      return value - lambda_nats;
    });
  }

  // Equalities.
  std::vector<Eigen::VectorXd> a_rows;
  std::vector<double> b_vals;
  {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
    for (int v = 0; v < ns; ++v) row[s_off + v] = 1.0;
    a_rows.push_back(std::move(row));
    b_vals.push_back(1.0);
  }
  if (v_equals_r) {
    for (int a = 0; a < k; ++a) {
      if (r_var[a] == kZero) continue;
      Eigen::VectorXd row = column(a);
      row[r_var[a]] = -1.0;
      a_rows.push_back(std::move(row));
      b_vals.push_back(0.0);
    }
  } else {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
    for (int a = 0; a < k; ++a) {
      if (r_var[a] != kZero) row[r_var[a]] = 1.0;
    }
    a_rows.push_back(std::move(row));
    b_vals.push_back(1.0);
  }
  if (own_p) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
    for (int a = 0; a < k; ++a) row[p_var[a]] = 1.0;
    a_rows.push_back(std::move(row));
    b_vals.push_back(1.0);
  }
  problem.A.resize(static_cast<int>(a_rows.size()), n);
  problem.b.resize(static_cast<int>(b_vals.size()));
  for (std::size_t r = 0; r < a_rows.size(); ++r) {
    problem.A.row(static_cast<int>(r)) = a_rows[r].transpose();
    problem.b[static_cast<int>(r)] = b_vals[r];
  }

  // Start satisfying the equalities with every pmf entry positive.
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n);
  for (int v = 0; v < ns; ++v) x0[s_off + v] = 1.0 / ns;
  for (int a = 0; a < k; ++a) {
    if (r_var[a] == kZero) continue;
    x0[r_var[a]] = v_equals_r ? column(a).dot(x0) : p_x[a];
  }
  if (own_p) {
    for (int a = 0; a < k; ++a) x0[p_var[a]] = 1.0 / k;
  }
  if (use_e) {
    for (int a = 0; a < k; ++a) x0[e_off + a] = 2.0;
  }

  const std::optional<Eigen::VectorXd> start =
      FindStrictlyFeasible(problem, x0);
  if (!start.has_value()) return {kInf, p_x, p_y};
  const BarrierResult res = SolveBarrier(problem, *start);

  std::vector<double> r(k, 0.0);
  std::vector<double> p(k, 0.0);
  for (int a = 0; a < k; ++a) r[a] = val(res.x, r_var[a]);
  for (int v = 0; v < ns; ++v) p[s_vars[v].first] += res.x[s_off + v];
  return {std::max(0.0, res.value / kLn2), Normalized(std::move(r)),
          Normalized(std::move(p))};
}

}  // namespace advsi
