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

#include "advsi/attacker.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "advsi/convex.h"
#include "advsi/defender.h"
#include "advsi/lp.h"

namespace advsi {
namespace {

constexpr double kLn2 = 0.69314718055994530942;

void CheckSameSize(int a, int b) {
  if (a != b) {
    throw std::domain_error("alphabet size mismatch: " + std::to_string(a) +
                            " vs " + std::to_string(b));
  }
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

// Cleans a numerical transport map: nonnegative entries, rows summing to P_y
// exactly, and distortion within L (excess off-diagonal mass is returned to
// the diagonal).
TransportMap RepairMap(std::vector<double> s, const Pmf& p_y, double L,
                       const CostMatrix& cost) {
  const int k = p_y.size();
  for (int i = 0; i < k; ++i) {
    double row = 0.0;
    for (int j = 0; j < k; ++j) {
      s[i * k + j] = std::max(0.0, s[i * k + j]);
      row += s[i * k + j];
    }
    for (int j = 0; j < k; ++j) {
      s[i * k + j] = row > 0.0 ? s[i * k + j] * p_y[i] / row
                               : (i == j ? p_y[i] : 0.0);
    }
  }
  double dist = 0.0;
  for (std::size_t e = 0; e < s.size(); ++e) dist += s[e] * cost.entries()[e];
  if (dist > L) {
    const double keep = dist > 0.0 ? L / dist : 0.0;
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        if (i == j) continue;
        const double moved = s[i * k + j] * (1.0 - keep);
        s[i * k + j] -= moved;
        s[i * k + i] += moved;
      }
    }
  }
  return TransportMap(k, std::move(s));
}

AttackResult Finish(Pmf fake, Pmf training, TransportMap s,
                    const GameConfig& cfg) {
  Pmf z = ColMarginal(s);
  const double stat = DefenderStatistic(z, training, cfg);
  return {std::move(fake), std::move(training), std::move(s), std::move(z),
          stat};
}

// Solves the joint program and falls back to the identity map when it is at
// least as good, so the attack never increases the statistic.
TransportMap BestTransport(const Pmf& p_y, const CostMatrix& cost,
                           const GameConfig& cfg,
                           const internal::TrainingSet& set, double ratio,
                           const Pmf& training) {
  TransportMap identity = TransportMap::Identity(p_y);
  if (cfg.L <= 0.0) return identity;
  internal::JointSolution joint =
      internal::SolveJoint(p_y, cost, cfg.L, ratio, set);
  const double with_attack =
      DefenderStatistic(ColMarginal(joint.transport), training, cfg);
  const double without = DefenderStatistic(p_y, training, cfg);
  return with_attack <= without ? std::move(joint.transport) : identity;
}

}  // namespace

namespace internal {

JointSolution SolveJoint(const Pmf& p_y, const CostMatrix& cost, double L,
                         double ratio, const TrainingSet& set) {
  const int k = p_y.size();
  CheckSameSize(k, cost.size());

  // Transport variables: every (i, j) with P_y(i) > 0 when L > 0, none when
  // L = 0 (the map is then the identity).
  std::vector<std::pair<int, int>> s_vars;
  std::vector<double> z_fixed(k, 0.0);
  if (L > 0.0) {
    for (int i = 0; i < k; ++i) {
      if (p_y[i] <= 0.0) continue;
      for (int j = 0; j < k; ++j) s_vars.emplace_back(i, j);
    }
  } else {
    for (int i = 0; i < k; ++i) z_fixed[i] = p_y[i];
  }
  const int ns = static_cast<int>(s_vars.size());

  // Training variables.
  std::vector<int> p_index(k, -1);
  std::vector<double> p_fixed(k, 0.0);
  int np = 0;
  bool ball_active = false;
  if (set.is_ball) {
    CheckSameSize(k, static_cast<int>(set.center.size()));
    if (set.radius <= 0.0) {
      p_fixed = set.center;
    } else {
      for (int a = 0; a < k; ++a) p_index[a] = np++;
      ball_active = set.radius < 2.0;
    }
  } else {
    CheckSameSize(k, static_cast<int>(set.upper.size()));
    double total = 0.0;
    for (double u : set.upper) total += u;
    if (total <= 1.0 + 1e-12) {
      for (int a = 0; a < k; ++a) p_fixed[a] = set.upper[a] / total;
    } else {
      for (int a = 0; a < k; ++a) {
        if (set.upper[a] > 0.0) p_index[a] = np++;
      }
    }
  }
  const int ne = ball_active ? k : 0;
  const int n = ns + np + ne;
  const int p_off = ns;
  const int e_off = ns + np;

  auto build_map = [&](const Eigen::VectorXd& x) {
    std::vector<double> s(static_cast<std::size_t>(k) * k, 0.0);
    if (ns == 0) {
      for (int i = 0; i < k; ++i) s[i * k + i] = p_y[i];
    }
    for (int v = 0; v < ns; ++v) {
      s[s_vars[v].first * k + s_vars[v].second] = x[v];
    }
    return s;
  };
  auto training_of = [&](const Eigen::VectorXd& x) {
    std::vector<double> p = p_fixed;
    for (int a = 0; a < k; ++a) {
      if (p_index[a] >= 0) p[a] = x[p_off + p_index[a]];
    }
    return p;
  };

  if (n == 0) {
    TransportMap s = TransportMap::Identity(p_y);
    Pmf p = Normalized(p_fixed);
    const double value = Hc(p_y, p, ratio);
    return {value, std::move(s), std::move(p)};
  }

  BarrierProblem problem;
  problem.num_vars = n;
  problem.objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd* grad,
                          Eigen::MatrixXd* hess) -> double {
    std::vector<double> z = z_fixed;
    for (int v = 0; v < ns; ++v) z[s_vars[v].second] += x[v];
    const std::vector<double> p = training_of(x);
    double value = 0.0;
    std::vector<kernel::HcTerm> terms(k);
    for (int a = 0; a < k; ++a) {
      terms[a] = kernel::HcCoordinate(z[a], p[a], ratio);
      value += terms[a].value;
    }
    if (grad == nullptr) return value;
    for (int v = 0; v < ns; ++v) {
      const int a = s_vars[v].second;
      (*grad)[v] = terms[a].dv;
      for (int w = 0; w < ns; ++w) {
        if (s_vars[w].second == a) (*hess)(v, w) = terms[a].dvv;
      }
      if (p_index[a] >= 0) {
        const int pv = p_off + p_index[a];
        (*hess)(v, pv) = terms[a].dvp;
        (*hess)(pv, v) = terms[a].dvp;
      }
    }
    for (int a = 0; a < k; ++a) {
      if (p_index[a] < 0) continue;
      const int pv = p_off + p_index[a];
      (*grad)[pv] = terms[a].dp;
      (*hess)(pv, pv) = terms[a].dpp;
    }
    return value;
  };

  // Inequalities.
  std::vector<Eigen::VectorXd> g_rows;
  std::vector<double> h_vals;
  auto add_ineq = [&](Eigen::VectorXd row, double rhs) {
    g_rows.push_back(std::move(row));
    h_vals.push_back(rhs);
  };
  for (int v = 0; v < ns + np; ++v) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
    row[v] = -1.0;
    add_ineq(std::move(row), 0.0);
  }
  if (ns > 0) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
    for (int v = 0; v < ns; ++v) {
      row[v] = cost(s_vars[v].first, s_vars[v].second);
    }
    add_ineq(std::move(row), L);
  }
  if (!set.is_ball) {
    for (int a = 0; a < k; ++a) {
      if (p_index[a] < 0) continue;
      Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
      row[p_off + p_index[a]] = 1.0;
      add_ineq(std::move(row), set.upper[a]);
    }
  } else if (ne > 0) {
    for (int a = 0; a < k; ++a) {
      Eigen::VectorXd up = Eigen::VectorXd::Zero(n);
      up[p_off + a] = 1.0;
      up[e_off + a] = -1.0;
      add_ineq(std::move(up), set.center[a]);
      Eigen::VectorXd down = Eigen::VectorXd::Zero(n);
      down[p_off + a] = -1.0;
      down[e_off + a] = -1.0;
      add_ineq(std::move(down), -set.center[a]);
    }
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(n);
    for (int a = 0; a < k; ++a) sum[e_off + a] = 1.0;
    add_ineq(std::move(sum), set.radius);
  }
  problem.G.resize(static_cast<int>(g_rows.size()), n);
  problem.h.resize(static_cast<int>(h_vals.size()));
  for (std::size_t r = 0; r < g_rows.size(); ++r) {
    problem.G.row(static_cast<int>(r)) = g_rows[r].transpose();
    problem.h[static_cast<int>(r)] = h_vals[r];
  }

  // Equalities: row sums of S and total training mass.
  std::vector<Eigen::VectorXd> a_rows;
  std::vector<double> b_vals;
  for (int i = 0; i < k && ns > 0; ++i) {
    if (p_y[i] <= 0.0) continue;
    Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
    for (int v = 0; v < ns; ++v) {
      if (s_vars[v].first == i) row[v] = 1.0;
    }
    a_rows.push_back(std::move(row));
    b_vals.push_back(p_y[i]);
  }
  if (np > 0) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
    for (int v = 0; v < np; ++v) row[p_off + v] = 1.0;
    a_rows.push_back(std::move(row));
    b_vals.push_back(1.0);
  }
  problem.A.resize(static_cast<int>(a_rows.size()), n);
  problem.b.resize(static_cast<int>(b_vals.size()));
  for (std::size_t r = 0; r < a_rows.size(); ++r) {
    problem.A.row(static_cast<int>(r)) = a_rows[r].transpose();
    problem.b[static_cast<int>(r)] = b_vals[r];
  }

  // Strictly feasible start.
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n);
  if (ns > 0) {
    double spread_cost = 0.0;
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) spread_cost += p_y[i] * cost(i, j) / k;
    }
    const double theta =
        spread_cost > 0.0 ? std::min(0.5, L / (2.0 * spread_cost)) : 0.5;
    for (int v = 0; v < ns; ++v) {
      const auto [i, j] = s_vars[v];
      x0[v] = p_y[i] * (theta / k + (i == j ? 1.0 - theta : 0.0));
    }
  }
  if (np > 0 && !set.is_ball) {
    double total = 0.0;
    for (double u : set.upper) total += u;
    for (int a = 0; a < k; ++a) {
      // Scaling the box corner by 1/total keeps every coordinate strictly
      // inside (0, upper).
      if (p_index[a] >= 0) x0[p_off + p_index[a]] = set.upper[a] / total;
    }
  } else if (np > 0) {
    const double theta = std::min(0.5, set.radius / 4.0);
    double l1 = 0.0;
    for (int a = 0; a < k; ++a) {
      const double p = (1.0 - theta) * set.center[a] + theta / k;
      x0[p_off + a] = p;
      l1 += std::abs(p - set.center[a]);
    }
    if (ne > 0) {
      for (int a = 0; a < k; ++a) {
        x0[e_off + a] = std::abs(x0[p_off + a] - set.center[a]) +
                        (set.radius - l1) / (2.0 * k);
      }
    }
  }

  const BarrierResult res = SolveBarrier(problem, x0);
  TransportMap s = RepairMap(build_map(res.x), p_y, L, cost);
  Pmf p = Normalized(training_of(res.x));
  return {res.value / kLn2, std::move(s), std::move(p)};
}

}  // namespace internal

AttackResult AttackTest(const Pmf& p_y, const Pmf& p_t, const GameConfig& cfg,
                        const CostMatrix& cost) {
  cfg.Validate();
  CheckSameSize(p_y.size(), p_t.size());
  CheckSameSize(p_y.size(), cost.size());
  internal::TrainingSet set;
  double ratio = cfg.c;
  if (cfg.variant == Variant::kAddition) {
    set.upper = p_t.values();
    for (double& u : set.upper) u /= (1.0 - cfg.alpha);
    ratio = (1.0 - cfg.alpha) * cfg.c;
  } else {
    set.is_ball = true;
    set.center = p_t.values();
    set.radius = 2.0 * cfg.alpha;
  }
  TransportMap s = BestTransport(p_y, cost, cfg, set, ratio, p_t);
  return Finish(p_t, p_t, std::move(s), cfg);
}

AttackResult AttackTargetedAddition(const Pmf& p_tau, const Pmf& p_y,
                                    const GameConfig& cfg,
                                    const CostMatrix& cost) {
  GameConfig add = cfg;
  add.variant = Variant::kAddition;
  add.Validate();
  CheckSameSize(p_y.size(), p_tau.size());
  CheckSameSize(p_y.size(), cost.size());
  const double alpha = add.alpha;
  const double ratio = (1.0 - alpha) * add.c;
  internal::TrainingSet set;
  set.is_ball = true;
  set.center = p_tau.values();
  set.radius = add.ReachRadius();

  TransportMap s = TransportMap::Identity(p_y);
  Pmf target = p_tau;
  if (add.L > 0.0) {
    internal::JointSolution joint =
        internal::SolveJoint(p_y, cost, add.L, ratio, set);
    s = std::move(joint.transport);
  }
  target = MinHcOverBall(ColMarginal(s), p_tau, set.radius, ratio).p_prime;

  // Fake samples realizing the cleaned pmf `target`: the defender's box
  // P' <= P_tau + alpha / (1 - alpha) Q must contain it.
  Pmf q = p_tau;
  if (alpha > 0.0) {
    const double a = alpha / (1.0 - alpha);
    std::vector<double> up(p_tau.size());
    double moved = 0.0;
    for (int i = 0; i < p_tau.size(); ++i) {
      up[i] = std::max(0.0, target[i] - p_tau[i]) / a;
      moved += up[i];
    }
    const double rest = std::max(0.0, 1.0 - moved);
    for (int i = 0; i < p_tau.size(); ++i) up[i] += rest * target[i];
    q = Normalized(std::move(up));
  }
  std::vector<double> t(p_tau.size());
  for (int i = 0; i < p_tau.size(); ++i) {
    t[i] = (1.0 - alpha) * p_tau[i] + alpha * q[i];
  }
  Pmf training = Normalized(std::move(t));
  AttackResult out = Finish(std::move(q), std::move(training), s, add);
  if (add.L > 0.0) {
    // Keep the identity map if it does at least as well.
    AttackResult still = AttackTargetedAddition(
        p_tau, p_y, [&] { GameConfig g = add; g.L = 0.0; return g; }(), cost);
    if (still.achieved_statistic <= out.achieved_statistic) return still;
  }
  return out;
}

AttackResult AttackTargetedReplacement(const Pmf& p_tau, const Pmf& p_y,
                                       const GameConfig& cfg,
                                       const CostMatrix& cost) {
  GameConfig rep = cfg;
  rep.variant = Variant::kReplacement;
  rep.Validate();
  CheckSameSize(p_y.size(), p_tau.size());
  CheckSameSize(p_y.size(), cost.size());
  internal::TrainingSet set;
  set.is_ball = true;
  set.center = p_tau.values();
  set.radius = rep.ReachRadius();

  TransportMap s = TransportMap::Identity(p_y);
  if (rep.L > 0.0) {
    s = internal::SolveJoint(p_y, cost, rep.L, rep.c, set).transport;
  }
  const Pmf target =
      MinHcOverBall(ColMarginal(s), p_tau, set.radius, rep.c).p_prime;
  // The midpoint is within 2 alpha of both the clean training pmf and the
  // cleaned pmf the defender will reach.
  std::vector<double> t(p_tau.size());
  for (int i = 0; i < p_tau.size(); ++i) t[i] = 0.5 * (p_tau[i] + target[i]);
  Pmf training = Normalized(std::move(t));
  AttackResult out = Finish(training, training, s, rep);
  if (rep.L > 0.0) {
    GameConfig still_cfg = rep;
    still_cfg.L = 0.0;
    AttackResult still = AttackTargetedReplacement(p_tau, p_y, still_cfg, cost);
    if (still.achieved_statistic <= out.achieved_statistic) return still;
  }
  return out;
}

AttackResult AttackTargeted(const Pmf& p_tau, const Pmf& p_y,
                            const GameConfig& cfg, const CostMatrix& cost) {
  return cfg.variant == Variant::kAddition
             ? AttackTargetedAddition(p_tau, p_y, cfg, cost)
             : AttackTargetedReplacement(p_tau, p_y, cfg, cost);
}

TransportMap ClosestTransport(const Pmf& p_y, const Pmf& goal, double L,
                              const CostMatrix& cost) {
  const int k = p_y.size();
  CheckSameSize(k, goal.size());
  CheckSameSize(k, cost.size());
  if (L <= 0.0) return TransportMap::Identity(p_y);
  // Variables: S (k * k) then slack t (k); minimize sum t with
  // |col_j(S) - goal_j| <= t_j.
  const int ns = k * k;
  LinearProgram lp;
  lp.num_vars = ns + k;
  lp.objective.assign(ns + k, 0.0);
  for (int j = 0; j < k; ++j) lp.objective[ns + j] = 1.0;
  for (int i = 0; i < k; ++i) {
    std::vector<double> row(ns + k, 0.0);
    for (int j = 0; j < k; ++j) row[i * k + j] = 1.0;
    lp.AddRow(std::move(row), RowSense::kEqual, p_y[i]);
  }
  for (int j = 0; j < k; ++j) {
    std::vector<double> up(ns + k, 0.0);
    std::vector<double> down(ns + k, 0.0);
    for (int i = 0; i < k; ++i) {
      up[i * k + j] = 1.0;
      down[i * k + j] = -1.0;
    }
    up[ns + j] = -1.0;
    down[ns + j] = -1.0;
    lp.AddRow(std::move(up), RowSense::kLessEqual, goal[j]);
    lp.AddRow(std::move(down), RowSense::kLessEqual, -goal[j]);
  }
  std::vector<double> budget(ns + k, 0.0);
  for (int e = 0; e < ns; ++e) budget[e] = cost.entries()[e];
  lp.AddRow(std::move(budget), RowSense::kLessEqual, L);
  LpSolution sol = SolveLp(lp);
  if (sol.status != LpStatus::kOptimal) {
    throw std::logic_error("closest transport: program not solved");
  }
  sol.x.resize(ns);
  return RepairMap(std::move(sol.x), p_y, L, cost);
}

NonTargetedAttacker::NonTargetedAttacker(Pmf p_y_model, GameConfig cfg,
                                         CostMatrix cost)
    : p_y_model_(std::move(p_y_model)), cfg_(cfg), cost_(std::move(cost)) {
  cfg_.Validate();
  CheckSameSize(p_y_model_.size(), cost_.size());
}

AttackResult NonTargetedAttacker::Plan(const Pmf& p_tau) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(p_tau.values());
    if (it != cache_.end()) return it->second;
  }
  AttackResult plan = AttackTargeted(p_tau, p_y_model_, cfg_, cost_);
  std::lock_guard<std::mutex> lock(mu_);
  return cache_.try_emplace(p_tau.values(), std::move(plan)).first->second;
}

AttackResult NonTargetedAttacker::Attack(const Pmf& p_tau,
                                         const Pmf& p_y_observed) const {
  AttackResult plan = Plan(p_tau);
  TransportMap s =
      ClosestTransport(p_y_observed, plan.attacked_pmf, cfg_.L, cost_);
  return Finish(std::move(plan.fake_training),
                std::move(plan.corrupted_training), std::move(s), cfg_);
}

std::size_t NonTargetedAttacker::cache_size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return cache_.size();
}

AttackResult AttackNonTargetedAddition(const Pmf& p_tau, const Pmf& p_y_model,
                                       const Pmf& p_y_observed,
                                       const GameConfig& cfg,
                                       const CostMatrix& cost) {
  GameConfig add = cfg;
  add.variant = Variant::kAddition;
  return NonTargetedAttacker(p_y_model, add, cost).Attack(p_tau, p_y_observed);
}

}  // namespace advsi
