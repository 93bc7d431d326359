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

#include "advsi/defender.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace advsi {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void CheckAlpha(double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw std::domain_error("alpha: must lie in [0, 1)");
  }
}

void CheckSameSize(int a, int b) {
  if (a != b) {
    throw std::domain_error("alphabet size mismatch: " + std::to_string(a) +
                            " vs " + std::to_string(b));
  }
}

// Root of a nondecreasing continuous f on [lo, hi] with f(lo) <= target <=
// f(hi), by bisection down to adjacent doubles.
template <typename F>
double Bisect(F f, double lo, double hi, double target) {
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Builds a Pmf from nonnegative entries that sum to one up to rounding.
Pmf Normalized(std::vector<double> p) {
  double sum = 0.0;
  for (double& x : p) {
    x = std::max(0.0, x);
    sum += x;
  }
  for (double& x : p) x /= sum;
  return Pmf(std::move(p));
}

}  // namespace

CleanedMinimum MinHcOverBox(const Pmf& p_v, std::span<const double> upper,
                            double ratio) {
  const int k = p_v.size();
  CheckSameSize(k, static_cast<int>(upper.size()));
  double support_cap = 0.0;
  double r_max = 0.0;
  for (int a = 0; a < k; ++a) {
    if (p_v[a] > 0.0) {
      support_cap += upper[a];
      r_max = std::max(r_max, upper[a] / p_v[a]);
    }
  }
  std::vector<double> p(k, 0.0);
  if (support_cap >= 1.0) {
    // Gradient of the objective in P'(a) depends on P'(a)/P_v(a) only and is
    // increasing in it: a common ratio r, capped by the box.
    auto mass = [&](double r) {
      double s = 0.0;
      for (int a = 0; a < k; ++a) {
        if (p_v[a] > 0.0) s += std::min(r * p_v[a], upper[a]);
      }
      return s;
    };
    const double r = Bisect(mass, 0.0, r_max, 1.0);
    for (int a = 0; a < k; ++a) {
      if (p_v[a] > 0.0) p[a] = std::min(r * p_v[a], upper[a]);
    }
  } else {
    // Every symbol seen in the test is saturated; the rest goes where the test
    // pmf is zero, where the objective is linear with a common slope.
    double rest = 1.0 - support_cap;
    for (int a = 0; a < k; ++a) {
      if (p_v[a] > 0.0) {
        p[a] = upper[a];
      } else {
        p[a] = std::min(rest, upper[a]);
        rest -= p[a];
      }
    }
    if (rest > 1e-12) throw std::domain_error("box: upper bounds sum below 1");
  }
  Pmf p_prime = Normalized(std::move(p));
  return {Hc(p_v, p_prime, ratio), std::move(p_prime)};
}

CleanedMinimum MinHcOverBall(const Pmf& p_v, const Pmf& center, double radius,
                             double ratio) {
  const int k = p_v.size();
  CheckSameSize(k, center.size());
  if (L1Distance(p_v, center) <= radius) return {0.0, p_v};

  // Mass moved up equals mass moved down equals radius / 2. Coordinates that
  // grow share a ratio r_lo = P'/P_v, coordinates that shrink share r_hi.
  const double budget = 0.5 * radius;
  std::vector<double> p(center.values());
  double zero_mass = 0.0;
  for (int a = 0; a < k; ++a) {
    if (p_v[a] <= 0.0) zero_mass += center[a];
  }

  if (zero_mass >= budget) {
    double rest = budget;
    for (int a = 0; a < k && rest > 0.0; ++a) {
      if (p_v[a] > 0.0) continue;
      const double take = std::min(rest, p[a]);
      p[a] -= take;
      rest -= take;
    }
  } else {
    double r_top = 0.0;
    for (int a = 0; a < k; ++a) {
      if (p_v[a] <= 0.0) {
        p[a] = 0.0;
      } else {
        r_top = std::max(r_top, center[a] / p_v[a]);
      }
    }
    const double need = budget - zero_mass;
    // Decrease D(r) = sum (t - r v)^+ is nonincreasing; bisect on -D.
    auto neg_decrease = [&](double r) {
      double s = 0.0;
      for (int a = 0; a < k; ++a) {
        if (p_v[a] > 0.0) s += std::max(0.0, center[a] - r * p_v[a]);
      }
      return -s;
    };
    const double r_hi = Bisect(neg_decrease, 0.0, r_top, -need);
    for (int a = 0; a < k; ++a) {
      if (p_v[a] > 0.0) p[a] = std::min(center[a], r_hi * p_v[a]);
    }
  }

  double r_up = kInf;
  for (int a = 0; a < k; ++a) {
    if (p_v[a] > 0.0) r_up = std::min(r_up, (center[a] + budget) / p_v[a]);
  }
  auto increase = [&](double r) {
    double s = 0.0;
    for (int a = 0; a < k; ++a) {
      if (p_v[a] > 0.0) s += std::max(0.0, r * p_v[a] - center[a]);
    }
    return s;
  };
  const double r_lo = Bisect(increase, 0.0, r_up, budget);
  for (int a = 0; a < k; ++a) {
    if (p_v[a] > 0.0) p[a] = std::max(p[a], r_lo * p_v[a]);
  }
  Pmf p_prime = Normalized(std::move(p));
  return {Hc(p_v, p_prime, ratio), std::move(p_prime)};
}

AdditionStatistic StatisticAddition(const Pmf& p_v, const Pmf& p_t,
                                    double alpha, double c) {
  CheckAlpha(alpha);
  CheckSameSize(p_v.size(), p_t.size());
  if (!(c > 0.0)) throw std::domain_error("c: must be > 0");
  if (alpha == 0.0) return {Hc(p_v, p_t, c), p_t, p_t};
  std::vector<double> upper(p_t.values());
  for (double& u : upper) u /= (1.0 - alpha);
  CleanedMinimum best = MinHcOverBox(p_v, upper, (1.0 - alpha) * c);
  std::vector<double> q(p_t.size());
  for (int a = 0; a < p_t.size(); ++a) {
    q[a] = (p_t[a] - (1.0 - alpha) * best.p_prime[a]) / alpha;
  }
  return {best.value, Normalized(std::move(q)), std::move(best.p_prime)};
}

ReplacementStatistic StatisticReplacement(const Pmf& p_v, const Pmf& p_t,
                                          double alpha, double c) {
  CheckAlpha(alpha);
  CheckSameSize(p_v.size(), p_t.size());
  if (!(c > 0.0)) throw std::domain_error("c: must be > 0");
  if (alpha == 0.0) return {Hc(p_v, p_t, c), p_t, p_t, p_t};
  CleanedMinimum best = MinHcOverBall(p_v, p_t, 2.0 * alpha, c);
  const int k = p_t.size();
  double moved = 0.0;
  for (int a = 0; a < k; ++a) {
    moved += std::max(0.0, best.p_prime[a] - p_t[a]);
  }
  const double common = std::max(0.0, 1.0 - moved / alpha);
  std::vector<double> q_r(k);
  std::vector<double> q_a(k);
  for (int a = 0; a < k; ++a) {
    const double delta = best.p_prime[a] - p_t[a];
    const double shared = common * best.p_prime[a];
    q_r[a] = std::max(0.0, delta) / alpha + shared;
    q_a[a] = std::max(0.0, -delta) / alpha + shared;
  }
  return {best.value, Normalized(std::move(q_r)), Normalized(std::move(q_a)),
          std::move(best.p_prime)};
}

double DefenderStatistic(const Pmf& p_v, const Pmf& p_t,
                         const GameConfig& cfg) {
  return cfg.variant == Variant::kAddition
             ? StatisticAddition(p_v, p_t, cfg.alpha, cfg.c).value
             : StatisticReplacement(p_v, p_t, cfg.alpha, cfg.c).value;
}

double DecisionThreshold(std::int64_t n, const GameConfig& cfg) {
  if (cfg.threshold_mode == ThresholdMode::kAsymptotic) return cfg.lambda;
  return cfg.lambda - DeltaN(n, cfg);
}

DecisionOutcome Decide(const EmpiricalType& v, const EmpiricalType& t,
                       const GameConfig& cfg) {
  cfg.Validate();
  CheckSameSize(v.size(), t.size());
  CheckSameSize(v.size(), cfg.alphabet_size);
  const double expected = cfg.c * static_cast<double>(v.n());
  if (std::abs(static_cast<double>(t.n()) - expected) > 1.0) {
    throw std::domain_error("training length " + std::to_string(t.n()) +
                            " does not match c * n = " +
                            std::to_string(expected));
  }
  const Pmf p_v = v.ToPmf();
  const Pmf p_t = t.ToPmf();
  DecisionOutcome out;
  out.threshold = DecisionThreshold(v.n(), cfg);
  out.degenerate_threshold = out.threshold <= 0.0;
  if (cfg.variant == Variant::kAddition) {
    AdditionStatistic s = StatisticAddition(p_v, p_t, cfg.alpha, cfg.c);
    out.statistic = s.value;
    out.minimizer = {std::move(s.q)};
  } else {
    ReplacementStatistic s = StatisticReplacement(p_v, p_t, cfg.alpha, cfg.c);
    out.statistic = s.value;
    out.minimizer = {std::move(s.q_r), std::move(s.q_a)};
  }
  out.accept_h0 = !out.degenerate_threshold && out.statistic <= out.threshold;
  return out;
}

}  // namespace advsi
