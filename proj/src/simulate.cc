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

#include "advsi/simulate.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>

#include "advsi/attacker.h"
#include "advsi/defender.h"
#include "advsi/rng.h"

namespace advsi {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void CheckSameSize(int a, int b) {
  if (a != b) {
    throw std::domain_error("alphabet size mismatch: " + std::to_string(a) +
                            " vs " + std::to_string(b));
  }
}

int ThreadCount(const SimulationOptions& options, std::int64_t trials) {
  int threads = options.threads > 0
                    ? options.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, threads);
  return static_cast<int>(std::min<std::int64_t>(threads, trials));
}

// Runs body(t) for t in [0, trials) on `threads` workers and sums the returned
// count pairs. Summation is order independent, so the result does not depend
// on the number of workers.
template <typename Body>
std::pair<std::int64_t, std::int64_t> ParallelCount(std::int64_t trials,
                                                    int threads, Body body) {
  std::vector<std::pair<std::int64_t, std::int64_t>> partial(threads, {0, 0});
  std::vector<std::exception_ptr> errors(threads);
  auto work = [&](int w) {
    try {
      for (std::int64_t t = w; t < trials; t += threads) {
        const auto [a, b] = body(t);
        partial[w].first += a;
        partial[w].second += b;
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (std::thread& th : pool) th.join();
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::pair<std::int64_t, std::int64_t> total{0, 0};
  for (const auto& [a, b] : partial) {
    total.first += a;
    total.second += b;
  }
  return total;
}

double ExponentHat(std::int64_t count, std::int64_t trials, std::int64_t n) {
  if (count == 0) return kInf;
  const double p = static_cast<double>(count) / static_cast<double>(trials);
  return std::max(0.0, -std::log2(p) / static_cast<double>(n));
}

Pmf CountsToPmf(const std::vector<std::int64_t>& counts) {
  return EmpiricalType(counts).ToPmf();
}

// Training sequence counts after the corruption planned in `plan`.
std::vector<std::int64_t> CorruptTraining(const std::vector<std::int64_t>& clean,
                                          const AttackResult& plan,
                                          std::int64_t fake,
                                          Variant variant) {
  if (variant == Variant::kAddition) {
    std::vector<std::int64_t> counts = clean;
    const std::vector<std::int64_t> q =
        RoundToCounts(plan.fake_training.values(), fake);
    for (std::size_t a = 0; a < counts.size(); ++a) counts[a] += q[a];
    return counts;
  }
  return ReplacementCounts(clean, plan.corrupted_training, fake);
}

std::vector<std::int64_t> ColumnSums(const std::vector<std::int64_t>& s,
                                     int k) {
  std::vector<std::int64_t> z(k, 0);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) z[j] += s[i * k + j];
  }
  return z;
}

// Lattice points of the simplex with denominator `den`.
void EnumerateLattice(int k, int den, std::vector<int>& prefix,
                      const std::function<void(const std::vector<int>&)>& f) {
  if (static_cast<int>(prefix.size()) == k - 1) {
    int used = 0;
    for (int v : prefix) used += v;
    prefix.push_back(den - used);
    f(prefix);
    prefix.pop_back();
    return;
  }
  int used = 0;
  for (int v : prefix) used += v;
  for (int v = 0; v <= den - used; ++v) {
    prefix.push_back(v);
    EnumerateLattice(k, den, prefix, f);
    prefix.pop_back();
  }
}

double Binomial(int n, int r) {
  double out = 1.0;
  for (int i = 1; i <= r; ++i) out = out * (n - r + i) / i;
  return out;
}

}  // namespace

std::vector<std::int64_t> ReplacementCounts(
    const std::vector<std::int64_t>& clean, const Pmf& target,
    std::int64_t budget) {
  CheckSameSize(static_cast<int>(clean.size()), target.size());
  std::int64_t m = 0;
  for (std::int64_t v : clean) m += v;
  std::vector<std::int64_t> out = RoundToCounts(target.values(), m);
  const int k = static_cast<int>(clean.size());
  auto replaced = [&] {
    std::int64_t r = 0;
    for (int a = 0; a < k; ++a) r += std::max<std::int64_t>(0, clean[a] - out[a]);
    return r;
  };
  while (replaced() > budget) {
    int low = -1;
    int high = -1;
    for (int a = 0; a < k; ++a) {
      const std::int64_t d = out[a] - clean[a];
      if (d < 0 && (low < 0 || d < out[low] - clean[low])) low = a;
      if (d > 0 && (high < 0 || d > out[high] - clean[high])) high = a;
    }
    ++out[low];
    --out[high];
  }
  return out;
}

std::vector<std::int64_t> RealizeAttack(const TransportMap& s,
                                        const std::vector<std::int64_t>& counts,
                                        double L, const CostMatrix& cost) {
  const int k = s.size();
  std::vector<std::int64_t> q = QuantizeRows(s, counts);
  std::int64_t n = 0;
  for (std::int64_t v : counts) n += v;
  const double budget = L * static_cast<double>(n) + 1e-9;
  double dist = 0.0;
  for (int e = 0; e < k * k; ++e) {
    dist += static_cast<double>(q[e]) * cost.entries()[e];
  }
  while (dist > budget) {
    int best = -1;
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        const int e = i * k + j;
        if (i == j || q[e] == 0) continue;
        if (best < 0 || cost.entries()[e] > cost.entries()[best]) best = e;
      }
    }
    if (best < 0) break;
    --q[best];
    ++q[(best / k) * k + best / k];
    dist -= cost.entries()[best];
  }
  return q;
}

SimulationReport RunGameTrials(const Pmf& p_x, const Pmf& p_y,
                               const GameConfig& cfg, const CostMatrix& cost,
                               std::int64_t n, std::int64_t trials,
                               std::uint64_t seed,
                               const SimulationOptions& options) {
  cfg.Validate();
  CheckSameSize(p_x.size(), p_y.size());
  CheckSameSize(p_x.size(), cost.size());
  CheckSameSize(p_x.size(), cfg.alphabet_size);
  if (n < 2) throw std::domain_error("n: must be >= 2");
  if (trials < 1) throw std::domain_error("trials: must be >= 1");

  const std::int64_t m = cfg.TrainingLength(n);
  const std::int64_t m2 = cfg.FakeLength(n);
  const std::int64_t m1 = m - m2;
  if (m1 < 1) throw std::domain_error("c: training sequence is empty");
  // Decisions and attacks use the corruption fraction actually realized.
  GameConfig eff = cfg;
  eff.alpha = static_cast<double>(m2) / static_cast<double>(m);
  const std::int64_t clean_len = cfg.variant == Variant::kAddition ? m1 : m;
  const int k = p_x.size();

  NonTargetedAttacker planner(p_y, eff, cost);
  std::mutex targeted_mu;
  std::map<std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>>,
           AttackResult>
      targeted_cache;
  auto targeted = [&](const std::vector<std::int64_t>& tau,
                      const std::vector<std::int64_t>& y) {
    auto key = std::make_pair(tau, y);
    {
      std::lock_guard<std::mutex> lock(targeted_mu);
      auto it = targeted_cache.find(key);
      if (it != targeted_cache.end()) return it->second;
    }
    AttackResult res =
        AttackTargeted(CountsToPmf(tau), CountsToPmf(y), eff, cost);
    std::lock_guard<std::mutex> lock(targeted_mu);
    return targeted_cache.try_emplace(std::move(key), std::move(res))
        .first->second;
  };

  auto trial = [&](std::int64_t t) -> std::pair<std::int64_t, std::int64_t> {
    Xoshiro256 rng(StreamSeed(seed, static_cast<std::uint64_t>(t)));
    // H0: clean test sequence, corrupted training.
    const std::vector<std::int64_t> x = SampleCounts(p_x, n, rng);
    const std::vector<std::int64_t> tau0 = SampleCounts(p_x, clean_len, rng);
    const std::vector<std::int64_t> train0 =
        CorruptTraining(tau0, planner.Plan(CountsToPmf(tau0)), m2, eff.variant);
    const bool fp =
        !Decide(EmpiricalType(x), EmpiricalType(train0), eff).accept_h0;

    // H1: attacked test sequence from Y, corrupted training.
    const std::vector<std::int64_t> y = SampleCounts(p_y, n, rng);
    const std::vector<std::int64_t> tau1 = SampleCounts(p_x, clean_len, rng);
    const bool is_targeted = eff.attack_mode == AttackMode::kTargeted;
    const AttackResult plan =
        is_targeted ? targeted(tau1, y) : planner.Plan(CountsToPmf(tau1));
    const TransportMap s =
        is_targeted ? plan.transport
                    : ClosestTransport(CountsToPmf(y), plan.attacked_pmf,
                                       eff.L, cost);
    const std::vector<std::int64_t> train1 =
        CorruptTraining(tau1, plan, m2, eff.variant);
    const std::vector<std::int64_t> z =
        ColumnSums(RealizeAttack(s, y, eff.L, cost), k);
    const bool fn =
        Decide(EmpiricalType(z), EmpiricalType(train1), eff).accept_h0;
    return {fp ? 1 : 0, fn ? 1 : 0};
  };

  const auto [fp_count, fn_count] =
      ParallelCount(trials, ThreadCount(options, trials), trial);

  SimulationReport report;
  report.n = n;
  report.trials = trials;
  report.fp_count = fp_count;
  report.fn_count = fn_count;
  report.p_fp_hat = static_cast<double>(fp_count) / static_cast<double>(trials);
  report.p_fn_hat = static_cast<double>(fn_count) / static_cast<double>(trials);
  report.fp_exponent_hat = ExponentHat(fp_count, trials, n);
  report.fn_exponent_hat = ExponentHat(fn_count, trials, n);
  report.seed = seed;
  report.config_echo = cfg;
  report.fake_samples_rounded_to_zero = cfg.alpha > 0.0 && m2 == 0;
  report.degenerate_threshold = DecisionThreshold(n, eff) <= 0.0;
  return report;
}

std::vector<SimulationReport> ExponentSweep(
    const Pmf& p_x, const Pmf& p_y, const GameConfig& cfg,
    const CostMatrix& cost, const std::vector<std::int64_t>& n_list,
    std::int64_t trials, std::uint64_t seed, const SimulationOptions& options) {
  if (!std::is_sorted(n_list.begin(), n_list.end())) {
    throw std::domain_error("n_list: must be ascending");
  }
  std::vector<SimulationReport> out;
  for (std::int64_t n : n_list) {
    out.push_back(RunGameTrials(p_x, p_y, cfg, cost, n, trials,
                                StreamSeed(seed, static_cast<std::uint64_t>(n)),
                                options));
  }
  return out;
}

double MinDivergenceOver(const Pmf& p, const PmfPredicate& in_set) {
  const int k = p.size();
  double best = kInf;
  std::vector<double> best_q;
  auto consider = [&](std::vector<double> q) {
    const Pmf cand(std::move(q));
    if (!in_set(cand)) return;
    const double d = KlDivergence(cand, p);
    if (d < best) {
      best = d;
      best_q = cand.values();
    }
  };
  int den = 100000;
  if (k == 2) {
    for (int i = 0; i <= den; ++i) {
      const double q1 = static_cast<double>(i) / den;
      consider({1.0 - q1, q1});
    }
  } else {
    den = k;
    while (Binomial(den + 1 + k - 1, k - 1) <= 2e5) ++den;
    std::vector<int> prefix;
    EnumerateLattice(k, den, prefix, [&](const std::vector<int>& pts) {
      std::vector<double> q(k);
      for (int a = 0; a < k; ++a) q[a] = static_cast<double>(pts[a]) / den;
      consider(std::move(q));
    });
  }
  if (best_q.empty()) return kInf;
  // Pattern search: move mass between pairs of symbols with a shrinking step.
  for (double step = 1.0 / den; step > 1e-12; step *= 0.5) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) {
          if (a == b || best_q[a] < step) continue;
          std::vector<double> q = best_q;
          q[a] -= step;
          q[b] += step;
          const double before = best;
          consider(std::move(q));
          if (best < before - 1e-15) improved = true;
        }
      }
    }
  }
  return best;
}

std::vector<SanovPoint> SanovProbe(const Pmf& p, const PmfPredicate& in_set,
                                   const std::vector<std::int64_t>& n_list,
                                   std::int64_t trials, std::uint64_t seed,
                                   const SimulationOptions& options) {
  if (trials < 1) throw std::domain_error("trials: must be >= 1");
  const double bound = MinDivergenceOver(p, in_set);
  std::vector<SanovPoint> out;
  for (std::int64_t n : n_list) {
    if (n < 1) throw std::domain_error("n: must be >= 1");
    const std::uint64_t n_seed = StreamSeed(seed, static_cast<std::uint64_t>(n));
    const auto [hits, unused] = ParallelCount(
        trials, ThreadCount(options, trials),
        [&](std::int64_t t) -> std::pair<std::int64_t, std::int64_t> {
          Xoshiro256 rng(StreamSeed(n_seed, static_cast<std::uint64_t>(t)));
          return {in_set(CountsToPmf(SampleCounts(p, n, rng))) ? 1 : 0, 0};
        });
    (void)unused;
    out.push_back({n, hits, ExponentHat(hits, trials, n), bound, hits == 0});
  }
  return out;
}

double HausdorffDistance(const std::vector<Pmf>& a, const std::vector<Pmf>& b) {
  if (a.empty() || b.empty()) {
    throw std::domain_error("hausdorff: sets must be nonempty");
  }
  auto directed = [](const std::vector<Pmf>& from, const std::vector<Pmf>& to) {
    double worst = 0.0;
    for (const Pmf& x : from) {
      double nearest = kInf;
      for (const Pmf& y : to) nearest = std::min(nearest, L1Distance(x, y));
      worst = std::max(worst, nearest);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

}  // namespace advsi
