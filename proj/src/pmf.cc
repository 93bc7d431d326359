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

#include "advsi/pmf.h"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace advsi {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLn2 = 0.69314718055994530942;

void CheckSameSize(std::size_t a, std::size_t b) {
  if (a != b) {
    throw std::domain_error("alphabet size mismatch: " + std::to_string(a) +
                            " vs " + std::to_string(b));
  }
}

}  // namespace

Pmf::Pmf(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw std::domain_error("pmf: empty alphabet");
  double sum = 0.0;
  for (double& p : probs_) {
    if (!std::isfinite(p) || p < -kPmfTolerance) {
      throw std::domain_error("pmf: entries must be finite and nonnegative");
    }
    if (p < 0.0) p = 0.0;
    sum += p;
  }
  if (std::abs(sum - 1.0) > kRenormalizeTolerance) {
    throw std::domain_error("pmf: entries sum to " + std::to_string(sum));
  }
  if (sum != 1.0) {
    for (double& p : probs_) p /= sum;
  }
}

Pmf Pmf::Uniform(int alphabet_size) {
  if (alphabet_size < 1) throw std::domain_error("pmf: empty alphabet");
  return Pmf(std::vector<double>(alphabet_size, 1.0 / alphabet_size));
}

Pmf Pmf::PointMass(int alphabet_size, int symbol) {
  if (symbol < 0 || symbol >= alphabet_size) {
    throw std::domain_error("pmf: point mass outside the alphabet");
  }
  std::vector<double> probs(alphabet_size, 0.0);
  probs[symbol] = 1.0;
  return Pmf(std::move(probs));
}

Pmf Pmf::Bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error("bern(p): p must lie in [0, 1]");
  }
  return Pmf({1.0 - p, p});
}

EmpiricalType::EmpiricalType(std::vector<std::int64_t> counts)
    : counts_(std::move(counts)) {
  if (counts_.empty()) throw std::domain_error("type: empty alphabet");
  for (std::int64_t k : counts_) {
    if (k < 0) throw std::domain_error("type: negative count");
    n_ += k;
  }
  if (n_ < 1) throw std::domain_error("type: sequence length must be >= 1");
}

Pmf EmpiricalType::ToPmf() const {
  std::vector<double> probs(counts_.size());
  for (std::size_t a = 0; a < counts_.size(); ++a) {
    probs[a] = static_cast<double>(counts_[a]) / static_cast<double>(n_);
  }
  return Pmf(std::move(probs));
}

std::string VariantName(Variant v) {
  return v == Variant::kAddition ? "addition" : "replacement";
}

Variant ParseVariant(const std::string& name) {
  if (name == "addition") return Variant::kAddition;
  if (name == "replacement") return Variant::kReplacement;
  throw std::domain_error("variant: expected addition|replacement, got '" +
                          name + "'");
}

void GameConfig::Validate() const {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw std::domain_error("alpha: must lie in [0, 1)");
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::domain_error("lambda: must be a finite value >= 0");
  }
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw std::domain_error("c: must be a finite value > 0");
  }
  if (!(L >= 0.0) || !std::isfinite(L)) {
    throw std::domain_error("L: must be a finite value >= 0");
  }
  if (alphabet_size < 2) {
    throw std::domain_error("alphabet_size: must be >= 2");
  }
}

std::int64_t GameConfig::TrainingLength(std::int64_t n) const {
  return std::llround(c * static_cast<double>(n));
}

std::int64_t GameConfig::FakeLength(std::int64_t n) const {
  return std::llround(alpha * static_cast<double>(TrainingLength(n)));
}

std::int64_t GameConfig::CleanLength(std::int64_t n) const {
  return TrainingLength(n) - FakeLength(n);
}

double GameConfig::StatisticRatio() const {
  return variant == Variant::kAddition ? (1.0 - alpha) * c : c;
}

double GameConfig::ReachRadius() const {
  return variant == Variant::kAddition ? 2.0 * alpha / (1.0 - alpha)
                                       : 4.0 * alpha;
}

EmpiricalType MakeEmpiricalType(std::span<const int> sequence,
                                int alphabet_size) {
  if (sequence.empty()) throw std::domain_error("type: empty sequence");
  if (alphabet_size < 1) throw std::domain_error("type: empty alphabet");
  std::vector<std::int64_t> counts(alphabet_size, 0);
  for (int s : sequence) {
    if (s < 0 || s >= alphabet_size) {
      throw std::domain_error("type: symbol " + std::to_string(s) +
                              " outside the alphabet");
    }
    ++counts[s];
  }
  return EmpiricalType(std::move(counts));
}

double KlDivergence(const Pmf& p, const Pmf& q) {
  CheckSameSize(p.size(), q.size());
  return kernel::Kl(p.probs(), q.probs());
}

double L1Distance(const Pmf& p, const Pmf& q) {
  CheckSameSize(p.size(), q.size());
  return kernel::L1(p.probs(), q.probs());
}

double Hc(const Pmf& p, const Pmf& p_prime, double c) {
  CheckSameSize(p.size(), p_prime.size());
  if (!(c > 0.0)) throw std::domain_error("h_c: c must be > 0");
  return kernel::Hc(p.probs(), p_prime.probs(), c);
}

double DeltaN(std::int64_t n, const GameConfig& cfg) {
  if (n < 1) throw std::domain_error("delta_n: n must be >= 1");
  const double nd = static_cast<double>(n);
  const double m1 = (1.0 - cfg.alpha) * nd * cfg.c;
  return cfg.alphabet_size * std::log2((nd + 1.0) * (m1 + 1.0)) / nd;
}

namespace kernel {

double Kl(std::span<const double> p, std::span<const double> q) {
  CheckSameSize(p.size(), q.size());
  double sum = 0.0;
  for (std::size_t a = 0; a < p.size(); ++a) {
    if (p[a] <= 0.0) continue;
    if (q[a] <= 0.0) return kInf;
    sum += p[a] * std::log(p[a] / q[a]);
  }
  return std::max(0.0, sum / kLn2);
}

double L1(std::span<const double> p, std::span<const double> q) {
  CheckSameSize(p.size(), q.size());
  double sum = 0.0;
  for (std::size_t a = 0; a < p.size(); ++a) sum += std::abs(p[a] - q[a]);
  return sum;
}

double Hc(std::span<const double> p, std::span<const double> p_prime,
          double c) {
  CheckSameSize(p.size(), p_prime.size());
  double sum = 0.0;
  for (std::size_t a = 0; a < p.size(); ++a) {
    sum += HcCoordinate(p[a], p_prime[a], c).value;
  }
  return std::max(0.0, sum / kLn2);
}

HcTerm HcCoordinate(double v, double p, double c) {
  HcTerm t;
  if (v <= 0.0 && p <= 0.0) return t;
  if (p <= 0.0) {
    t.value = v * std::log1p(c);
    t.dv = std::log1p(c);
    t.dp = -kInf;
    t.dvp = -c / v;
    t.dpp = kInf;
    return t;
  }
  if (v <= 0.0) {
    const double slope = c * std::log((1.0 + c) / c);
    t.value = slope * p;
    t.dp = slope;
    t.dv = -kInf;
    t.dvv = kInf;
    t.dvp = -1.0 / p;
    return t;
  }
  const double s = v + c * p;
  const double w = s / (1.0 + c);
  const double log_w = std::log(w);
  t.value = v * (std::log(v) - log_w) + c * p * (std::log(p) - log_w);
  t.dv = std::log(v) - log_w;
  t.dp = c * (std::log(p) - log_w);
  t.dvv = 1.0 / v - 1.0 / s;
  t.dvp = -c / s;
  t.dpp = c / p - c * c / s;
  return t;
}

}  // namespace kernel
}  // namespace advsi
