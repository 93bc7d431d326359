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

#ifndef ADVSI_PMF_H_
#define ADVSI_PMF_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace advsi {

// Entries of a Pmf sum to one within this tolerance.
inline constexpr double kPmfTolerance = 1e-12;
// Inputs whose sum is off by at most this much are renormalized; anything
// farther is rejected.
inline constexpr double kRenormalizeTolerance = 1e-9;

// A probability mass function over the finite alphabet {0, ..., K-1}.
// Immutable once constructed.
class Pmf {
 public:
  // Throws std::domain_error on negative entries, an empty vector, or a sum
  // farther than kRenormalizeTolerance from one.
  explicit Pmf(std::vector<double> probs);

  static Pmf Uniform(int alphabet_size);
  static Pmf PointMass(int alphabet_size, int symbol);
  // Binary pmf (1 - p, p): p is the probability of symbol 1.
  static Pmf Bernoulli(double p);

  int size() const { return static_cast<int>(probs_.size()); }
  double operator[](int a) const { return probs_[a]; }
  std::span<const double> probs() const { return probs_; }
  const std::vector<double>& values() const { return probs_; }

  friend bool operator==(const Pmf& a, const Pmf& b) = default;

 private:
  std::vector<double> probs_;
};

// Histogram of a sequence over {0, ..., K-1} together with its length.
class EmpiricalType {
 public:
  // n is the sum of the counts and must be at least one.
  explicit EmpiricalType(std::vector<std::int64_t> counts);

  std::int64_t n() const { return n_; }
  int size() const { return static_cast<int>(counts_.size()); }
  std::int64_t operator[](int a) const { return counts_[a]; }
  const std::vector<std::int64_t>& counts() const { return counts_; }
  Pmf ToPmf() const;

  friend bool operator==(const EmpiricalType& a,
                         const EmpiricalType& b) = default;

 private:
  std::vector<std::int64_t> counts_;
  std::int64_t n_ = 0;
};

enum class Variant { kAddition, kReplacement };
// kFiniteN compares against lambda - delta_n, kAsymptotic against lambda.
enum class ThresholdMode { kFiniteN, kAsymptotic };
// Training corruption under H1: two-step (proxy P_Y) or targeted to y^n.
enum class AttackMode { kNonTargeted, kTargeted };

std::string VariantName(Variant v);
Variant ParseVariant(const std::string& name);

// Parameters of the source identification game with corrupted training.
struct GameConfig {
  double alpha = 0.0;   // fraction of training samples controlled by A
  double lambda = 0.1;  // false positive exponent (bits)
  double c = 1.0;       // training length over test length, m = c n
  double L = 0.0;       // per-letter distortion budget on the test sequence
  Variant variant = Variant::kAddition;
  int alphabet_size = 2;
  ThresholdMode threshold_mode = ThresholdMode::kFiniteN;
  AttackMode attack_mode = AttackMode::kNonTargeted;

  // Throws std::domain_error naming the offending field.
  void Validate() const;

  // m = round(c n), m2 = round(alpha m), m1 = m - m2.
  std::int64_t TrainingLength(std::int64_t n) const;
  std::int64_t FakeLength(std::int64_t n) const;
  std::int64_t CleanLength(std::int64_t n) const;

  // Second-argument weight of h_c in the defender statistic: the cleaned
  // training sequence has (1 - alpha) m samples under Addition and m under
  // Replacement.
  double StatisticRatio() const;
  // L1 radius, around the clean training pmf, of the set of training pmfs
  // the defender may end up comparing against when the attacker also picks
  // the corruption (2 alpha / (1 - alpha) or 4 alpha).
  double ReachRadius() const;
};

// Type of a sequence of symbol indices.
EmpiricalType MakeEmpiricalType(std::span<const int> sequence,
                                int alphabet_size);

// Kullback-Leibler divergence in bits. 0 log(0/q) = 0 and p log(p/0) = +inf.
double KlDivergence(const Pmf& p, const Pmf& q);
double L1Distance(const Pmf& p, const Pmf& q);

// h_c(P, P') = D(P || U) + c D(P' || U), U = (P + c P') / (1 + c), in bits.
double Hc(const Pmf& p, const Pmf& p_prime, double c);

// K log2[(n + 1)((1 - alpha) n c + 1)] / n.
double DeltaN(std::int64_t n, const GameConfig& cfg);

// Span kernels shared by the solvers. Inputs need not be normalized; they
// must be nonnegative and of equal length.
namespace kernel {

double Kl(std::span<const double> p, std::span<const double> q);
double L1(std::span<const double> p, std::span<const double> q);
double Hc(std::span<const double> p, std::span<const double> p_prime, double c);

// Per-symbol term of h_c in nats and its derivatives with respect to
// (v, p). Structural zeros are handled by their one-sided limits.
struct HcTerm {
  double value = 0.0;
  double dv = 0.0;
  double dp = 0.0;
  double dvv = 0.0;
  double dvp = 0.0;
  double dpp = 0.0;
};
HcTerm HcCoordinate(double v, double p, double c);

}  // namespace kernel

}  // namespace advsi

#endif  // ADVSI_PMF_H_
