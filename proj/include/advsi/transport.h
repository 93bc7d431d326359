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

#ifndef ADVSI_TRANSPORT_H_
#define ADVSI_TRANSPORT_H_

#include <cstdint>
#include <vector>

#include "advsi/pmf.h"

namespace advsi {

// Per-symbol distortion d(i, j): nonnegative, symmetric, zero diagonal.
class CostMatrix {
 public:
  // Row-major K x K entries. Throws std::domain_error if the matrix is not
  // square, has a negative entry, a nonzero diagonal, or is asymmetric.
  CostMatrix(int alphabet_size, std::vector<double> entries);

  // d(i, j) = |i - j|.
  static CostMatrix AbsoluteDifference(int alphabet_size);
  // d(i, j) = 1 for i != j.
  static CostMatrix Hamming(int alphabet_size);

  int size() const { return k_; }
  double operator()(int i, int j) const { return d_[i * k_ + j]; }
  const std::vector<double>& entries() const { return d_; }
  double MaxEntry() const;
  // True if d also satisfies the triangle inequality and d(i, j) > 0 off the
  // diagonal.
  bool IsMetric() const;

 private:
  int k_;
  std::vector<double> d_;
};

// Joint mass-movement matrix S(i, j): fraction of symbols i turned into j.
class TransportMap {
 public:
  // Row-major K x K entries. Entries within 1e-12 below zero are clamped and
  // a total within 1e-9 of one is renormalized; anything else throws.
  TransportMap(int alphabet_size, std::vector<double> entries);

  // diag(P): nothing is moved.
  static TransportMap Identity(const Pmf& p);

  int size() const { return k_; }
  double operator()(int i, int j) const { return s_[i * k_ + j]; }
  const std::vector<double>& entries() const { return s_; }

 private:
  int k_;
  std::vector<double> s_;
};

Pmf RowMarginal(const TransportMap& s);
Pmf ColMarginal(const TransportMap& s);

// Average per-letter distortion sum_ij S(i, j) d(i, j).
double MapDistortion(const TransportMap& s, const CostMatrix& cost);

// Row marginal equals P within 1e-9 and distortion <= L + 1e-12.
bool IsAdmissible(const TransportMap& s, const Pmf& p, double L,
                  const CostMatrix& cost);

// Entrywise L1 distance between maps.
double MapDistance(const TransportMap& a, const TransportMap& b);

// S_VP(i, j) = S_PV(j, i).
TransportMap Transpose(const TransportMap& s);

struct EmdResult {
  double value;
  TransportMap map;  // row marginal P, column marginal V
};

// Earth mover distance between P and V under `cost`, solved as a
// transportation linear program.
EmdResult Emd(const Pmf& p, const Pmf& v, const CostMatrix& cost);

// Moves the row marginal of `s` to `p_prime`. Rows that must gain mass get it
// on the diagonal; rows that must lose mass lose it from their most expensive
// entries first (ties broken by lower column index).
TransportMap PerturbMap(const TransportMap& s, const Pmf& p_prime,
                        const CostMatrix& cost);

// Rounds every entry to a multiple of 1/n. Row sums are first rounded to an
// n-type by largest remainder, then each row is rounded by largest remainder
// so that it keeps its rounded sum.
TransportMap QuantizeMap(const TransportMap& s, std::int64_t n);

// Largest-remainder rounding of weights * total / sum(weights) to integers
// summing to `total`. Ties go to the lower index.
std::vector<std::int64_t> RoundToCounts(const std::vector<double>& weights,
                                        std::int64_t total);

// Integer version of QuantizeMap: counts n(i, j) summing to n whose row sums
// equal `row_counts` exactly.
std::vector<std::int64_t> QuantizeRows(const TransportMap& s,
                                       const std::vector<std::int64_t>& row_counts);

}  // namespace advsi

#endif  // ADVSI_TRANSPORT_H_
