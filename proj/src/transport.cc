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

#include "advsi/transport.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "advsi/lp.h"

namespace advsi {
namespace {

void CheckSquare(int k, std::size_t entries, const char* what) {
  if (k < 1 || entries != static_cast<std::size_t>(k) * k) {
    throw std::domain_error(std::string(what) + ": expected " +
                            std::to_string(k) + "x" + std::to_string(k) +
                            " entries");
  }
}

void CheckSameSize(int a, int b) {
  if (a != b) {
    throw std::domain_error("alphabet size mismatch: " + std::to_string(a) +
                            " vs " + std::to_string(b));
  }
}

}  // namespace

std::vector<std::int64_t> RoundToCounts(const std::vector<double>& weights,
                                        std::int64_t total) {
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<std::int64_t> out(weights.size(), 0);
  if (total == 0 || sum <= 0.0) return out;
  std::vector<double> rem(weights.size());
  std::int64_t used = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double exact = weights[i] * static_cast<double>(total) / sum;
    out[i] = static_cast<std::int64_t>(std::floor(exact + 1e-9));
    rem[i] = exact - static_cast<double>(out[i]);
    used += out[i];
  }
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return rem[a] > rem[b]; });
  for (std::size_t k = 0; used < total; k = (k + 1) % order.size()) {
    if (weights[order[k]] <= 0.0) continue;
    ++out[order[k]];
    ++used;
  }
  while (used > total) {
    // Only reachable through the 1e-9 floor guard; undo the smallest remainder.
    for (auto it = order.rbegin(); it != order.rend() && used > total; ++it) {
      if (out[*it] > 0) {
        --out[*it];
        --used;
      }
    }
  }
  return out;
}

CostMatrix::CostMatrix(int alphabet_size, std::vector<double> entries)
    : k_(alphabet_size), d_(std::move(entries)) {
  CheckSquare(k_, d_.size(), "cost");
  for (int i = 0; i < k_; ++i) {
    for (int j = 0; j < k_; ++j) {
      const double v = (*this)(i, j);
      if (!std::isfinite(v) || v < 0.0) {
        throw std::domain_error("cost: entries must be finite and >= 0");
      }
      if (i == j && v != 0.0) {
        throw std::domain_error("cost: diagonal must be zero");
      }
      if (std::abs(v - (*this)(j, i)) > 1e-12) {
        throw std::domain_error("cost: matrix must be symmetric");
      }
    }
  }
}

CostMatrix CostMatrix::AbsoluteDifference(int alphabet_size) {
  std::vector<double> d(static_cast<std::size_t>(alphabet_size) * alphabet_size);
  for (int i = 0; i < alphabet_size; ++i) {
    for (int j = 0; j < alphabet_size; ++j) {
      d[i * alphabet_size + j] = std::abs(i - j);
    }
  }
  return CostMatrix(alphabet_size, std::move(d));
}

CostMatrix CostMatrix::Hamming(int alphabet_size) {
  std::vector<double> d(static_cast<std::size_t>(alphabet_size) * alphabet_size,
                        1.0);
  for (int i = 0; i < alphabet_size; ++i) d[i * alphabet_size + i] = 0.0;
  return CostMatrix(alphabet_size, std::move(d));
}

double CostMatrix::MaxEntry() const {
  return *std::max_element(d_.begin(), d_.end());
}

bool CostMatrix::IsMetric() const {
  for (int i = 0; i < k_; ++i) {
    for (int j = 0; j < k_; ++j) {
      if (i != j && (*this)(i, j) <= 0.0) return false;
      for (int l = 0; l < k_; ++l) {
        if ((*this)(i, j) > (*this)(i, l) + (*this)(l, j) + 1e-12) return false;
      }
    }
  }
  return true;
}

TransportMap::TransportMap(int alphabet_size, std::vector<double> entries)
    : k_(alphabet_size), s_(std::move(entries)) {
  CheckSquare(k_, s_.size(), "transport map");
  double sum = 0.0;
  for (double& v : s_) {
    if (!std::isfinite(v) || v < -1e-12) {
      throw std::domain_error("transport map: entries must be >= 0");
    }
    if (v < 0.0) v = 0.0;
    sum += v;
  }
  if (std::abs(sum - 1.0) > kRenormalizeTolerance) {
    throw std::domain_error("transport map: total mass " + std::to_string(sum));
  }
  if (sum != 1.0) {
    for (double& v : s_) v /= sum;
  }
}

TransportMap TransportMap::Identity(const Pmf& p) {
  const int k = p.size();
  std::vector<double> s(static_cast<std::size_t>(k) * k, 0.0);
  for (int i = 0; i < k; ++i) s[i * k + i] = p[i];
  return TransportMap(k, std::move(s));
}

Pmf RowMarginal(const TransportMap& s) {
  const int k = s.size();
  std::vector<double> m(k, 0.0);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) m[i] += s(i, j);
  }
  return Pmf(std::move(m));
}

Pmf ColMarginal(const TransportMap& s) {
  const int k = s.size();
  std::vector<double> m(k, 0.0);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) m[j] += s(i, j);
  }
  return Pmf(std::move(m));
}

double MapDistortion(const TransportMap& s, const CostMatrix& cost) {
  CheckSameSize(s.size(), cost.size());
  double total = 0.0;
  for (std::size_t e = 0; e < s.entries().size(); ++e) {
    total += s.entries()[e] * cost.entries()[e];
  }
  return total;
}

bool IsAdmissible(const TransportMap& s, const Pmf& p, double L,
                  const CostMatrix& cost) {
  CheckSameSize(s.size(), p.size());
  const Pmf rows = RowMarginal(s);
  for (int i = 0; i < p.size(); ++i) {
    if (std::abs(rows[i] - p[i]) > 1e-9) return false;
  }
  return MapDistortion(s, cost) <= L + 1e-12;
}

double MapDistance(const TransportMap& a, const TransportMap& b) {
  CheckSameSize(a.size(), b.size());
  double total = 0.0;
  for (std::size_t e = 0; e < a.entries().size(); ++e) {
    total += std::abs(a.entries()[e] - b.entries()[e]);
  }
  return total;
}

TransportMap Transpose(const TransportMap& s) {
  const int k = s.size();
  std::vector<double> t(s.entries().size());
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) t[j * k + i] = s(i, j);
  }
  return TransportMap(k, std::move(t));
}

EmdResult Emd(const Pmf& p, const Pmf& v, const CostMatrix& cost) {
  CheckSameSize(p.size(), v.size());
  CheckSameSize(p.size(), cost.size());
  const int k = p.size();
  LinearProgram lp;
  lp.num_vars = k * k;
  lp.objective = cost.entries();
  for (int i = 0; i < k; ++i) {
    std::vector<double> row(k * k, 0.0);
    for (int j = 0; j < k; ++j) row[i * k + j] = 1.0;
    lp.AddRow(std::move(row), RowSense::kEqual, p[i]);
  }
  // The last column constraint is implied by the others.
  for (int j = 0; j + 1 < k; ++j) {
    std::vector<double> col(k * k, 0.0);
    for (int i = 0; i < k; ++i) col[i * k + j] = 1.0;
    lp.AddRow(std::move(col), RowSense::kEqual, v[j]);
  }
  LpSolution sol = SolveLp(lp);
  if (sol.status != LpStatus::kOptimal) {
    throw std::logic_error("emd: transportation program not solved");
  }
  TransportMap map(k, std::move(sol.x));
  return {MapDistortion(map, cost), std::move(map)};
}

TransportMap PerturbMap(const TransportMap& s, const Pmf& p_prime,
                        const CostMatrix& cost) {
  CheckSameSize(s.size(), p_prime.size());
  CheckSameSize(s.size(), cost.size());
  const int k = s.size();
  const Pmf p = RowMarginal(s);
  std::vector<double> out = s.entries();
  for (int i = 0; i < k; ++i) {
    const double tau = p_prime[i] - p[i];
    if (tau > 0.0) {
      out[i * k + i] += tau;
      continue;
    }
    double excess = -tau;
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return cost(i, a) > cost(i, b);
    });
    for (int j : order) {
      if (excess <= 0.0) break;
      const double take = std::min(excess, out[i * k + j]);
      out[i * k + j] -= take;
      excess -= take;
    }
  }
  return TransportMap(k, std::move(out));
}

std::vector<std::int64_t> QuantizeRows(
    const TransportMap& s, const std::vector<std::int64_t>& row_counts) {
  const int k = s.size();
  CheckSameSize(k, static_cast<int>(row_counts.size()));
  std::vector<std::int64_t> out(static_cast<std::size_t>(k) * k, 0);
  for (int i = 0; i < k; ++i) {
    if (row_counts[i] < 0) throw std::domain_error("quantize: negative count");
    if (row_counts[i] == 0) continue;
    std::vector<double> row(s.entries().begin() + i * k,
                            s.entries().begin() + (i + 1) * k);
    if (std::accumulate(row.begin(), row.end(), 0.0) <= 0.0) {
      out[i * k + i] = row_counts[i];
      continue;
    }
    const std::vector<std::int64_t> q = RoundToCounts(row, row_counts[i]);
    std::copy(q.begin(), q.end(), out.begin() + i * k);
  }
  return out;
}

TransportMap QuantizeMap(const TransportMap& s, std::int64_t n) {
  if (n < 1) throw std::domain_error("quantize: n must be >= 1");
  const int k = s.size();
  const Pmf rows = RowMarginal(s);
  const std::vector<std::int64_t> row_counts = RoundToCounts(rows.values(), n);
  const std::vector<std::int64_t> counts = QuantizeRows(s, row_counts);
  std::vector<double> out(counts.size());
  for (std::size_t e = 0; e < counts.size(); ++e) {
    out[e] = static_cast<double>(counts[e]) / static_cast<double>(n);
  }
  return TransportMap(k, std::move(out));
}

}  // namespace advsi
