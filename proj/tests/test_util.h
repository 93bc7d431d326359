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

// Random instance generators shared by the property tests.

#ifndef ADVSI_TESTS_TEST_UTIL_H_
#define ADVSI_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "advsi/pmf.h"
#include "advsi/transport.h"

namespace advsi::testing {

// Dirichlet(1, ..., 1) draw; with probability `zero_prob` each symbol is
// forced to zero (at least one symbol keeps mass).
inline Pmf RandomPmf(int k, std::mt19937_64& rng, double zero_prob = 0.0) {
  std::exponential_distribution<double> expo(1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> p(k);
  double sum = 0.0;
  for (int a = 0; a < k; ++a) {
    p[a] = unif(rng) < zero_prob ? 0.0 : expo(rng);
    sum += p[a];
  }
  if (sum == 0.0) {
    p[std::uniform_int_distribution<int>(0, k - 1)(rng)] = 1.0;
    sum = 1.0;
  }
  for (double& x : p) x /= sum;
  return Pmf(std::move(p));
}

// Random symmetric metric: shortest-path closure of random positive weights.
inline CostMatrix RandomMetricCost(int k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.1, 1.0);
  std::vector<double> d(k * k, 0.0);
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) d[i * k + j] = d[j * k + i] = unif(rng);
  }
  for (int m = 0; m < k; ++m) {
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        d[i * k + j] = std::min(d[i * k + j], d[i * k + m] + d[m * k + j]);
      }
    }
  }
  return CostMatrix(k, std::move(d));
}

// Random transport map with row marginal p.
inline TransportMap RandomMap(const Pmf& p, std::mt19937_64& rng) {
  const int k = p.size();
  std::vector<double> s(k * k, 0.0);
  for (int i = 0; i < k; ++i) {
    const Pmf row = RandomPmf(k, rng, 0.3);
    for (int j = 0; j < k; ++j) s[i * k + j] = p[i] * row[j];
  }
  return TransportMap(k, std::move(s));
}

inline double Uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace advsi::testing

#endif  // ADVSI_TESTS_TEST_UTIL_H_
