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

#include "advsi/rng.h"

#include <algorithm>
#include <random>

namespace advsi {
namespace {

std::uint64_t Rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

std::uint64_t SplitMix64::Next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Xoshiro256::Xoshiro256(std::uint64_t seed) {
  SplitMix64 sm(seed);
  for (std::uint64_t& s : s_) s = sm.Next();
}

Xoshiro256::result_type Xoshiro256::operator()() {
  const std::uint64_t result = Rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = Rotl(s_[3], 45);
  return result;
}

double Xoshiro256::Uniform() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

std::uint64_t StreamSeed(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 outer(index);
  SplitMix64 inner(seed ^ outer.Next());
  return inner.Next();
}

std::vector<std::int64_t> SampleCounts(const Pmf& p, std::int64_t n,
                                       Xoshiro256& rng) {
  const int k = p.size();
  std::vector<std::int64_t> counts(k, 0);
  std::int64_t left = n;
  double mass_left = 1.0;
  for (int a = 0; a < k - 1 && left > 0; ++a) {
    if (p[a] <= 0.0) continue;
    const double prob = std::clamp(p[a] / mass_left, 0.0, 1.0);
    std::binomial_distribution<std::int64_t> binom(left, prob);
    counts[a] = binom(rng);
    left -= counts[a];
    mass_left -= p[a];
    if (mass_left <= 0.0) break;
  }
  // Whatever is left belongs to the last symbol with positive probability.
  for (int a = k - 1; a >= 0 && left > 0; --a) {
    if (p[a] > 0.0) {
      counts[a] += left;
      left = 0;
    }
  }
  return counts;
}

}  // namespace advsi
