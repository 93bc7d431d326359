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

#ifndef ADVSI_RNG_H_
#define ADVSI_RNG_H_

#include <cstdint>
#include <limits>
#include <vector>

#include "advsi/pmf.h"

namespace advsi {

// SplitMix64 (Steele, Lea and Flood). Used to seed and to derive streams.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t Next();

 private:
  std::uint64_t state_;
};

// xoshiro256** 1.0 seeded with four SplitMix64 outputs. Satisfies
// UniformRandomBitGenerator.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()();
  // Uniform on [0, 1) with 53 random bits.
  double Uniform();

 private:
  std::uint64_t s_[4];
};

// Seed of stream `index` under master `seed`. Streams depend only on
// (seed, index), never on the order in which they are drawn.
std::uint64_t StreamSeed(std::uint64_t seed, std::uint64_t index);

// Counts of n i.i.d. draws from p, by sequential binomial sampling.
std::vector<std::int64_t> SampleCounts(const Pmf& p, std::int64_t n,
                                       Xoshiro256& rng);

}  // namespace advsi

#endif  // ADVSI_RNG_H_
