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

#ifndef ADVSI_LP_H_
#define ADVSI_LP_H_

#include <vector>

namespace advsi {

enum class RowSense { kLessEqual, kEqual, kGreaterEqual };

struct LpRow {
  std::vector<double> coeffs;  // one per variable
  RowSense sense;
  double rhs;
};

// minimize objective . x subject to rows, x >= 0.
struct LinearProgram {
  int num_vars = 0;
  std::vector<double> objective;
  std::vector<LpRow> rows;

  void AddRow(std::vector<double> coeffs, RowSense sense, double rhs);
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  double value = 0.0;
  std::vector<double> x;
};

// Dense two-phase tableau simplex with Bland's pivoting rule. Deterministic;
// intended for the small programs (a few hundred variables) used here.
LpSolution SolveLp(const LinearProgram& lp);

}  // namespace advsi

#endif  // ADVSI_LP_H_
