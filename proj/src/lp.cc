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

#include "advsi/lp.h"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace advsi {
namespace {

constexpr double kPivotEps = 1e-11;
constexpr double kFeasibilityEps = 1e-9;

class Tableau {
 public:
  Tableau(int rows, int cols)
      : rows_(rows), cols_(cols), t_((rows + 1) * (cols + 1), 0.0),
        basis_(rows, -1) {}

  double& at(int r, int c) { return t_[r * (cols_ + 1) + c]; }
  double& rhs(int r) { return at(r, cols_); }
  // The last row holds reduced costs; its rhs slot holds -objective.
  double& cost(int c) { return at(rows_, c); }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::vector<int>& basis() { return basis_; }

  void Pivot(int pr, int pc) {
    const double inv = 1.0 / at(pr, pc);
    for (int c = 0; c <= cols_; ++c) at(pr, c) *= inv;
    at(pr, pc) = 1.0;
    for (int r = 0; r <= rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (int c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
    basis_[pr] = pc;
  }

  void SetObjective(const std::vector<double>& c) {
    for (int j = 0; j <= cols_; ++j) cost(j) = j < cols_ ? c[j] : 0.0;
    for (int r = 0; r < rows_; ++r) {
      const double cb = c[basis_[r]];
      if (cb == 0.0) continue;
      for (int j = 0; j <= cols_; ++j) cost(j) -= cb * at(r, j);
    }
  }

  // Runs Bland's rule over columns [0, allowed). Returns false if unbounded.
  bool Optimize(int allowed) {
    for (;;) {
      int pc = -1;
      for (int j = 0; j < allowed; ++j) {
        if (cost(j) < -kPivotEps) {
          pc = j;
          break;
        }
      }
      if (pc < 0) return true;
      int pr = -1;
      double best = 0.0;
      for (int r = 0; r < rows_; ++r) {
        const double a = at(r, pc);
        if (a <= kPivotEps) continue;
        const double ratio = rhs(r) / a;
        if (pr < 0 || ratio < best - 1e-14 ||
            (std::abs(ratio - best) <= 1e-14 && basis_[r] < basis_[pr])) {
          pr = r;
          best = ratio;
        }
      }
      if (pr < 0) return false;
      Pivot(pr, pc);
    }
  }

 private:
  int rows_;
  int cols_;
  std::vector<double> t_;
  std::vector<int> basis_;
};

}  // namespace

void LinearProgram::AddRow(std::vector<double> coeffs, RowSense sense,
                           double rhs) {
  if (static_cast<int>(coeffs.size()) != num_vars) {
    throw std::invalid_argument("lp: row length does not match num_vars");
  }
  rows.push_back({std::move(coeffs), sense, rhs});
}

LpSolution SolveLp(const LinearProgram& lp) {
  const int n = lp.num_vars;
  const int m = static_cast<int>(lp.rows.size());
  if (static_cast<int>(lp.objective.size()) != n) {
    throw std::invalid_argument("lp: objective length does not match num_vars");
  }

  // Normalize to nonnegative right-hand sides.
  std::vector<LpRow> rows = lp.rows;
  for (LpRow& row : rows) {
    if (row.rhs < 0.0) {
      for (double& a : row.coeffs) a = -a;
      row.rhs = -row.rhs;
      if (row.sense == RowSense::kLessEqual) {
        row.sense = RowSense::kGreaterEqual;
      } else if (row.sense == RowSense::kGreaterEqual) {
        row.sense = RowSense::kLessEqual;
      }
    }
  }

  int num_slack = 0;
  int num_art = 0;
  for (const LpRow& row : rows) {
    if (row.sense != RowSense::kEqual) ++num_slack;
    if (row.sense != RowSense::kLessEqual) ++num_art;
  }
  const int art_begin = n + num_slack;
  const int cols = art_begin + num_art;
  Tableau tab(m, cols);

  int next_slack = n;
  int next_art = art_begin;
  for (int r = 0; r < m; ++r) {
    const LpRow& row = rows[r];
    for (int j = 0; j < n; ++j) tab.at(r, j) = row.coeffs[j];
    tab.rhs(r) = row.rhs;
    if (row.sense == RowSense::kLessEqual) {
      tab.at(r, next_slack) = 1.0;
      tab.basis()[r] = next_slack++;
    } else {
      if (row.sense == RowSense::kGreaterEqual) tab.at(r, next_slack++) = -1.0;
      tab.at(r, next_art) = 1.0;
      tab.basis()[r] = next_art++;
    }
  }

  LpSolution sol;
  if (num_art > 0) {
    std::vector<double> phase1(cols, 0.0);
    for (int j = art_begin; j < cols; ++j) phase1[j] = 1.0;
    tab.SetObjective(phase1);
    tab.Optimize(cols);
    if (-tab.cost(cols) > kFeasibilityEps) {
      sol.status = LpStatus::kInfeasible;
      return sol;
    }
    // Drive artificial variables out of the basis where possible. Rows that
    // cannot be cleared are redundant and stay pinned at zero.
    for (int r = 0; r < m; ++r) {
      if (tab.basis()[r] < art_begin) continue;
      for (int j = 0; j < art_begin; ++j) {
        if (std::abs(tab.at(r, j)) > 1e-9) {
          tab.Pivot(r, j);
          break;
        }
      }
    }
  }

  std::vector<double> phase2(cols, 0.0);
  for (int j = 0; j < n; ++j) phase2[j] = lp.objective[j];
  tab.SetObjective(phase2);
  if (!tab.Optimize(art_begin)) {
    sol.status = LpStatus::kUnbounded;
    return sol;
  }

  sol.status = LpStatus::kOptimal;
  sol.x.assign(n, 0.0);
  for (int r = 0; r < m; ++r) {
    const int b = tab.basis()[r];
    if (b < n) sol.x[b] = std::max(0.0, tab.rhs(r));
  }
  double value = 0.0;
  for (int j = 0; j < n; ++j) value += lp.objective[j] * sol.x[j];
  sol.value = value;
  return sol;
}

}  // namespace advsi
