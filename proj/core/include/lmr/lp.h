// Copyright 2026 The lmr Authors
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

#ifndef LMR_LP_H_
#define LMR_LP_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "lmr/matrix.h"

namespace lmr {

/// maximize c^T x
/// subject to  E x = d,  G x <= h,  ||x_{0..k-1}||_1 <= l1_radius (if set),
///             x_j >= 0 for j flagged nonnegative, x_j free otherwise.
/// The l1 row covers the first k = l1_count variables, or all of them when
/// l1_count is unset.
///
/// Empty E or G matrices mean "no such rows"; their column count must match
/// the objective when nonempty.
struct LpProblem {
  Vector objective;
  Matrix equality;
  Vector equality_rhs;
  Matrix inequality;
  Vector inequality_rhs;
  std::optional<double> l1_radius;
  std::optional<std::size_t> l1_count;
  std::vector<bool> nonnegative;  // empty: all variables free
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };
std::string_view to_string(LpStatus status);

struct LpResult {
  Vector x;
  double value = 0.0;
  LpStatus status = LpStatus::kOptimal;
  std::size_t pivots = 0;
};

/// Two-phase dense tableau simplex (Dantzig pricing, Harris ratio test,
/// Bland fallback on long degenerate runs, periodic refactorization).
LpResult lp_solve(const LpProblem& problem);

/// max t^T x subject to ||x||_1 <= 1, E x = 0. Feasible (x = 0) and bounded
/// by construction; a non-optimal status throws std::logic_error.
LpResult lp_solve_l1_section(std::span<const double> t, const Matrix& e);

}  // namespace lmr

#endif  // LMR_LP_H_
