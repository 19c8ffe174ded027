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

#include "lmr/lp.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace lmr {
namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-11;
constexpr double kFeasTol = 1e-9;
constexpr std::size_t kMaxPivots = 200000;

// Standard form: maximize c^T z, A z = b, z >= 0, b >= 0.
struct StandardForm {
  std::vector<Vector> rows;  // constraint rows over all standard columns
  Vector rhs;
  Vector cost;
  std::vector<long> initial_basic;  // slack usable as initial basis or -1
  // Mapping back: original variable j = z[plus[j]] - z[minus[j]] (minus may
  // be -1 for nonnegative variables).
  std::vector<long> plus;
  std::vector<long> minus;
};

StandardForm to_standard_form(const LpProblem& lp) {
  const std::size_t nvar = lp.objective.size();
  auto check_block = [&](const Matrix& m, const Vector& rhs, const char* what) {
    if (m.empty() && rhs.empty()) return;
    if (m.cols() != nvar || m.rows() != rhs.size()) {
      throw std::invalid_argument(std::string("lp_solve: inconsistent ") + what +
                                  " block dimensions");
    }
  };
  check_block(lp.equality, lp.equality_rhs, "equality");
  check_block(lp.inequality, lp.inequality_rhs, "inequality");
  if (!lp.nonnegative.empty() && lp.nonnegative.size() != nvar) {
    throw std::invalid_argument("lp_solve: nonnegative flags have wrong length");
  }
  const std::size_t l1_count = lp.l1_count.value_or(nvar);
  if (l1_count > nvar) {
    throw std::invalid_argument("lp_solve: l1_count exceeds variable count");
  }

  StandardForm sf;
  std::size_t ncol = 0;
  sf.plus.resize(nvar);
  sf.minus.resize(nvar);
  for (std::size_t j = 0; j < nvar; ++j) {
    sf.plus[j] = static_cast<long>(ncol++);
    const bool nonneg = !lp.nonnegative.empty() && lp.nonnegative[j];
    sf.minus[j] = nonneg ? -1 : static_cast<long>(ncol++);
  }
  const std::size_t n_ineq = lp.inequality_rhs.size() + (lp.l1_radius ? 1 : 0);
  const std::size_t first_slack = ncol;
  ncol += n_ineq;

  sf.cost.assign(ncol, 0.0);
  for (std::size_t j = 0; j < nvar; ++j) {
    sf.cost[sf.plus[j]] = lp.objective[j];
    if (sf.minus[j] >= 0) sf.cost[sf.minus[j]] = -lp.objective[j];
  }

  auto add_row = [&](std::span<const double> coef, double rhs, long slack) {
    Vector row(ncol, 0.0);
    for (std::size_t j = 0; j < nvar; ++j) {
      row[sf.plus[j]] = coef[j];
      if (sf.minus[j] >= 0) row[sf.minus[j]] = -coef[j];
    }
    if (slack >= 0) row[slack] = 1.0;
    if (rhs < 0.0) {
      for (double& v : row) v = -v;
      rhs = -rhs;
      slack = -1;  // slack now has coefficient -1, not usable as a basis
    }
    sf.rows.push_back(std::move(row));
    sf.rhs.push_back(rhs);
    sf.initial_basic.push_back(slack);
  };

  for (std::size_t i = 0; i < lp.equality_rhs.size(); ++i) {
    add_row(lp.equality.row(i), lp.equality_rhs[i], -1);
  }
  std::size_t slack = first_slack;
  for (std::size_t i = 0; i < lp.inequality_rhs.size(); ++i) {
    add_row(lp.inequality.row(i), lp.inequality_rhs[i], static_cast<long>(slack++));
  }
  if (lp.l1_radius) {
    Vector row(ncol, 0.0);
    for (std::size_t j = 0; j < l1_count; ++j) {
      row[sf.plus[j]] = 1.0;
      if (sf.minus[j] >= 0) row[sf.minus[j]] = 1.0;
    }
    row[slack] = 1.0;
    if (*lp.l1_radius < 0.0) {
      throw std::invalid_argument("lp_solve: negative l1 radius");
    }
    sf.rows.push_back(std::move(row));
    sf.rhs.push_back(*lp.l1_radius);
    sf.initial_basic.push_back(static_cast<long>(slack));
  }
  return sf;
}

class Tableau {
 public:
  explicit Tableau(const StandardForm& sf) : ncol_(sf.cost.size()) {
    const std::size_t m = sf.rows.size();
    std::size_t n_art = 0;
    for (long b : sf.initial_basic) n_art += (b < 0) ? 1 : 0;
    width_ = ncol_ + n_art;
    t_.assign(m, Vector(width_ + 1, 0.0));
    basis_.resize(m);
    std::size_t art = ncol_;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < ncol_; ++j) t_[i][j] = sf.rows[i][j];
      t_[i][width_] = sf.rhs[i];
      if (sf.initial_basic[i] >= 0) {
        basis_[i] = static_cast<std::size_t>(sf.initial_basic[i]);
      } else {
        t_[i][art] = 1.0;
        basis_[i] = art++;
      }
    }
    original_ = t_;
    allowed_.assign(width_, true);
  }

  // Maximizes cost^T z over the current feasible basis. Dantzig pricing
  // with a largest-pivot tie break; Bland's rule takes over during long
  // runs of degenerate pivots. The tableau is periodically rebuilt from
  // the original rows, and a terminal status is only returned once it
  // survives a fresh rebuild.
  LpStatus optimize(Vector cost, std::size_t& pivots) {
    cost.resize(width_, 0.0);
    Vector red = reduced_costs(cost);
    std::size_t since_refactor = 0;
    std::size_t degenerate_run = 0;
    bool fresh = false;
    while (true) {
      const bool bland = degenerate_run >= kDegenerateRun;
      std::size_t enter = width_;
      double most = -kCostTol;
      for (std::size_t j = 0; j < width_; ++j) {
        if (!allowed_[j] || red[j] >= -kCostTol) continue;
        if (bland) {
          enter = j;
          break;
        }
        if (red[j] < most) {
          most = red[j];
          enter = j;
        }
      }
      const std::size_t leave = enter == width_ ? t_.size() : ratio_test(enter, bland);
      if (enter == width_ || leave == t_.size()) {
        if (!fresh && refactor()) {
          red = reduced_costs(cost);
          fresh = true;
          since_refactor = 0;
          continue;
        }
        return enter == width_ ? LpStatus::kOptimal : LpStatus::kUnbounded;
      }
      fresh = false;
      pivot(leave, enter);
      const double f = red[enter];
      for (std::size_t j = 0; j <= width_; ++j) red[j] -= f * t_[leave][j];
      degenerate_run = t_[leave][width_] <= kFeasTol ? degenerate_run + 1 : 0;
      if (++pivots > kMaxPivots) return LpStatus::kIterationLimit;
      if (++since_refactor >= kRefactorEvery) {
        if (refactor()) red = reduced_costs(cost);
        since_refactor = 0;
      }
    }
  }

  double phase_one(std::size_t& pivots, LpStatus& status) {
    Vector cost(width_, 0.0);
    for (std::size_t j = ncol_; j < width_; ++j) cost[j] = -1.0;
    status = optimize(cost, pivots);
    double infeas = 0.0;
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (basis_[i] >= ncol_) infeas += t_[i][width_];
    }
    return infeas;
  }

  // Pivots artificial variables out of the basis, dropping redundant rows.
  void expel_artificials() {
    for (std::size_t i = 0; i < t_.size();) {
      if (basis_[i] < ncol_) {
        ++i;
        continue;
      }
      std::size_t col = ncol_;
      double largest = kPivotTol;
      for (std::size_t j = 0; j < ncol_; ++j) {
        if (std::abs(t_[i][j]) > largest) {
          largest = std::abs(t_[i][j]);
          col = j;
        }
      }
      if (col == ncol_) {
        // The original row owning this artificial is part of the linear
        // dependency and can be removed with it.
        const std::size_t art = basis_[i];
        for (std::size_t k = 0; k < original_.size(); ++k) {
          if (original_[k][art] == 1.0) {
            original_.erase(original_.begin() + static_cast<long>(k));
            break;
          }
        }
        t_.erase(t_.begin() + static_cast<long>(i));
        basis_.erase(basis_.begin() + static_cast<long>(i));
      } else {
        pivot(i, col);
        ++i;
      }
    }
    for (std::size_t j = ncol_; j < width_; ++j) allowed_[j] = false;
  }

  Vector solution() const {
    Vector z(ncol_, 0.0);
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (basis_[i] < ncol_) z[basis_[i]] = std::max(0.0, t_[i][width_]);
    }
    return z;
  }

 private:
  static constexpr std::size_t kDegenerateRun = 50;
  static constexpr std::size_t kRefactorEvery = 100;

  // Leaving row for `enter`, or t_.size() when the column is unbounded.
  std::size_t ratio_test(std::size_t enter, bool bland) const {
    const std::size_t none = t_.size();
    double scale = 1.0;
    for (const Vector& row : t_) scale = std::max(scale, std::abs(row[enter]));
    const double tol = kPivotTol * scale;
    // Harris pass: the largest step that keeps every basic variable above
    // -kFeasTol, then the largest pivot among rows reaching their bound
    // within it.
    double bound = std::numeric_limits<double>::infinity();
    for (const Vector& row : t_) {
      const double a = row[enter];
      if (a <= tol) continue;
      bound = std::min(bound, (std::max(0.0, row[width_]) + kFeasTol) / a);
    }
    if (std::isinf(bound)) return none;
    std::size_t leave = none;
    double best_a = 0.0;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < t_.size(); ++i) {
      const double a = t_[i][enter];
      if (a <= tol) continue;
      const double ratio = std::max(0.0, t_[i][width_]) / a;
      if (ratio > bound) continue;
      if (bland) {
        const bool better = ratio < best_ratio - 1e-13;
        const bool tie = !better && ratio <= best_ratio + 1e-13 &&
                         (leave == none || basis_[i] < basis_[leave]);
        if (better || tie) {
          best_ratio = std::min(best_ratio, ratio);
          leave = i;
        }
      } else if (a > best_a) {
        best_a = a;
        leave = i;
      }
    }
    return leave;
  }

  // Rebuilds t_ = B^{-1} [A | b] from the original rows for the current
  // basis by Gauss-Jordan elimination with partial pivoting. Returns false
  // (leaving t_ untouched) if the basis matrix is numerically singular.
  bool refactor() {
    const std::size_t m = t_.size();
    if (m == 0) return true;
    std::vector<Vector> work(m, Vector(m + width_ + 1, 0.0));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t k = 0; k < m; ++k) work[i][k] = original_[i][basis_[k]];
      for (std::size_t j = 0; j <= width_; ++j) work[i][m + j] = original_[i][j];
    }
    for (std::size_t k = 0; k < m; ++k) {
      std::size_t piv = k;
      for (std::size_t i = k + 1; i < m; ++i) {
        if (std::abs(work[i][k]) > std::abs(work[piv][k])) piv = i;
      }
      if (std::abs(work[piv][k]) < 1e-13) return false;
      std::swap(work[piv], work[k]);
      const double inv = 1.0 / work[k][k];
      for (double& v : work[k]) v *= inv;
      for (std::size_t i = 0; i < m; ++i) {
        if (i == k) continue;
        const double f = work[i][k];
        if (f == 0.0) continue;
        for (std::size_t j = k; j < work[i].size(); ++j) work[i][j] -= f * work[k][j];
      }
    }
    for (std::size_t k = 0; k < m; ++k) {
      std::copy(work[k].begin() + static_cast<long>(m), work[k].end(), t_[k].begin());
      for (std::size_t i = 0; i < m; ++i) t_[k][basis_[i]] = i == k ? 1.0 : 0.0;
    }
    return true;
  }

  Vector reduced_costs(const Vector& cost) const {
    // red_j = c_B^T B^{-1} A_j - c_j ; last entry holds the objective value.
    Vector red(width_ + 1, 0.0);
    for (std::size_t j = 0; j < width_; ++j) red[j] = -cost[j];
    for (std::size_t i = 0; i < t_.size(); ++i) {
      const double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= width_; ++j) red[j] += cb * t_[i][j];
    }
    return red;
  }

  void pivot(std::size_t row, std::size_t col) {
    Vector& pr = t_[row];
    const double inv = 1.0 / pr[col];
    for (double& v : pr) v *= inv;
    pr[col] = 1.0;
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (i == row) continue;
      const double f = t_[i][col];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= width_; ++j) t_[i][j] -= f * pr[j];
      t_[i][col] = 0.0;
    }
    basis_[row] = col;
  }

  std::size_t ncol_;
  std::size_t width_;
  std::vector<Vector> t_;
  std::vector<Vector> original_;
  std::vector<std::size_t> basis_;
  std::vector<bool> allowed_;
};

}  // namespace

std::string_view to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
    case LpStatus::kIterationLimit:
      return "iteration_limit";
  }
  return "unknown";
}

LpResult lp_solve(const LpProblem& problem) {
  const StandardForm sf = to_standard_form(problem);
  Tableau tab(sf);
  LpResult result;
  LpStatus status = LpStatus::kOptimal;
  const double infeas = tab.phase_one(result.pivots, status);
  if (status == LpStatus::kIterationLimit) {
    result.status = status;
    return result;
  }
  if (infeas > kFeasTol) {
    result.status = LpStatus::kInfeasible;
    return result;
  }
  tab.expel_artificials();
  result.status = tab.optimize(sf.cost, result.pivots);

  const Vector z = tab.solution();
  result.x.assign(problem.objective.size(), 0.0);
  for (std::size_t j = 0; j < result.x.size(); ++j) {
    result.x[j] = z[sf.plus[j]] - (sf.minus[j] >= 0 ? z[sf.minus[j]] : 0.0);
  }
  result.value = dot(problem.objective, result.x);
  return result;
}

LpResult lp_solve_l1_section(std::span<const double> t, const Matrix& e) {
  LpProblem lp;
  lp.objective.assign(t.begin(), t.end());
  if (e.rows() > 0) {
    if (e.cols() != t.size()) {
      throw std::invalid_argument("lp_solve_l1_section: E has wrong column count");
    }
    lp.equality = e;
    lp.equality_rhs.assign(e.rows(), 0.0);
  }
  lp.l1_radius = 1.0;
  LpResult res = lp_solve(lp);
  if (res.status != LpStatus::kOptimal) {
    throw std::logic_error("lp_solve_l1_section: simplex returned " +
                           std::string(to_string(res.status)));
  }
  return res;
}

}  // namespace lmr
