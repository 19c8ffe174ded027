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

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "gtest/gtest.h"
#include "lmr/random.h"
#include "test_util.h"

namespace lmr {
namespace {

using testing::make;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Solves the square system m x = rhs; returns false when singular.
bool SolveSquare(std::vector<Vector> m, Vector rhs, Vector& x) {
  const std::size_t n = rhs.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    }
    if (std::abs(m[piv][c]) < 1e-10) return false;
    std::swap(m[piv], m[c]);
    std::swap(rhs[piv], rhs[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      double f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
      rhs[r] -= f * rhs[c];
    }
  }
  x.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) x[i] = rhs[i] / m[i][i];
  return true;
}

// Brute-force vertex enumeration for max c^T x s.t. eq rows tight, ineq
// rows a^T x <= b. Returns -inf when no feasible vertex exists.
double VertexOracle(const Vector& c, const std::vector<Vector>& eq, const Vector& eq_rhs,
                    const std::vector<Vector>& ineq, const Vector& ineq_rhs) {
  const std::size_t n = c.size();
  const std::size_t need = n - eq.size();
  double best = kNegInf;
  std::vector<std::size_t> pick(need);
  auto visit = [&]() {
    std::vector<Vector> m = eq;
    Vector rhs = eq_rhs;
    for (std::size_t i : pick) {
      m.push_back(ineq[i]);
      rhs.push_back(ineq_rhs[i]);
    }
    Vector x;
    if (!SolveSquare(m, rhs, x)) return;
    for (std::size_t i = 0; i < ineq.size(); ++i) {
      if (dot(ineq[i], x) > ineq_rhs[i] + 1e-9) return;
    }
    best = std::max(best, dot(c, x));
  };
  // Enumerate increasing index tuples.
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t depth, std::size_t from) {
    if (depth == need) {
      visit();
      return;
    }
    for (std::size_t i = from; i < ineq.size(); ++i) {
      pick[depth] = i;
      rec(depth + 1, i + 1);
    }
  };
  rec(0, 0);
  return best;
}

std::vector<Vector> Rows(const Matrix& m) {
  std::vector<Vector> out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out.emplace_back(m.data().begin() + i * m.cols(), m.data().begin() + (i + 1) * m.cols());
  }
  return out;
}

// Expands the problem into explicit inequalities for the oracle.
double OracleFor(const LpProblem& p) {
  const std::size_t n = p.objective.size();
  std::vector<Vector> ineq = Rows(p.inequality);
  Vector rhs = p.inequality_rhs;
  for (std::size_t j = 0; j < n; ++j) {
    if (!p.nonnegative.empty() && p.nonnegative[j]) {
      Vector row(n, 0.0);
      row[j] = -1;
      ineq.push_back(row);
      rhs.push_back(0);
    }
  }
  if (p.l1_radius) {
    const std::size_t k = p.l1_count.value_or(n);
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
      Vector row(n, 0.0);
      for (std::size_t j = 0; j < k; ++j) row[j] = (mask >> j) & 1 ? -1 : 1;
      ineq.push_back(row);
      rhs.push_back(*p.l1_radius);
    }
  }
  return VertexOracle(p.objective, Rows(p.equality), p.equality_rhs, ineq, rhs);
}

Matrix Box(std::size_t n, double bound, Vector& rhs) {
  Matrix g(2 * n, n);
  for (std::size_t j = 0; j < n; ++j) {
    g(2 * j, j) = 1;
    g(2 * j + 1, j) = -1;
    rhs.push_back(bound);
    rhs.push_back(bound);
  }
  return g;
}

Matrix Stack(const Matrix& a, const Matrix& b) {
  if (a.rows() == 0) return b;
  Vector d(a.data().begin(), a.data().end());
  d.insert(d.end(), b.data().begin(), b.data().end());
  return Matrix(a.rows() + b.rows(), a.cols(), d);
}

TEST(LpTest, SmallTextbookProblem) {
  // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18, x, y >= 0 -> 36 at (2, 6).
  LpProblem p;
  p.objective = {3, 5};
  p.inequality = make(3, 2, {1, 0, 0, 2, 3, 2});
  p.inequality_rhs = {4, 12, 18};
  p.nonnegative = {true, true};
  LpResult r = lp_solve(p);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.value, 36, 1e-12);
  EXPECT_NEAR(r.x[0], 2, 1e-12);
  EXPECT_NEAR(r.x[1], 6, 1e-12);
}

TEST(LpTest, DetectsInfeasible) {
  LpProblem p;
  p.objective = {1};
  p.inequality = make(2, 1, {1, -1});
  p.inequality_rhs = {1, -2};  // x <= 1 and x >= 2
  EXPECT_EQ(lp_solve(p).status, LpStatus::kInfeasible);
}

TEST(LpTest, DetectsUnbounded) {
  LpProblem p;
  p.objective = {1, 1};
  p.inequality = make(1, 2, {1, -1});
  p.inequality_rhs = {1};
  p.nonnegative = {true, true};
  EXPECT_EQ(lp_solve(p).status, LpStatus::kUnbounded);
}

TEST(LpTest, EqualityOnlyFreeVariables) {
  LpProblem p;
  p.objective = {0, 0};
  p.equality = make(2, 2, {1, 1, 1, -1});
  p.equality_rhs = {3, 1};
  LpResult r = lp_solve(p);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.x[0], 2, 1e-12);
  EXPECT_NEAR(r.x[1], 1, 1e-12);
}

TEST(LpTest, RedundantEqualitiesAreTolerated) {
  LpProblem p;
  p.objective = {1, 1};
  p.equality = make(2, 2, {1, 2, 2, 4});
  p.equality_rhs = {2, 4};
  p.nonnegative = {true, true};
  LpResult r = lp_solve(p);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.value, 2, 1e-12);
}

TEST(LpTest, L1BallConstraint) {
  LpProblem p;
  p.objective = {1, -3, 2};
  p.l1_radius = 2;
  LpResult r = lp_solve(p);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.value, 6, 1e-12);
  EXPECT_NEAR(r.x[1], -2, 1e-12);
}

TEST(LpTest, DegenerateVertexManyTightRows) {
  // Every row passes through the optimum (1, 1).
  LpProblem p;
  p.objective = {1, 1};
  Matrix g(8, 2);
  Vector h;
  for (int i = 0; i < 8; ++i) {
    double a = 0.1 + i * 0.2;
    g(i, 0) = a;
    g(i, 1) = 2 - a;
    h.push_back(2);
  }
  p.inequality = g;
  p.inequality_rhs = h;
  p.nonnegative = {true, true};
  LpResult r = lp_solve(p);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.value, 2, 1e-12);
}

TEST(LpTest, MatchesVertexEnumerationOnRandomProblems) {
  Rng rng(101);
  int checked = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 2 + trial % 5;  // 2..6 variables
    LpProblem p;
    p.objective = rng.gaussian_vector(n);
    const std::size_t rows = 1 + trial % 4;
    Matrix g = rng.gaussian_matrix(rows, n);
    Vector h;
    for (std::size_t i = 0; i < rows; ++i) h.push_back(rng.uniform(-0.5, 2));
    Matrix box = Box(n, 3, h);
    p.inequality = Stack(g, box);
    p.inequality_rhs = h;
    if (trial % 3 == 0) {
      p.equality = rng.gaussian_matrix(1, n);
      p.equality_rhs = {rng.uniform(-1, 1)};
    }
    if (trial % 2 == 0) {
      p.nonnegative.assign(n, false);
      for (std::size_t j = 0; j < n; j += 2) p.nonnegative[j] = true;
    }
    if (trial % 5 == 0 && n <= 5) {
      p.l1_radius = 2.5;
      if (trial % 10 == 0) p.l1_count = n - 1;
    }
    const double oracle = OracleFor(p);
    LpResult r = lp_solve(p);
    if (oracle == kNegInf) {
      EXPECT_EQ(r.status, LpStatus::kInfeasible) << "trial " << trial;
      continue;
    }
    ASSERT_EQ(r.status, LpStatus::kOptimal) << "trial " << trial;
    EXPECT_NEAR(r.value, oracle, 1e-9) << "trial " << trial;
    EXPECT_NEAR(dot(p.objective, r.x), r.value, 1e-9);
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

TEST(L1SectionTest, NoConstraintsGivesMaxAbs) {
  Vector t{0.5, -2, 1};
  LpResult r = lp_solve_l1_section(t, Matrix(0, 3));
  EXPECT_NEAR(r.value, 2, 1e-12);
}

TEST(L1SectionTest, SectionExamples) {
  LpResult r = lp_solve_l1_section(Vector{1, 0}, make(1, 2, {1, 1}));
  EXPECT_NEAR(r.value, 0.5, 1e-12);
  EXPECT_NEAR(r.x[0], 0.5, 1e-12);
  EXPECT_NEAR(r.x[1], -0.5, 1e-12);
  LpResult z = lp_solve_l1_section(Vector{1, 2}, Matrix::identity(2));
  EXPECT_NEAR(z.value, 0, 1e-12);
  EXPECT_NEAR(norm1(z.x), 0, 1e-12);
  EXPECT_NEAR(lp_solve_l1_section(Vector{0, 0, 0}, Matrix(0, 3)).value, 0, 1e-15);
}

TEST(L1SectionTest, MatchesVertexEnumeration) {
  Rng rng(102);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 3 + trial % 3;
    const std::size_t k = 1 + trial % 2;
    Vector t = rng.gaussian_vector(n);
    Matrix e = rng.gaussian_matrix(k, n);
    LpProblem p;
    p.objective = t;
    p.equality = e;
    p.equality_rhs.assign(k, 0.0);
    p.l1_radius = 1;
    const double oracle = OracleFor(p);
    LpResult r = lp_solve_l1_section(t, e);
    EXPECT_NEAR(r.value, oracle, 1e-9) << "trial " << trial;
    EXPECT_LE(norm1(r.x), 1 + 1e-9);
    Vector ex = e * r.x;
    EXPECT_LE(norm_inf(ex), 1e-9);
  }
}

}  // namespace
}  // namespace lmr
