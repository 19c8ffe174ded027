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

#ifndef LMR_NNM_H_
#define LMR_NNM_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "lmr/linear_transformation.h"
#include "lmr/matrix.h"

namespace lmr {

/// min ||X||_* subject to ||A X - b|| <= epsilon, where ||.|| is the
/// operator's measurement norm. epsilon = 0 is the equality-constrained
/// program.
struct NnmProblem {
  LinearTransformation op;
  Vector b;
  double epsilon = 0.0;
};

struct SolverConfig {
  double rho = 1.0;  // ADMM penalty
  double feas_tol = 1e-8;
  double gap_tol = 1e-6;
  std::size_t max_iterations = 5000;
  /// Iterations between dual-gap evaluations.
  std::size_t check_every = 10;
  std::uint64_t seed = 0;
};

enum class SolveStatus { kConverged, kNotConverged, kInfeasible };
std::string_view to_string(SolveStatus status);

struct NnmSolution {
  Matrix x;
  double objective = 0.0;  // ||x||_*
  double residual = 0.0;   // ||A x - b|| in the measurement norm
  /// Feasibility accuracy: ||A x - b|| <= theta.
  double theta = 0.0;
  /// Certified bound on ||x||_* - Opt(b), from a dual-feasible point.
  std::optional<double> upsilon_bound;
  std::size_t iterations = 0;
  SolveStatus status = SolveStatus::kNotConverged;
};

/// Singular value soft-thresholding: U Diag(max(sigma - tau, 0)) V^T.
Matrix singular_value_threshold(const Matrix& x, double tau);

/// Solves the equality-constrained program (problem.epsilon is ignored).
/// b outside the range of A yields status kInfeasible together with the
/// least-squares point.
NnmSolution solve_equality(const NnmProblem& problem,
                           const SolverConfig& config = {});

/// Solves the norm-bounded program. epsilon = 0 dispatches to
/// solve_equality. Throws std::invalid_argument for epsilon < 0.
NnmSolution solve_noisy(const NnmProblem& problem,
                        const SolverConfig& config = {});

struct SubgradientCertificate {
  Vector y;
  bool valid = false;
  /// Spectral norm of the component of A^* y orthogonal to the tangent
  /// space at W.
  double gamma_observed = 0.0;
  double residual = 0.0;  // ||P_T(A^* y) - U_s V_s^T||_F
  std::string diagnostic;
};

/// Looks for y with A^* y = U_s V_s^T + M, where U_s, V_s are the singular
/// factors of W and M has row and column spaces orthogonal to them. The
/// tangent-space equations are solved in the minimum-norm least-squares
/// sense; valid means they hold to 1e-8 and ||M|| <= 1, which certifies W
/// as a minimizer of ||X||_* subject to A X = A W. Throws
/// std::invalid_argument for W = 0 or mismatched dimensions.
SubgradientCertificate subgradient_certificate(const LinearTransformation& op,
                                               const Matrix& w);

}  // namespace lmr

#endif  // LMR_NNM_H_
