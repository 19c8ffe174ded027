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

#ifndef LMR_RECOVERY_H_
#define LMR_RECOVERY_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "lmr/goodness.h"
#include "lmr/linear_transformation.h"
#include "lmr/matrix.h"
#include "lmr/nnm.h"

namespace lmr {

inline constexpr double kBlockTolerance = 1e-8;
inline constexpr double kBoundSlack = 1e-7;

struct BlockCheck {
  bool holds = false;
  Matrix x1;   // s x s
  Matrix x2;   // (r - s) x (r - s)
  Matrix x_s;  // U [[X1, 0], [0, 0]] V^T
  FactorPair pair;
  /// ||X - U Diag(X1, X2) V^T||_F / ||X||_F for the best pair tried.
  double relative_residual = 0.0;
};

/// Block Assumption test of X against W with split s: searches pairs
/// (U, V) in the SVD set of W for which U^T X V is block diagonal with an
/// s x s leading block and X lies in the frame, to 1e-8 ||X||_F. The first
/// pair completes the factors of W by the singular vectors of X projected
/// onto the orthogonal complements; `extra_pairs` further pairs use random
/// completions. s defaults to rank(W). Throws std::invalid_argument for
/// W = 0, mismatched shapes or s > r.
BlockCheck block_assumption_check(const Matrix& x, const Matrix& w,
                                  std::optional<std::size_t> s = std::nullopt,
                                  std::size_t extra_pairs = 4, std::uint64_t seed = 0);

/// (upsilon + 2 tail) / (1 - 2 gamma_hat). Throws std::invalid_argument
/// unless 0 <= gamma_hat < 1/2 and upsilon, tail >= 0.
double error_bound_noiseless(double gamma_hat, double upsilon, double tail);

/// (2 beta (theta + eps) + 2 tail + upsilon) / (1 - 2 gamma_hat). Throws
/// std::invalid_argument unless 0 <= gamma_hat < 1/2, beta is finite and
/// all slacks are nonnegative.
double error_bound_noisy(double gamma_hat, double beta, double theta, double eps,
                         double tail, double upsilon);

/// A sound upper bound on gamma_hat_s(A, beta) used for error bounds.
struct SoundGoodness {
  double gamma_hat = 0.5;
  double beta = kInfinity;
};

struct RecoveryConfig {
  std::size_t s = 1;  // split used by the Block Assumption and the tail
  double success_tol = 1e-4;
  SolverConfig solver;
  std::optional<SoundGoodness> goodness;  // enables bound evaluation
  /// Used in place of the solver's gap bound when it is unknown.
  std::optional<double> conservative_upsilon;
  std::size_t block_pairs = 4;
};

struct OperatorDescriptor {
  std::string kind = "explicit";  // "gaussian", "vectorization", "explicit"
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t p = 0;
  std::optional<std::uint64_t> seed;
  std::string norm = "l2";
};

struct TrialRecord {
  std::uint64_t seed = 0;
  OperatorDescriptor op;
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t s = 0;
  Vector w_singular_values;
  double epsilon = 0.0;
  double theta = 0.0;                   // ||A X - b||
  std::optional<double> upsilon;        // unset when unknown
  double recovery_error_nuclear = 0.0;  // ||X - W||_*
  double recovery_error_rel_frobenius = 0.0;
  bool success = false;
  SolveStatus status = SolveStatus::kNotConverged;
  std::size_t iterations = 0;
  bool certificate_valid = false;
  bool block_assumption = false;
  std::optional<double> bound_value;  // unset means "n/a"
  bool bound_respected = true;
};

/// Solves min ||X||_* s.t. A X = A W and scores the result. A trial whose
/// solver did not converge is never a success. The error bound is
/// evaluated when cfg.goodness is set, the Block Assumption holds and a
/// gap bound is known: with finite beta the noisy form with eps = 0 and
/// theta = ||A X - b|| is used, with beta = inf the noiseless form.
TrialRecord exact_recovery_trial(const LinearTransformation& op, const Matrix& w,
                                 const RecoveryConfig& cfg = {});

/// Solves min ||X||_* s.t. ||A X - b|| <= eps with b = A W + noise, where
/// ||noise|| <= eps is required. Success is scored as in the exact trial.
/// The bound needs a finite cfg.goodness->beta. Throws
/// std::invalid_argument when the noise exceeds eps.
TrialRecord noisy_recovery_trial(const LinearTransformation& op, const Matrix& w,
                                 std::span<const double> noise, double eps,
                                 const RecoveryConfig& cfg = {});

struct PhaseGridConfig {
  std::size_t m = 8;
  std::size_t n = 8;
  std::vector<std::size_t> s_values{1};
  std::vector<std::size_t> p_values{32};
  std::size_t trials = 50;
  double success_tol = 1e-4;
  SolverConfig solver;
  std::uint64_t seed = 0;
  MeasurementNorm norm = MeasurementNorm::kL2;
};

struct PhaseCell {
  std::size_t s = 0;
  std::size_t p = 0;
  std::size_t trials = 0;
  std::size_t successes = 0;
  double mean_rel_error = 0.0;
  double mean_iterations = 0.0;
};

struct PhaseGrid {
  std::vector<std::size_t> s_values;
  std::vector<std::size_t> p_values;
  double success_tol = 1e-4;
  std::vector<PhaseCell> cells;     // s-major order
  std::vector<TrialRecord> trials;  // cell-major, then trial index
};

/// Runs cfg.trials exact-recovery trials per (s, p) cell on fresh Gaussian
/// operators and rank-s targets. Trial t of cell c uses
/// derive_seed(cfg.seed, {c, t}). Throws std::invalid_argument for empty
/// axes, zero trials or s outside [1, r].
PhaseGrid phase_grid(const PhaseGridConfig& cfg);

/// Header s,p,trials,successes,mean_rel_error,mean_iterations.
void write_phase_csv(std::ostream& out, const PhaseGrid& grid);

}  // namespace lmr

#endif  // LMR_RECOVERY_H_
