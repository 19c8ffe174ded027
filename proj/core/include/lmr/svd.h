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

#ifndef LMR_SVD_H_
#define LMR_SVD_H_

#include <cstddef>
#include <stdexcept>
#include <string>

#include "lmr/matrix.h"

namespace lmr {

inline constexpr double kOrthTolerance = 1e-9;
inline constexpr double kReconTolerance = 1e-9;
inline constexpr int kMaxJacobiSweeps = 60;
/// Singular values at or below this fraction of sigma_1 count as zero.
inline constexpr double kRankThreshold = 1e-10;

/// Thin SVD X = U Diag(sigma) V^T with r = min(m, n).
struct SvdFactors {
  Matrix u;      // m x r, orthonormal columns
  Vector sigma;  // r entries, nonincreasing, nonnegative
  Matrix v;      // n x r, orthonormal columns

  std::size_t rank() const;  // count of sigma_i > kRankThreshold * sigma_1
  Matrix reconstruct() const;
};

class SvdConvergenceError : public std::runtime_error {
 public:
  SvdConvergenceError(int sweeps, double residual);
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// One-sided Jacobi SVD. Deterministic; the first entry of each column of U
/// exceeding 1e-12 in magnitude is made nonnegative.
SvdFactors svd(const Matrix& x);

Vector singular_values(const Matrix& x);

struct MatrixNorms {
  double nuclear;
  double spectral;
  double frobenius;
};

MatrixNorms norms(const Matrix& x);
double nuclear_norm(const Matrix& x);
double spectral_norm(const Matrix& x);
double frobenius_norm(const Matrix& x);

/// Sum of the s largest singular values, 1 <= s <= min(m, n).
double ky_fan_norm(const Matrix& x, std::size_t s);

/// U Diag(sigma_1..sigma_s, 0, ..., 0) V^T, 0 <= s <= min(m, n).
Matrix best_s_rank_approx(const Matrix& x, std::size_t s);

/// Extends the orthonormal columns of q (m x k) with m - k further
/// orthonormal columns taken deterministically from the standard basis.
Matrix orthonormal_complement(const Matrix& q);

}  // namespace lmr

#endif  // LMR_SVD_H_
