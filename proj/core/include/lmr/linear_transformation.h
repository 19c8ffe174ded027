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

#ifndef LMR_LINEAR_TRANSFORMATION_H_
#define LMR_LINEAR_TRANSFORMATION_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lmr/matrix.h"

namespace lmr {

/// Norm on the measurement space R^p. The dual pairs are l1/linf and l2/l2.
enum class MeasurementNorm { kL1, kL2, kLinf };

MeasurementNorm dual_of(MeasurementNorm norm);
double measurement_norm(std::span<const double> y, MeasurementNorm norm);
double dual_norm(std::span<const double> y, MeasurementNorm norm);
std::string_view to_string(MeasurementNorm norm);
std::optional<MeasurementNorm> parse_measurement_norm(std::string_view s);

/// The operator X -> (<A_1, X>, ..., <A_p, X>) on m x n matrices.
class LinearTransformation {
 public:
  LinearTransformation(std::size_t m, std::size_t n, std::vector<Matrix> frames,
                       MeasurementNorm norm = MeasurementNorm::kL2);

  /// p = m n, frames E_k in row-major order.
  static LinearTransformation vectorization(std::size_t m, std::size_t n);
  /// Frames with i.i.d. N(0, 1/p) entries.
  static LinearTransformation gaussian(std::size_t m, std::size_t n,
                                       std::size_t p, std::uint64_t seed);
  /// The operator whose rows are the given p x (m n) representation.
  static LinearTransformation from_representation(std::size_t m, std::size_t n,
                                                  const Matrix& rep,
                                                  MeasurementNorm norm);

  std::size_t m() const { return m_; }
  std::size_t n() const { return n_; }
  std::size_t p() const { return frames_.size(); }
  std::size_t r() const { return m_ < n_ ? m_ : n_; }
  const std::vector<Matrix>& frames() const { return frames_; }
  MeasurementNorm norm() const { return norm_; }
  LinearTransformation with_norm(MeasurementNorm norm) const;
  LinearTransformation scaled(double factor) const;

  Vector apply(const Matrix& x) const;
  Matrix adjoint(std::span<const double> y) const;

  /// p x (m n); row i is the row-major flattening of A_i.
  Matrix matrix_representation() const;

 private:
  std::size_t m_;
  std::size_t n_;
  std::vector<Matrix> frames_;
  MeasurementNorm norm_;
};

/// The p x r matrix with entries (U^T A_i V)_jj, so that
/// A(U Diag(x) V^T) = a x for every x in R^r.
struct RestrictedRepresentation {
  Matrix a;
  Matrix u;
  Matrix v;
};

/// Throws std::invalid_argument unless u (m x r) and v (n x r) have
/// orthonormal columns to 1e-8.
RestrictedRepresentation restrict_to_pair(const LinearTransformation& t,
                                          const Matrix& u, const Matrix& v);

struct NullSpaceBasis {
  std::size_t dim = 0;
  std::vector<Matrix> basis;  // Frobenius-orthonormal, each m x n
  std::size_t representation_rank = 0;

  /// sum_k c_k B_k.
  Matrix combine(std::span<const double> c, std::size_t m, std::size_t n) const;
};

NullSpaceBasis null_space_basis(const LinearTransformation& t);

}  // namespace lmr

#endif  // LMR_LINEAR_TRANSFORMATION_H_
