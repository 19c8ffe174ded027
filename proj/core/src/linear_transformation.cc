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

#include "lmr/linear_transformation.h"

#include <cmath>
#include <stdexcept>

#include "lmr/random.h"
#include "lmr/svd.h"

namespace lmr {

MeasurementNorm dual_of(MeasurementNorm norm) {
  switch (norm) {
    case MeasurementNorm::kL1:
      return MeasurementNorm::kLinf;
    case MeasurementNorm::kL2:
      return MeasurementNorm::kL2;
    case MeasurementNorm::kLinf:
      return MeasurementNorm::kL1;
  }
  return MeasurementNorm::kL2;
}

double measurement_norm(std::span<const double> y, MeasurementNorm norm) {
  switch (norm) {
    case MeasurementNorm::kL1:
      return norm1(y);
    case MeasurementNorm::kL2:
      return norm2(y);
    case MeasurementNorm::kLinf:
      return norm_inf(y);
  }
  return norm2(y);
}

double dual_norm(std::span<const double> y, MeasurementNorm norm) {
  return measurement_norm(y, dual_of(norm));
}

std::string_view to_string(MeasurementNorm norm) {
  switch (norm) {
    case MeasurementNorm::kL1:
      return "l1";
    case MeasurementNorm::kL2:
      return "l2";
    case MeasurementNorm::kLinf:
      return "linf";
  }
  return "l2";
}

std::optional<MeasurementNorm> parse_measurement_norm(std::string_view s) {
  if (s == "l1") return MeasurementNorm::kL1;
  if (s == "l2") return MeasurementNorm::kL2;
  if (s == "linf") return MeasurementNorm::kLinf;
  return std::nullopt;
}

LinearTransformation::LinearTransformation(std::size_t m, std::size_t n,
                                           std::vector<Matrix> frames,
                                           MeasurementNorm norm)
    : m_(m), n_(n), frames_(std::move(frames)), norm_(norm) {
  if (m == 0 || n == 0) {
    throw std::invalid_argument("LinearTransformation: m and n must be positive");
  }
  for (const Matrix& f : frames_) {
    if (f.rows() != m || f.cols() != n) {
      throw std::invalid_argument("LinearTransformation: frame is " +
                                  std::to_string(f.rows()) + "x" +
                                  std::to_string(f.cols()) + ", expected " +
                                  std::to_string(m) + "x" + std::to_string(n));
    }
    if (!f.all_finite()) {
      throw std::invalid_argument("LinearTransformation: non-finite frame entry");
    }
  }
}

LinearTransformation LinearTransformation::vectorization(std::size_t m,
                                                         std::size_t n) {
  std::vector<Matrix> frames;
  frames.reserve(m * n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Matrix e(m, n);
      e(i, j) = 1.0;
      frames.push_back(std::move(e));
    }
  }
  return LinearTransformation(m, n, std::move(frames));
}

LinearTransformation LinearTransformation::gaussian(std::size_t m, std::size_t n,
                                                    std::size_t p,
                                                    std::uint64_t seed) {
  Rng rng(seed);
  const double stddev = p > 0 ? 1.0 / std::sqrt(static_cast<double>(p)) : 1.0;
  std::vector<Matrix> frames;
  frames.reserve(p);
  for (std::size_t i = 0; i < p; ++i) {
    frames.push_back(rng.gaussian_matrix(m, n, stddev));
  }
  return LinearTransformation(m, n, std::move(frames));
}

LinearTransformation LinearTransformation::from_representation(
    std::size_t m, std::size_t n, const Matrix& rep, MeasurementNorm norm) {
  if (rep.cols() != m * n) {
    throw std::invalid_argument("from_representation: expected m*n columns");
  }
  std::vector<Matrix> frames;
  frames.reserve(rep.rows());
  for (std::size_t i = 0; i < rep.rows(); ++i) {
    auto row = rep.row(i);
    frames.emplace_back(m, n, Vector(row.begin(), row.end()));
  }
  return LinearTransformation(m, n, std::move(frames), norm);
}

LinearTransformation LinearTransformation::with_norm(MeasurementNorm norm) const {
  LinearTransformation t = *this;
  t.norm_ = norm;
  return t;
}

LinearTransformation LinearTransformation::scaled(double factor) const {
  LinearTransformation t = *this;
  for (Matrix& f : t.frames_) f *= factor;
  return t;
}

Vector LinearTransformation::apply(const Matrix& x) const {
  if (x.rows() != m_ || x.cols() != n_) {
    throw std::invalid_argument("apply: expected a " + std::to_string(m_) + "x" +
                                std::to_string(n_) + " matrix");
  }
  Vector y(frames_.size());
  for (std::size_t i = 0; i < frames_.size(); ++i) y[i] = inner(frames_[i], x);
  return y;
}

Matrix LinearTransformation::adjoint(std::span<const double> y) const {
  if (y.size() != frames_.size()) {
    throw std::invalid_argument("adjoint: expected a vector of length " +
                                std::to_string(frames_.size()));
  }
  Matrix out(m_, n_);
  auto acc = out.data();
  for (std::size_t i = 0; i < frames_.size(); ++i) {
    if (y[i] == 0.0) continue;
    auto f = frames_[i].data();
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += y[i] * f[k];
  }
  return out;
}

Matrix LinearTransformation::matrix_representation() const {
  Matrix rep(frames_.size(), m_ * n_);
  for (std::size_t i = 0; i < frames_.size(); ++i) {
    auto f = frames_[i].data();
    for (std::size_t k = 0; k < f.size(); ++k) rep(i, k) = f[k];
  }
  return rep;
}

RestrictedRepresentation restrict_to_pair(const LinearTransformation& t,
                                          const Matrix& u, const Matrix& v) {
  const std::size_t r = u.cols();
  if (u.rows() != t.m() || v.rows() != t.n() || v.cols() != r) {
    throw std::invalid_argument("restrict: factor pair has wrong dimensions");
  }
  if (orthonormality_defect(u) > 1e-8 || orthonormality_defect(v) > 1e-8) {
    throw std::invalid_argument("restrict: factor pair is not orthonormal");
  }
  Matrix a(t.p(), r);
  for (std::size_t i = 0; i < t.p(); ++i) {
    // (U^T A_i V)_jj = u_j^T A_i v_j
    const Matrix av = t.frames()[i] * v;
    for (std::size_t j = 0; j < r; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < t.m(); ++k) s += u(k, j) * av(k, j);
      a(i, j) = s;
    }
  }
  return RestrictedRepresentation{std::move(a), u, v};
}

Matrix NullSpaceBasis::combine(std::span<const double> c, std::size_t m,
                               std::size_t n) const {
  Matrix x(m, n);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    if (c[k] != 0.0) x += c[k] * basis[k];
  }
  return x;
}

NullSpaceBasis null_space_basis(const LinearTransformation& t) {
  const std::size_t mn = t.m() * t.n();
  NullSpaceBasis out;
  Matrix complement;
  if (t.p() == 0) {
    complement = Matrix::identity(mn);
  } else {
    const SvdFactors f = svd(t.matrix_representation());
    const std::size_t rank = f.rank();
    out.representation_rank = rank;
    complement = orthonormal_complement(f.v.columns(0, rank));
  }
  out.dim = complement.cols();
  out.basis.reserve(out.dim);
  for (std::size_t k = 0; k < out.dim; ++k) {
    out.basis.emplace_back(t.m(), t.n(), complement.column(k));
  }
  return out;
}

}  // namespace lmr
