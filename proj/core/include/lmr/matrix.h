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

#ifndef LMR_MATRIX_H_
#define LMR_MATRIX_H_

#include <cstddef>
#include <span>
#include <vector>

namespace lmr {

using Vector = std::vector<double>;

/// Dense real matrix stored in row-major order.
///
/// All entries are required to be finite; the constructors that take
/// external data validate this and throw std::invalid_argument otherwise.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::size_t rows, std::size_t cols, Vector data);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> d);
  /// rows x cols matrix with `d` on the leading diagonal.
  static Matrix diagonal(std::size_t rows, std::size_t cols,
                         std::span<const double> d);
  static Matrix from_rows(const std::vector<Vector>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(data_).subspan(i * cols_, cols_);
  }

  Vector column(std::size_t j) const;
  void set_column(std::size_t j, std::span<const double> v);

  Matrix transpose() const;
  /// Columns [first, first + count).
  Matrix columns(std::size_t first, std::size_t count) const;
  Matrix block(std::size_t row0, std::size_t col0, std::size_t nrows,
               std::size_t ncols) const;

  bool all_finite() const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double s);

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Vector data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, std::span<const double> x);

/// Frobenius inner product <A, B> = trace(A^T B).
double inner(const Matrix& a, const Matrix& b);
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> x);
double norm1(std::span<const double> x);
double norm_inf(std::span<const double> x);

/// ||A^T A - I||_F for a matrix whose columns should be orthonormal.
double orthonormality_defect(const Matrix& q);

/// Sum of the s largest |x_i|. Throws std::invalid_argument unless
/// 1 <= s <= x.size().
double s_largest_abs_sum(std::span<const double> x, std::size_t s);

/// Indices of the s largest |x_i|, lowest index first among ties.
std::vector<std::size_t> s_largest_abs_indices(std::span<const double> x,
                                               std::size_t s);

}  // namespace lmr

#endif  // LMR_MATRIX_H_
