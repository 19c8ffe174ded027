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

#include "lmr/matrix.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace lmr {

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, Vector data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw std::invalid_argument("Matrix: expected " +
                                std::to_string(rows * cols) + " entries, got " +
                                std::to_string(data_.size()));
  }
  if (!all_finite()) {
    throw std::invalid_argument("Matrix: entries must be finite");
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
  return diagonal(d.size(), d.size(), d);
}

Matrix Matrix::diagonal(std::size_t rows, std::size_t cols,
                        std::span<const double> d) {
  if (d.size() > std::min(rows, cols)) {
    throw std::invalid_argument("Matrix::diagonal: too many entries");
  }
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Matrix Matrix::from_rows(const std::vector<Vector>& rows) {
  if (rows.empty()) return Matrix();
  const std::size_t cols = rows.front().size();
  Vector data;
  data.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) {
      throw std::invalid_argument("Matrix::from_rows: ragged rows");
    }
    data.insert(data.end(), r.begin(), r.end());
  }
  return Matrix(rows.size(), cols, std::move(data));
}

Vector Matrix::column(std::size_t j) const {
  Vector c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

void Matrix::set_column(std::size_t j, std::span<const double> v) {
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

Matrix Matrix::columns(std::size_t first, std::size_t count) const {
  return block(0, first, rows_, count);
}

Matrix Matrix::block(std::size_t row0, std::size_t col0, std::size_t nrows,
                     std::size_t ncols) const {
  if (row0 + nrows > rows_ || col0 + ncols > cols_) {
    throw std::invalid_argument("Matrix::block: out of range");
  }
  Matrix b(nrows, ncols);
  for (std::size_t i = 0; i < nrows; ++i) {
    for (std::size_t j = 0; j < ncols; ++j) b(i, j) = (*this)(row0 + i, col0 + j);
  }
  return b;
}

bool Matrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

Matrix& Matrix::operator+=(const Matrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) {
    throw std::invalid_argument("Matrix +=: dimension mismatch");
  }
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) {
    throw std::invalid_argument("Matrix -=: dimension mismatch");
  }
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("Matrix *: dimension mismatch");
  }
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

Vector operator*(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) {
    throw std::invalid_argument("Matrix * vector: dimension mismatch");
  }
  Vector y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
  return y;
}

double inner(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("inner: dimension mismatch");
  }
  return dot(a.data(), b.data());
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

double norm1(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += std::abs(v);
  return s;
}

double norm_inf(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s = std::max(s, std::abs(v));
  return s;
}

double orthonormality_defect(const Matrix& q) {
  double sum = 0.0;
  for (std::size_t i = 0; i < q.cols(); ++i) {
    for (std::size_t j = 0; j < q.cols(); ++j) {
      double g = 0.0;
      for (std::size_t k = 0; k < q.rows(); ++k) g += q(k, i) * q(k, j);
      if (i == j) g -= 1.0;
      sum += g * g;
    }
  }
  return std::sqrt(sum);
}

std::vector<std::size_t> s_largest_abs_indices(std::span<const double> x,
                                               std::size_t s) {
  if (s < 1 || s > x.size()) {
    throw std::invalid_argument("s_largest_abs: s must lie in [1, " +
                                std::to_string(x.size()) + "]");
  }
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(x[a]) > std::abs(x[b]);
  });
  idx.resize(s);
  return idx;
}

double s_largest_abs_sum(std::span<const double> x, std::size_t s) {
  double sum = 0.0;
  for (std::size_t i : s_largest_abs_indices(x, s)) sum += std::abs(x[i]);
  return sum;
}

}  // namespace lmr
