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

#include "lmr/svd.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace lmr {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Column-major scratch: cols[j] is column j.
using Columns = std::vector<Vector>;

Columns to_columns(const Matrix& x) {
  Columns c(x.cols(), Vector(x.rows()));
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) c[j][i] = x(i, j);
  }
  return c;
}

Matrix from_columns(const Columns& c, std::size_t rows) {
  Matrix m(rows, c.size());
  for (std::size_t j = 0; j < c.size(); ++j) m.set_column(j, c[j]);
  return m;
}

void rotate(Vector& a, Vector& b, double c, double s) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double x = a[k];
    const double y = b[k];
    a[k] = c * x - s * y;
    b[k] = s * x + c * y;
  }
}

double off_diagonal_measure(const Columns& a) {
  double worst = 0.0;
  for (std::size_t p = 0; p < a.size(); ++p) {
    for (std::size_t q = p + 1; q < a.size(); ++q) {
      const double np = norm2(a[p]);
      const double nq = norm2(a[q]);
      if (np == 0.0 || nq == 0.0) continue;
      worst = std::max(worst, std::abs(dot(a[p], a[q])) / (np * nq));
    }
  }
  return worst;
}

// Fills the columns flagged in `missing` so that all columns of `cols` are
// orthonormal. Existing columns must already be orthonormal.
void complete_basis(Columns& cols, const std::vector<bool>& missing,
                    std::size_t dim) {
  Columns basis;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (!missing[j]) basis.push_back(cols[j]);
  }
  std::size_t next_candidate = 0;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (!missing[j]) continue;
    while (next_candidate < dim) {
      Vector v(dim, 0.0);
      v[next_candidate++] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (const Vector& b : basis) {
          const double proj = dot(b, v);
          for (std::size_t k = 0; k < dim; ++k) v[k] -= proj * b[k];
        }
      }
      const double nv = norm2(v);
      if (nv > 0.5) {
        for (double& x : v) x /= nv;
        basis.push_back(v);
        cols[j] = v;
        break;
      }
    }
  }
}

// Hestenes one-sided Jacobi for a tall (rows >= cols) matrix.
SvdFactors jacobi_tall(const Matrix& x) {
  const std::size_t m = x.rows();
  const std::size_t n = x.cols();
  Columns a = to_columns(x);
  Columns v(n, Vector(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) v[j][j] = 1.0;

  const double tol = kEps * static_cast<double>(std::max<std::size_t>(m, 1));
  double total = 0.0;
  for (const Vector& c : a) total += dot(c, c);
  const double negligible = total * kEps * kEps;

  bool converged = (n < 2);
  int sweep = 0;
  for (; sweep < kMaxJacobiSweeps && !converged; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = dot(a[p], a[p]);
        const double beta = dot(a[q], a[q]);
        const double gamma = dot(a[p], a[q]);
        if (alpha <= negligible || beta <= negligible) continue;
        if (std::abs(gamma) <= tol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        rotate(a[p], a[q], c, s);
        rotate(v[p], v[q], c, s);
      }
    }
    converged = !rotated;
  }
  if (!converged) throw SvdConvergenceError(sweep, off_diagonal_measure(a));

  Vector sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = norm2(a[j]);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return sigma[i] > sigma[j];
  });

  const double smax = n > 0 ? sigma[order[0]] : 0.0;
  const double cutoff = std::max(smax * kEps * static_cast<double>(m),
                                 std::numeric_limits<double>::min());
  Columns uc(n, Vector(m, 0.0));
  Columns vc(n);
  Vector sorted(n);
  std::vector<bool> missing(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    sorted[k] = sigma[j];
    vc[k] = v[j];
    if (sigma[j] > cutoff) {
      for (std::size_t i = 0; i < m; ++i) uc[k][i] = a[j][i] / sigma[j];
    } else {
      missing[k] = true;
    }
  }
  complete_basis(uc, missing, m);

  return SvdFactors{from_columns(uc, m), std::move(sorted), from_columns(vc, n)};
}

void apply_sign_convention(SvdFactors& f) {
  for (std::size_t j = 0; j < f.u.cols(); ++j) {
    for (std::size_t i = 0; i < f.u.rows(); ++i) {
      const double val = f.u(i, j);
      if (std::abs(val) > 1e-12) {
        if (val < 0.0) {
          for (std::size_t k = 0; k < f.u.rows(); ++k) f.u(k, j) = -f.u(k, j);
          for (std::size_t k = 0; k < f.v.rows(); ++k) f.v(k, j) = -f.v(k, j);
        }
        break;
      }
    }
  }
}

}  // namespace

SvdConvergenceError::SvdConvergenceError(int sweeps, double residual)
    : std::runtime_error("svd: Jacobi iteration did not converge after " +
                         std::to_string(sweeps) +
                         " sweeps (max relative column coupling " +
                         std::to_string(residual) + ")"),
      residual_(residual) {}

std::size_t SvdFactors::rank() const {
  if (sigma.empty() || sigma[0] == 0.0) return 0;
  const double cut = kRankThreshold * sigma[0];
  return static_cast<std::size_t>(
      std::count_if(sigma.begin(), sigma.end(), [&](double s) { return s > cut; }));
}

Matrix SvdFactors::reconstruct() const {
  Matrix us = u;
  for (std::size_t i = 0; i < us.rows(); ++i) {
    for (std::size_t j = 0; j < us.cols(); ++j) us(i, j) *= sigma[j];
  }
  return us * v.transpose();
}

SvdFactors svd(const Matrix& x) {
  if (!x.all_finite()) throw std::invalid_argument("svd: non-finite entries");
  SvdFactors f;
  if (x.rows() >= x.cols()) {
    f = jacobi_tall(x);
  } else {
    SvdFactors t = jacobi_tall(x.transpose());
    f = SvdFactors{std::move(t.v), std::move(t.sigma), std::move(t.u)};
  }
  apply_sign_convention(f);
  return f;
}

Vector singular_values(const Matrix& x) { return svd(x).sigma; }

MatrixNorms norms(const Matrix& x) {
  const Vector s = singular_values(x);
  MatrixNorms out{0.0, s.empty() ? 0.0 : s[0], 0.0};
  for (double v : s) {
    out.nuclear += v;
    out.frobenius += v * v;
  }
  out.frobenius = std::sqrt(out.frobenius);
  return out;
}

double nuclear_norm(const Matrix& x) { return norms(x).nuclear; }
double spectral_norm(const Matrix& x) { return norms(x).spectral; }
double frobenius_norm(const Matrix& x) { return norm2(x.data()); }

double ky_fan_norm(const Matrix& x, std::size_t s) {
  const std::size_t r = std::min(x.rows(), x.cols());
  if (s < 1 || s > r) {
    throw std::invalid_argument("ky_fan_norm: s must lie in [1, " +
                                std::to_string(r) + "]");
  }
  const Vector sv = singular_values(x);
  return std::accumulate(sv.begin(), sv.begin() + static_cast<long>(s), 0.0);
}

Matrix best_s_rank_approx(const Matrix& x, std::size_t s) {
  const std::size_t r = std::min(x.rows(), x.cols());
  if (s > r) {
    throw std::invalid_argument("best_s_rank_approx: s exceeds min(m, n)");
  }
  SvdFactors f = svd(x);
  for (std::size_t i = s; i < f.sigma.size(); ++i) f.sigma[i] = 0.0;
  return f.reconstruct();
}

Matrix orthonormal_complement(const Matrix& q) {
  const std::size_t m = q.rows();
  const std::size_t k = q.cols();
  if (k > m) throw std::invalid_argument("orthonormal_complement: k > m");
  Columns cols = to_columns(q);
  cols.resize(m, Vector(m, 0.0));
  std::vector<bool> missing(m, false);
  for (std::size_t j = k; j < m; ++j) missing[j] = true;
  complete_basis(cols, missing, m);
  Columns extra(cols.begin() + static_cast<long>(k), cols.end());
  return from_columns(extra, m);
}

}  // namespace lmr
