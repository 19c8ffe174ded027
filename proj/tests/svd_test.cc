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

#include <cmath>
#include <stdexcept>

#include "gtest/gtest.h"
#include "lmr/random.h"
#include "test_util.h"

#ifdef LMR_HAVE_EIGEN
#include <Eigen/SVD>
#endif

namespace lmr {
namespace {

using testing::make;
using testing::MatrixNear;

Matrix diag321() { return Matrix::diagonal(Vector{3, 2, 1}); }

void ExpectFactorInvariants(const Matrix& x, const SvdFactors& f) {
  EXPECT_LE(orthonormality_defect(f.u), 1e-9);
  EXPECT_LE(orthonormality_defect(f.v), 1e-9);
  for (std::size_t i = 0; i + 1 < f.sigma.size(); ++i) {
    EXPECT_GE(f.sigma[i], f.sigma[i + 1]);
  }
  for (double s : f.sigma) EXPECT_GE(s, 0);
  EXPECT_LE(frobenius_norm(f.reconstruct() - x), 1e-9 * (1 + frobenius_norm(x)));
  // Sign convention: the first nonzero entry of each column of U is >= 0.
  for (std::size_t j = 0; j < f.u.cols(); ++j) {
    for (std::size_t i = 0; i < f.u.rows(); ++i) {
      if (std::abs(f.u(i, j)) > 1e-12) {
        EXPECT_GT(f.u(i, j), 0);
        break;
      }
    }
  }
}

TEST(SvdTest, DiagonalMatrix) {
  SvdFactors f = svd(diag321());
  EXPECT_TRUE(MatrixNear(f.u, Matrix::identity(3), 1e-14));
  EXPECT_TRUE(MatrixNear(f.v, Matrix::identity(3), 1e-14));
  EXPECT_EQ(f.sigma, (Vector{3, 2, 1}));
}

TEST(SvdTest, ZeroMatrix) {
  SvdFactors f = svd(Matrix(2, 3));
  EXPECT_EQ(f.sigma, (Vector{0, 0}));
  EXPECT_EQ(f.rank(), 0u);
  ExpectFactorInvariants(Matrix(2, 3), f);
}

TEST(SvdTest, RandomReconstruction) {
  Rng rng(3);
  Matrix x = rng.gaussian_matrix(4, 4);
  SvdFactors f = svd(x);
  EXPECT_LE(frobenius_norm(f.reconstruct() - x), 1e-10);
  ExpectFactorInvariants(x, f);
}

TEST(SvdTest, RectangularShapes) {
  Rng rng(4);
  for (auto [m, n] : {std::pair{5, 3}, std::pair{3, 5}, std::pair{1, 6}, std::pair{6, 1}}) {
    Matrix x = rng.gaussian_matrix(m, n);
    SvdFactors f = svd(x);
    EXPECT_EQ(f.u.rows(), static_cast<std::size_t>(m));
    EXPECT_EQ(f.v.rows(), static_cast<std::size_t>(n));
    EXPECT_EQ(f.sigma.size(), static_cast<std::size_t>(std::min(m, n)));
    ExpectFactorInvariants(x, f);
  }
}

TEST(SvdTest, RankDeficientInput) {
  Matrix x = random_s_rank(6, 5, 2, 9);
  SvdFactors f = svd(x);
  EXPECT_EQ(f.rank(), 2u);
  ExpectFactorInvariants(x, f);
}

TEST(SvdTest, DeterministicBitIdentical) {
  Rng rng(5);
  Matrix x = rng.gaussian_matrix(6, 4);
  SvdFactors a = svd(x);
  SvdFactors b = svd(x);
  EXPECT_EQ(a.u, b.u);
  EXPECT_EQ(a.v, b.v);
  EXPECT_EQ(a.sigma, b.sigma);
}

TEST(SvdTest, RejectsNonFinite) {
  Matrix x(2, 2);
  x(0, 0) = std::nan("");
  EXPECT_THROW(svd(x), std::invalid_argument);
}

TEST(NormsTest, DiagonalMatrix) {
  MatrixNorms n = norms(diag321());
  EXPECT_DOUBLE_EQ(n.nuclear, 6);
  EXPECT_DOUBLE_EQ(n.spectral, 3);
  EXPECT_DOUBLE_EQ(n.frobenius, std::sqrt(14.0));
}

TEST(NormsTest, UnitRankOne) {
  Rng rng(6);
  Vector u = rng.gaussian_vector(4);
  Vector v = rng.gaussian_vector(3);
  double nu = norm2(u), nv = norm2(v);
  Matrix x(4, 3);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 3; ++j) x(i, j) = u[i] * v[j] / (nu * nv);
  MatrixNorms n = norms(x);
  EXPECT_NEAR(n.nuclear, 1, 1e-12);
  EXPECT_NEAR(n.spectral, 1, 1e-12);
  EXPECT_NEAR(n.frobenius, 1, 1e-12);
}

TEST(NormsTest, NuclearIsSumOfSingularValues) {
  Rng rng(7);
  Matrix x = rng.gaussian_matrix(5, 3);
  Vector s = singular_values(x);
  EXPECT_NEAR(nuclear_norm(x), s[0] + s[1] + s[2], 1e-10);
  EXPECT_NEAR(spectral_norm(x), s[0], 1e-12);
}

TEST(KyFanTest, Examples) {
  EXPECT_DOUBLE_EQ(ky_fan_norm(diag321(), 2), 5);
  EXPECT_DOUBLE_EQ(ky_fan_norm(diag321(), 1), 3);
  EXPECT_THROW(ky_fan_norm(diag321(), 0), std::invalid_argument);
  EXPECT_THROW(ky_fan_norm(diag321(), 4), std::invalid_argument);
}

TEST(KyFanTest, VariationalForm) {
  // ||X||_{s,*} = max <Z, X> over ||Z|| <= 1, ||Z||_* <= s. Every sampled
  // feasible Z stays below the closed form, and U_s V_s^T attains it.
  Rng rng(8);
  Matrix x = rng.gaussian_matrix(4, 4);
  const double closed = ky_fan_norm(x, 2);
  double best = -1;
  for (int k = 0; k < 10000; ++k) {
    Matrix p = random_orthonormal(rng, 4, 2);
    Matrix q = random_orthonormal(rng, 4, 2);
    double a = rng.uniform(0, 1), b = rng.uniform(0, 1);
    Matrix z = p * Matrix::diagonal(Vector{a, b}) * q.transpose();
    best = std::max(best, inner(z, x));
  }
  EXPECT_LE(best, closed + 1e-6);
  SvdFactors f = svd(x);
  Matrix z = f.u.columns(0, 2) * f.v.columns(0, 2).transpose();
  EXPECT_NEAR(inner(z, x), closed, 1e-10);
}

TEST(BestRankTest, Examples) {
  EXPECT_TRUE(MatrixNear(best_s_rank_approx(diag321(), 1),
                         Matrix::diagonal(Vector{3, 0, 0}), 1e-14));
  Matrix tail = diag321() - best_s_rank_approx(diag321(), 2);
  EXPECT_NEAR(nuclear_norm(tail), 1, 1e-14);
  Rng rng(9);
  Matrix x = rng.gaussian_matrix(4, 3);
  EXPECT_TRUE(MatrixNear(best_s_rank_approx(x, 3), x, 1e-9));
  EXPECT_THROW(best_s_rank_approx(x, 4), std::invalid_argument);
}

TEST(BestRankTest, TailNuclearIsComplementOfKyFan) {
  Rng rng(10);
  Matrix x = rng.gaussian_matrix(5, 5);
  for (std::size_t s = 1; s <= 5; ++s) {
    double tail = nuclear_norm(x - best_s_rank_approx(x, s));
    EXPECT_NEAR(tail + ky_fan_norm(x, s), nuclear_norm(x), 1e-9);
  }
}

TEST(MatrixInvariantsTest, VonNeumannTraceInequality) {
  Rng rng(20);
  for (int trial = 0; trial < 100; ++trial) {
    Matrix y = rng.gaussian_matrix(4, 3);
    Matrix z = rng.gaussian_matrix(4, 3);
    Vector sy = singular_values(y), sz = singular_values(z);
    EXPECT_LE(inner(y, z), dot(sy, sz) + 1e-9);
  }
}

TEST(MatrixInvariantsTest, KyFanSubmultiplicative) {
  Rng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    Matrix x = rng.gaussian_matrix(6, 6);
    for (std::size_t s = 1; s <= 6; ++s) {
      for (std::size_t t = 1; s * t <= 6; ++t) {
        EXPECT_LE(ky_fan_norm(x, s * t), s * ky_fan_norm(x, t) + 1e-9);
      }
    }
  }
}

TEST(MatrixInvariantsTest, NuclearSpectralDuality) {
  Rng rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    Matrix x = rng.gaussian_matrix(3, 5);
    Matrix z = rng.gaussian_matrix(3, 5);
    EXPECT_LE(std::abs(inner(x, z)), nuclear_norm(x) * spectral_norm(z) + 1e-9);
  }
}

TEST(OrthonormalComplementTest, CompletesBasis) {
  Rng rng(23);
  Matrix q = random_orthonormal(rng, 5, 2);
  Matrix c = orthonormal_complement(q);
  ASSERT_EQ(c.rows(), 5u);
  ASSERT_EQ(c.cols(), 3u);
  EXPECT_LE(orthonormality_defect(c), 1e-12);
  EXPECT_LE(frobenius_norm(q.transpose() * c), 1e-12);
}

#ifdef LMR_HAVE_EIGEN
TEST(SvdTest, SingularValuesMatchEigen) {
  Rng rng(30);
  for (auto [m, n] : {std::pair{4, 4}, std::pair{7, 3}, std::pair{3, 8}, std::pair{12, 12}}) {
    Matrix x = rng.gaussian_matrix(m, n);
    Eigen::MatrixXd e(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) e(i, j) = x(i, j);
    Eigen::JacobiSVD<Eigen::MatrixXd> oracle(e);
    Vector s = singular_values(x);
    ASSERT_EQ(s.size(), static_cast<std::size_t>(oracle.singularValues().size()));
    for (std::size_t i = 0; i < s.size(); ++i) {
      EXPECT_NEAR(s[i], oracle.singularValues()(i), 1e-12 * (1 + s[0]));
    }
  }
}
#endif

}  // namespace
}  // namespace lmr
