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


#include "lmr/recovery.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "gtest/gtest.h"
#include "lmr/goodness.h"
#include "lmr/random.h"
#include "lmr/svd.h"
#include "test_util.h"

namespace lmr {
namespace {

using testing::MatrixNear;

TEST(ErrorBoundTest, NoiselessExamples) {
  EXPECT_EQ(error_bound_noiseless(0.25, 0, 0), 0);
  EXPECT_DOUBLE_EQ(error_bound_noiseless(0.25, 0.1, 0.2), 1.0);
  EXPECT_THROW(error_bound_noiseless(0.5, 0, 0), std::invalid_argument);
  EXPECT_THROW(error_bound_noiseless(0.1, -1, 0), std::invalid_argument);
}

TEST(ErrorBoundTest, NoisyExamples) {
  EXPECT_DOUBLE_EQ(error_bound_noisy(0.25, 2, 0.1, 0.1, 0, 0), 1.6);
  EXPECT_THROW(error_bound_noisy(0.5, 2, 0, 0, 0, 0), std::invalid_argument);
  EXPECT_THROW(error_bound_noisy(0.2, kInfinity, 0, 0, 0, 0), std::invalid_argument);
}

TEST(ErrorBoundTest, NoisyReducesToNoiseless) {
  Rng rng(1);
  for (int k = 0; k < 100; ++k) {
    const double g = rng.uniform(0, 0.499), up = rng.uniform(0, 1), tail = rng.uniform(0, 1);
    const double beta = rng.uniform(0.1, 10);
    EXPECT_DOUBLE_EQ(error_bound_noisy(g, beta, 0, 0, tail, up),
                     error_bound_noiseless(g, up, tail));
  }
}

TEST(ErrorBoundTest, IncreasingInGammaHat) {
  double prev = 0;
  for (double g = 0; g < 0.49; g += 0.01) {
    const double b = error_bound_noisy(g, 1.5, 0.1, 0.2, 0.3, 0.01);
    EXPECT_GE(b, prev);
    prev = b;
  }
}

TEST(BlockAssumptionTest, XEqualsW) {
  Matrix w = random_s_rank(4, 4, 2, 3);
  BlockCheck c = block_assumption_check(w, w);
  EXPECT_TRUE(c.holds);
  Vector sigma = singular_values(w);
  EXPECT_TRUE(MatrixNear(c.x1, Matrix::diagonal(Vector{sigma[0], sigma[1]}), 1e-10));
  EXPECT_TRUE(MatrixNear(c.x2, Matrix(2, 2), 1e-10));
  EXPECT_TRUE(MatrixNear(c.x_s, w, 1e-10));
}

TEST(BlockAssumptionTest, BlockDiagonalByConstruction) {
  Rng rng(4);
  for (auto [m, n] : {std::pair{4, 4}, std::pair{5, 3}, std::pair{3, 5}}) {
    const std::size_t r = std::min(m, n), s = 1;
    Matrix u = random_orthonormal(rng, m, r);
    Matrix v = random_orthonormal(rng, n, r);
    Matrix w = u.columns(0, 1) * Matrix::diagonal(Vector{2.0}) * v.columns(0, 1).transpose();
    Matrix core(r, r);
    core(0, 0) = 1.7;
    Matrix x2 = rng.gaussian_matrix(r - s, r - s);
    for (std::size_t i = 0; i < r - s; ++i)
      for (std::size_t j = 0; j < r - s; ++j) core(s + i, s + j) = x2(i, j);
    Matrix x = u * core * v.transpose();
    BlockCheck c = block_assumption_check(x, w, s);
    EXPECT_TRUE(c.holds) << m << "x" << n << " residual " << c.relative_residual;
    EXPECT_NEAR(c.x1(0, 0), 1.7, 1e-10);
    EXPECT_NEAR(nuclear_norm(c.x2), nuclear_norm(x2), 1e-9);
  }
}

TEST(BlockAssumptionTest, OffDiagonalBlockBreaksIt) {
  Rng rng(5);
  Matrix u = random_orthonormal(rng, 4, 4);
  Matrix v = random_orthonormal(rng, 4, 4);
  Matrix w = u.columns(0, 1) * v.columns(0, 1).transpose();
  Matrix core = Matrix::diagonal(Vector{1, 0.5, 0.3, 0.1});
  core(0, 2) = 0.2;  // X3
  BlockCheck c = block_assumption_check(u * core * v.transpose(), w, 1, 8);
  EXPECT_FALSE(c.holds);
  EXPECT_GT(c.relative_residual, 1e-3);
}

TEST(BlockAssumptionTest, ArgumentChecks) {
  EXPECT_THROW(block_assumption_check(Matrix::identity(2), Matrix(2, 2)), std::invalid_argument);
  EXPECT_THROW(block_assumption_check(Matrix::identity(2), Matrix::identity(3)),
               std::invalid_argument);
  EXPECT_THROW(block_assumption_check(Matrix::identity(2), Matrix::identity(2), 3),
               std::invalid_argument);
}

TEST(ExactTrialTest, VectorizationAlwaysSucceeds) {
  auto op = LinearTransformation::vectorization(3, 3);
  Matrix w = random_s_rank(3, 3, 2, 6);
  RecoveryConfig cfg;
  cfg.s = 2;
  TrialRecord t = exact_recovery_trial(op, w, cfg);
  EXPECT_TRUE(t.success);
  EXPECT_LE(t.recovery_error_nuclear, 1e-8);
  EXPECT_TRUE(t.certificate_valid);
  EXPECT_TRUE(t.block_assumption);
}

TEST(ExactTrialTest, EmptyOperatorFails) {
  LinearTransformation op(3, 3, {});
  TrialRecord t = exact_recovery_trial(op, random_s_rank(3, 3, 1, 7));
  EXPECT_FALSE(t.success);
  EXPECT_NEAR(t.recovery_error_rel_frobenius, 1, 1e-12);
}

TEST(ExactTrialTest, NonConvergedIsNeverSuccess) {
  auto op = LinearTransformation::gaussian(4, 4, 12, 8);
  RecoveryConfig cfg;
  cfg.solver.max_iterations = 2;
  cfg.success_tol = 10;  // any error would pass
  TrialRecord t = exact_recovery_trial(op, random_s_rank(4, 4, 1, 9), cfg);
  EXPECT_EQ(t.status, SolveStatus::kNotConverged);
  EXPECT_FALSE(t.success);
}

TEST(ExactTrialTest, InputChecks) {
  auto op = LinearTransformation::gaussian(3, 3, 5, 1);
  EXPECT_THROW(exact_recovery_trial(op, Matrix(2, 3)), std::invalid_argument);
  RecoveryConfig cfg;
  cfg.s = 4;
  EXPECT_THROW(exact_recovery_trial(op, Matrix::identity(3), cfg), std::invalid_argument);
}

TEST(ExactTrialTest, NoiselessBoundOnInjectiveOperator) {
  // gamma_hat = 0 at beta = inf for an injective operator.
  auto op = LinearTransformation::gaussian(3, 3, 9, 10);
  Matrix w = random_s_rank(3, 3, 1, 11);
  RecoveryConfig cfg;
  cfg.goodness = SoundGoodness{0.0, kInfinity};
  TrialRecord t = exact_recovery_trial(op, w, cfg);
  EXPECT_TRUE(t.success);
  if (t.block_assumption) {
    ASSERT_TRUE(t.bound_value.has_value());
    EXPECT_TRUE(t.bound_respected);
  }
}

TEST(ExactTrialTest, SGoodOperatorsRecover) {
  // Whenever the sound verdict is S_GOOD, every s-rank target is recovered.
  int good = 0;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    auto op = LinearTransformation::gaussian(3, 3, 9 + seed % 3, 400 + seed);
    CertifyConfig cc;
    cc.seed = seed;
    cc.restarts = 2;
    cc.null_space_samples = 2;
    cc.factor_pairs = 4;
    GoodnessCertificate c = certify(op, {1, kInfinity, GNumberKind::kGammaHat}, cc);
    if (c.verdict != Verdict::kSGood) continue;
    ++good;
    for (std::uint64_t k = 0; k < 3; ++k) {
      EXPECT_TRUE(exact_recovery_trial(op, random_s_rank(3, 3, 1, 500 + k)).success);
    }
  }
  EXPECT_GT(good, 0);
}

TEST(NoisyTrialTest, BoundHoldsEndToEnd) {
  // Vectorization with diagonal target and diagonal noise: the solution
  // stays diagonal, so the Block Assumption holds in the identity frame.
  // The injective bound gamma_hat = 0 holds for beta = sqrt(s) / sigma_min.
  auto op = LinearTransformation::vectorization(3, 3);
  Matrix w = Matrix::diagonal(Vector{2, 0, 0});
  Vector noise(9, 0.0);
  noise[0] = 0.01;
  noise[4] = -0.02;
  noise[8] = 0.015;
  const double eps = norm2(noise);
  RecoveryConfig cfg;
  cfg.goodness = SoundGoodness{0.0, 1.0};
  cfg.conservative_upsilon = 1e-6;
  TrialRecord t = noisy_recovery_trial(op, w, noise, eps, cfg);
  EXPECT_TRUE(t.block_assumption);
  ASSERT_TRUE(t.bound_value.has_value());
  EXPECT_TRUE(t.bound_respected);
  EXPECT_LE(t.recovery_error_nuclear, *t.bound_value + 1e-7);
}

TEST(NoisyTrialTest, NoiseMustFitEpsilon) {
  auto op = LinearTransformation::vectorization(2, 2);
  EXPECT_THROW(noisy_recovery_trial(op, Matrix::identity(2), Vector{1, 0, 0, 0}, 0.5),
               std::invalid_argument);
}

TEST(NoisyTrialTest, RecordsEpsilonAndTheta) {
  auto op = LinearTransformation::gaussian(3, 3, 9, 12);
  Vector noise(9, 0.001);
  const double eps = 2 * norm2(noise);
  TrialRecord t = noisy_recovery_trial(op, random_s_rank(3, 3, 1, 13), noise, eps);
  EXPECT_EQ(t.epsilon, eps);
  EXPECT_LE(t.theta, eps + 1e-8);
}

TEST(PhaseGridTest, FullMeasurementsAlwaysRecover) {
  PhaseGridConfig cfg;
  cfg.m = cfg.n = 3;
  cfg.s_values = {1};
  cfg.p_values = {9};
  cfg.trials = 5;
  PhaseGrid g = phase_grid(cfg);
  ASSERT_EQ(g.cells.size(), 1u);
  EXPECT_EQ(g.cells[0].successes, 5u);
  EXPECT_EQ(g.trials.size(), 5u);
}

TEST(PhaseGridTest, NoMeasurementsNeverRecover) {
  PhaseGridConfig cfg;
  cfg.m = cfg.n = 3;
  cfg.p_values = {0};
  cfg.trials = 3;
  EXPECT_EQ(phase_grid(cfg).cells[0].successes, 0u);
}

TEST(PhaseGridTest, ShapeAndDeterminism) {
  PhaseGridConfig cfg;
  cfg.m = 4;
  cfg.n = 3;
  cfg.s_values = {1, 2};
  cfg.p_values = {4, 10};
  cfg.trials = 2;
  cfg.seed = 77;
  PhaseGrid a = phase_grid(cfg);
  PhaseGrid b = phase_grid(cfg);
  ASSERT_EQ(a.cells.size(), 4u);
  EXPECT_EQ(a.cells[1].s, 1u);
  EXPECT_EQ(a.cells[1].p, 10u);
  EXPECT_EQ(a.cells[2].s, 2u);
  std::ostringstream ca, cb;
  write_phase_csv(ca, a);
  write_phase_csv(cb, b);
  EXPECT_EQ(ca.str(), cb.str());
  EXPECT_EQ(ca.str().substr(0, ca.str().find('\n')),
            "s,p,trials,successes,mean_rel_error,mean_iterations");
  for (std::size_t k = 0; k < a.trials.size(); ++k) {
    EXPECT_EQ(a.trials[k].seed, b.trials[k].seed);
    EXPECT_EQ(a.trials[k].recovery_error_nuclear, b.trials[k].recovery_error_nuclear);
  }
}

TEST(PhaseGridTest, InputChecks) {
  PhaseGridConfig cfg;
  cfg.trials = 0;
  EXPECT_THROW(phase_grid(cfg), std::invalid_argument);
  cfg.trials = 1;
  cfg.s_values = {};
  EXPECT_THROW(phase_grid(cfg), std::invalid_argument);
  cfg.s_values = {9};
  EXPECT_THROW(phase_grid(cfg), std::invalid_argument);
}

}  // namespace
}  // namespace lmr
