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


#include "lmr/rip.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gtest/gtest.h"
#include "lmr/goodness.h"
#include "lmr/random.h"
#include "lmr/svd.h"

namespace lmr {
namespace {

const double kSqrt2 = std::sqrt(2.0);

RipEstimate Exact(double delta) {
  RipEstimate e;
  e.delta_lower = delta;
  e.delta_exact = delta;
  return e;
}

RipEstimate LowerOnly(double delta) {
  RipEstimate e;
  e.delta_lower = delta;
  return e;
}

TEST(RipExactTest, Isometries) {
  auto vec = LinearTransformation::vectorization(3, 2);
  EXPECT_NEAR(rip_exact_full_rank(vec), 0, 1e-12);
  EXPECT_NEAR(rip_exact_full_rank(vec.scaled(2)), 3, 1e-12);
  EXPECT_NEAR(rip_full_rank_rescaled(vec.scaled(2)), 0, 1e-12);
}

TEST(RipExactTest, NontrivialNullSpaceGivesAtLeastOne) {
  auto op = LinearTransformation::gaussian(3, 3, 5, 1);
  EXPECT_EQ(representation_spectrum(op).sigma_min, 0);
  EXPECT_GE(rip_exact_full_rank(op), 1);
  EXPECT_NEAR(rip_full_rank_rescaled(op), 1, 1e-12);
}

TEST(RipExactTest, MatchesRepresentationSvd) {
  auto op = LinearTransformation::gaussian(3, 3, 20, 2);
  Vector s = singular_values(op.matrix_representation());
  const double hi = s.front() * s.front(), lo = s.back() * s.back();
  EXPECT_NEAR(rip_exact_full_rank(op), std::max(hi - 1, 1 - lo), 1e-12);
  EXPECT_NEAR(rip_full_rank_rescaled(op), (hi - lo) / (hi + lo), 1e-12);
}

TEST(RipSampleTest, VectorizationIsZero) {
  auto op = LinearTransformation::vectorization(3, 3);
  for (std::size_t s = 1; s <= 3; ++s) {
    RipEstimate e = rip_sample_lower(op, s, 200, 1);
    EXPECT_NEAR(e.delta_lower, 0, 1e-12);
    EXPECT_EQ(e.s, s);
    EXPECT_EQ(e.samples, 200u);
  }
}

TEST(RipSampleTest, FullOrderCloseToExact) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto op = LinearTransformation::gaussian(4, 4, 20, 10 + seed);
    RipEstimate e = rip_sample_lower(op, 4, 2000, seed);
    ASSERT_TRUE(e.delta_exact.has_value());
    EXPECT_NEAR(*e.delta_exact, rip_exact_full_rank(op), 1e-12);
    EXPECT_LE(e.delta_lower, *e.delta_exact + 1e-9);
    EXPECT_GE(e.delta_lower, 0.95 * *e.delta_exact) << seed;
  }
}

TEST(RipSampleTest, MonotoneInOrderAndBoundedAbove) {
  auto op = LinearTransformation::gaussian(4, 4, 12, 20);
  const double upper = rip_exact_full_rank(op);
  double prev = 0;
  for (std::size_t s = 1; s <= 4; ++s) {
    RipEstimate e = rip_sample_lower(op, s, 500, 3);
    EXPECT_GE(e.delta_lower, prev - 1e-9);
    EXPECT_LE(e.delta_lower, upper + 1e-9);
    ASSERT_TRUE(e.delta_upper.has_value());
    EXPECT_NEAR(*e.delta_upper, upper, 1e-12);
    prev = e.delta_lower;
  }
}

TEST(RipSampleTest, MonotoneInSampleCount) {
  auto op = LinearTransformation::gaussian(3, 4, 9, 21);
  EXPECT_GE(rip_sample_lower(op, 2, 400, 5).delta_lower,
            rip_sample_lower(op, 2, 100, 5).delta_lower - 1e-12);
}

TEST(RipSampleTest, Deterministic) {
  auto op = LinearTransformation::gaussian(3, 3, 7, 22);
  EXPECT_EQ(rip_sample_lower(op, 2, 300, 4).delta_lower,
            rip_sample_lower(op, 2, 300, 4).delta_lower);
}

TEST(RipSampleTest, RangeChecked) {
  auto op = LinearTransformation::vectorization(2, 3);
  EXPECT_THROW(rip_sample_lower(op, 0, 10, 1), std::invalid_argument);
  EXPECT_THROW(rip_sample_lower(op, 3, 10, 1), std::invalid_argument);
}

TEST(GoodnessFromRipTest, FormulaValues) {
  RipGoodnessBound b = goodness_from_rip(0.3, 2);
  const double denom = 1 + (kSqrt2 - 1) * 0.3;
  EXPECT_DOUBLE_EQ(b.gamma_hat_bound, kSqrt2 * 0.3 / denom);
  EXPECT_NEAR(b.gamma_hat_bound, 0.37737047773661275, 1e-15);
  EXPECT_NEAR(b.beta_min, std::sqrt(2 * 1.3) / denom, 1e-15);
  EXPECT_NEAR(b.beta_min, 1.434228482910691, 1e-14);
  EXPECT_NEAR(b.gamma_bound, kSqrt2 * 0.3 / 0.7, 1e-15);
  EXPECT_TRUE(b.certifying);
}

TEST(GoodnessFromRipTest, IsometryCase) {
  RipGoodnessBound b = goodness_from_rip(0, 3);
  EXPECT_EQ(b.gamma_hat_bound, 0);
  EXPECT_EQ(b.gamma_bound, 0);
  EXPECT_DOUBLE_EQ(b.beta_min, std::sqrt(3.0));
}

TEST(GoodnessFromRipTest, Boundary) {
  for (std::size_t s = 1; s <= 5; ++s) {
    RipGoodnessBound b = goodness_from_rip(kSqrt2 - 1, s);
    EXPECT_NEAR(b.gamma_hat_bound, 0.5, 1e-12);
    EXPECT_FALSE(b.certifying);
  }
  EXPECT_FALSE(goodness_from_rip(0.6, 1).certifying);
  EXPECT_THROW(goodness_from_rip(-0.1, 1), std::invalid_argument);
  EXPECT_THROW(goodness_from_rip(0.1, 0), std::invalid_argument);
}

TEST(GoodnessFromRipTest, GammaBoundMatchesConversion) {
  // gamma <= sqrt(2) delta / (1 - delta) is the image of the gamma_hat bound
  // under gamma = g / (1 - g).
  for (double d : {0.05, 0.2, 0.4}) {
    RipGoodnessBound b = goodness_from_rip(d, 1);
    EXPECT_NEAR(gamma_from_gamma_hat(b.gamma_hat_bound).value, b.gamma_bound, 1e-12);
  }
}

TEST(Gamma1FromRipTest, Values) {
  Gamma1RipBound b = gamma1_bound_from_rip(0.5, 4, 1);
  EXPECT_NEAR(b.gamma1_bound, kSqrt2 * 0.5 / (0.5 * std::sqrt(3.0)), 1e-15);
  EXPECT_NEAR(b.gamma1_bound, 0.816496580927726, 1e-12);
  EXPECT_NEAR(b.s_threshold, 0.5 * std::sqrt(3.0) / (2 * kSqrt2 * 0.5), 1e-15);
  Gamma1RipBound z = gamma1_bound_from_rip(0, 4, 1);
  EXPECT_EQ(z.gamma1_bound, 0);
  EXPECT_TRUE(std::isinf(z.s_threshold));
  EXPECT_LT(gamma1_bound_from_rip(1e-9, 4, 1).gamma1_bound, 1e-8);
}

TEST(Gamma1FromRipTest, ArgumentChecks) {
  EXPECT_THROW(gamma1_bound_from_rip(1.0, 4, 1), std::invalid_argument);
  EXPECT_THROW(gamma1_bound_from_rip(0.2, 1, 1), std::invalid_argument);
  EXPECT_THROW(gamma1_bound_from_rip(-0.2, 4, 1), std::invalid_argument);
}

TEST(GuaranteeTableTest, IsometrySatisfiesEverything) {
  auto t = guarantee_table(Exact(0), Exact(0), Exact(0), Exact(0));
  EXPECT_EQ(t.size(), 9u);
  for (const GuaranteeEntry& e : t) EXPECT_EQ(e.status, GuaranteeStatus::kSatisfied) << e.source;
}

TEST(GuaranteeTableTest, LowerEstimateRefutes) {
  auto t = guarantee_table(LowerOnly(0.48), std::nullopt, std::nullopt, std::nullopt);
  for (const GuaranteeEntry& e : t) {
    if (e.order_multiple != 2) {
      EXPECT_EQ(e.status, GuaranteeStatus::kUnknown);
    } else {
      EXPECT_EQ(e.status, GuaranteeStatus::kViolated) << e.source;
    }
  }
  auto oymak = std::find_if(t.begin(), t.end(),
                            [](const GuaranteeEntry& e) { return e.threshold == 0.472; });
  ASSERT_NE(oymak, t.end());
  EXPECT_EQ(oymak->status, GuaranteeStatus::kViolated);
}

TEST(GuaranteeTableTest, ExactValueSplitsThresholds) {
  auto t = guarantee_table(Exact(0.40), std::nullopt, std::nullopt, std::nullopt);
  for (const GuaranteeEntry& e : t) {
    if (e.order_multiple != 2) continue;
    if (e.threshold > 0.40) {
      EXPECT_EQ(e.status, GuaranteeStatus::kSatisfied) << e.source;
    } else {
      EXPECT_EQ(e.status, GuaranteeStatus::kViolated) << e.source;
    }
  }
  EXPECT_EQ(t.front().status, GuaranteeStatus::kSatisfied);  // sqrt(2) - 1
  auto mf = std::find_if(t.begin(), t.end(),
                         [](const GuaranteeEntry& e) { return e.threshold == 0.307; });
  ASSERT_NE(mf, t.end());
  EXPECT_EQ(mf->status, GuaranteeStatus::kViolated);
}

TEST(GuaranteeTableTest, LowerBelowThresholdIsNotRefuted) {
  EXPECT_EQ(evaluate_condition(LowerOnly(0.1), 0.3), GuaranteeStatus::kNotRefuted);
  RipEstimate e = LowerOnly(0.1);
  e.delta_upper = 0.2;
  EXPECT_EQ(evaluate_condition(e, 0.3), GuaranteeStatus::kSatisfied);
  EXPECT_EQ(evaluate_condition(std::nullopt, 0.3), GuaranteeStatus::kUnknown);
}

TEST(RipConsistencyTest, BoundDominatesNullSpaceLowerBound) {
  // At beta = infinity gamma_hat is scale invariant, so the rescaled delta_r
  // (a sound delta_2s for 2s <= r) bounds gamma_hat_1 from above.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto op = LinearTransformation::gaussian(3, 3, 5 + seed % 8, 300 + seed);
    const double delta = rip_full_rank_rescaled(op);
    const double bound = goodness_from_rip(delta, 1).gamma_hat_bound;
    const double lower = null_space_ascent(op, 1, 4, seed).bound;
    EXPECT_GE(bound, lower - 1e-9) << seed;
  }
}

}  // namespace
}  // namespace lmr
