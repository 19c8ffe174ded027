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

#ifndef LMR_RIP_H_
#define LMR_RIP_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lmr/linear_transformation.h"

namespace lmr {

/// Extreme singular values of the p x mn representation. sigma_min is 0
/// whenever the representation has a nontrivial null space (p < mn
/// included).
struct RepresentationSpectrum {
  double sigma_max = 0.0;
  double sigma_min = 0.0;
};
RepresentationSpectrum representation_spectrum(const LinearTransformation& op);

/// delta_r = max(sigma_max^2 - 1, 1 - sigma_min^2). Every matrix has rank at
/// most r, so this is the exact restricted isometry constant of order r and
/// a sound upper bound for every smaller order.
double rip_exact_full_rank(const LinearTransformation& op);

/// The smallest delta_r over rescalings c A, attained at
/// c^2 = 2 / (sigma_max^2 + sigma_min^2). Null(A) and the beta = infinity
/// G-numbers are scale invariant, so this tighter value may be used there.
double rip_full_rank_rescaled(const LinearTransformation& op);

struct RipEstimate {
  std::size_t s = 0;
  double delta_lower = 0.0;
  std::optional<double> delta_exact;  // set when s = r
  std::optional<double> delta_upper;  // delta_r, sound for all orders
  std::size_t samples = 0;            // per rank 1..s
  std::uint64_t seed = 0;
};

/// Number of leading samples per rank that receive projected power-iteration
/// refinement.
inline constexpr std::size_t kRipRefinedSamples = 8;

/// Lower estimate of delta_s: the largest |‖A X‖_2^2 - 1| over unit-Frobenius
/// matrices X of rank k <= s. For every k the samples come from streams
/// derived from (seed, k, index), so the estimate is nondecreasing in s and
/// in the sample count. The first kRipRefinedSamples samples of each rank
/// are refined by projected power iteration towards both extremes.
/// Throws std::invalid_argument unless 1 <= s <= r.
RipEstimate rip_sample_lower(const LinearTransformation& op, std::size_t s,
                             std::size_t samples = 10000, std::uint64_t seed = 0);

struct RipGoodnessBound {
  double gamma_hat_bound = 0.0;
  double gamma_bound = 0.0;
  double beta_min = 0.0;
  bool certifying = false;  // delta < sqrt(2) - 1
};

/// For a restricted isometry constant delta of order 2s, under the l2
/// measurement norm:
///   gamma_hat_s(A, beta) <= sqrt(2) delta / (1 + (sqrt(2) - 1) delta)
///     for beta >= sqrt(s (1 + delta)) / (1 + (sqrt(2) - 1) delta),
///   gamma_s(A) <= sqrt(2) delta / (1 - delta).
/// Throws std::invalid_argument for delta < 0 or s = 0.
RipGoodnessBound goodness_from_rip(double delta_2s, std::size_t s);

struct Gamma1RipBound {
  double gamma1_bound = 0.0;
  double s_threshold = 0.0;  // +inf when delta = 0
};

/// Gamma_1(A) <= sqrt(2) delta / ((1 - delta) sqrt(t s - 1)) and the
/// sparsity level (1 - delta) sqrt(t s - 1) / (2 sqrt(2) delta) below which
/// s Gamma_1 < 1/2. Throws std::invalid_argument unless t s > 1 and
/// 0 <= delta < 1.
Gamma1RipBound gamma1_bound_from_rip(double delta_ts, double t, std::size_t s);

enum class GuaranteeStatus { kSatisfied, kNotRefuted, kViolated, kUnknown };
std::string_view to_string(GuaranteeStatus status);

struct GuaranteeEntry {
  std::string source;
  std::size_t order_multiple = 2;  // the condition is on delta_{k s}
  double threshold = 0.0;
  std::string threshold_text;
  GuaranteeStatus status = GuaranteeStatus::kUnknown;
};

/// Decides one condition delta_{k s} < threshold from an estimate:
/// satisfied if the exact value or a sound upper bound is below it,
/// violated if the exact value or the lower estimate reaches it, otherwise
/// not refuted. A missing estimate gives kUnknown.
GuaranteeStatus evaluate_condition(const std::optional<RipEstimate>& estimate,
                                   double threshold);

/// Published RIP recovery conditions, evaluated on estimates of order
/// 2s, 3s, 4s and 5s.
std::vector<GuaranteeEntry> guarantee_table(const std::optional<RipEstimate>& est2,
                                            const std::optional<RipEstimate>& est3,
                                            const std::optional<RipEstimate>& est4,
                                            const std::optional<RipEstimate>& est5);

}  // namespace lmr

#endif  // LMR_RIP_H_
