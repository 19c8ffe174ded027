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
#include <limits>
#include <stdexcept>

#include "lmr/parallel.h"
#include "lmr/random.h"
#include "lmr/svd.h"

namespace lmr {
namespace {

constexpr double kSqrt2 = 1.41421356237309504880168872420969808;
constexpr std::size_t kPowerIterations = 300;

double squared_gain(const LinearTransformation& op, const Matrix& x) {
  const Vector y = op.apply(x);
  return dot(y, y);
}

Matrix unit_frobenius(Matrix x) {
  const double f = frobenius_norm(x);
  if (f > 0.0) x *= 1.0 / f;
  return x;
}

Matrix random_unit_rank(Rng& rng, std::size_t m, std::size_t n, std::size_t k) {
  const Matrix u = random_orthonormal(rng, m, k);
  const Matrix v = random_orthonormal(rng, n, k);
  Vector x = rng.gaussian_vector(k);
  const double nx = norm2(x);
  for (double& e : x) e /= nx;
  Matrix ux = u;
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < m; ++i) ux(i, j) *= x[j];
  }
  return ux * v.transpose();
}

// Projected power iteration on X -> P_k(shift X + sign A^*A X), which
// increases <X, (shift I + sign A^*A) X> over unit rank-k matrices. Every
// iterate is feasible, so the best deviation seen is a valid lower bound.
double refine(const LinearTransformation& op, Matrix x, std::size_t k,
              double shift, double sign) {
  double best = std::abs(squared_gain(op, x) - 1.0);
  double last = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t it = 0; it < kPowerIterations; ++it) {
    Matrix g = op.adjoint(op.apply(x));
    g *= sign;
    if (shift != 0.0) g += shift * x;
    Matrix next = unit_frobenius(best_s_rank_approx(g, k));
    if (frobenius_norm(next) == 0.0) break;
    x = std::move(next);
    const double gain = squared_gain(op, x);
    best = std::max(best, std::abs(gain - 1.0));
    if (std::abs(gain - last) <= 1e-14 * std::max(1.0, gain)) break;
    last = gain;
  }
  return best;
}

}  // namespace

RepresentationSpectrum representation_spectrum(const LinearTransformation& op) {
  RepresentationSpectrum out;
  if (op.p() == 0) return out;
  const Vector sigma = singular_values(op.matrix_representation());
  out.sigma_max = sigma.front();
  const std::size_t mn = op.m() * op.n();
  out.sigma_min = op.p() >= mn ? sigma[mn - 1] : 0.0;
  if (out.sigma_min <= kRankThreshold * out.sigma_max) out.sigma_min = 0.0;
  return out;
}

double rip_exact_full_rank(const LinearTransformation& op) {
  const RepresentationSpectrum sp = representation_spectrum(op);
  return std::max(sp.sigma_max * sp.sigma_max - 1.0,
                  1.0 - sp.sigma_min * sp.sigma_min);
}

double rip_full_rank_rescaled(const LinearTransformation& op) {
  const RepresentationSpectrum sp = representation_spectrum(op);
  const double hi = sp.sigma_max * sp.sigma_max;
  const double lo = sp.sigma_min * sp.sigma_min;
  if (hi == 0.0) return 1.0;
  return (hi - lo) / (hi + lo);
}

RipEstimate rip_sample_lower(const LinearTransformation& op, std::size_t s,
                             std::size_t samples, std::uint64_t seed) {
  if (s < 1 || s > op.r()) {
    throw std::invalid_argument("rip_sample_lower: s must lie in [1, r]");
  }
  RipEstimate est;
  est.s = s;
  est.samples = samples;
  est.seed = seed;
  const double exact = rip_exact_full_rank(op);
  est.delta_upper = exact;
  if (s == op.r()) est.delta_exact = exact;

  const RepresentationSpectrum sp = representation_spectrum(op);
  const double shift = sp.sigma_max * sp.sigma_max;
  const std::size_t m = op.m();
  const std::size_t n = op.n();

  // One task per (rank, sample); results merged by max in index order.
  const std::size_t total = s * samples;
  Vector values(total, 0.0);
  parallel_for(total, [&](std::size_t task) {
    const std::size_t k = task / samples + 1;
    const std::size_t i = task % samples;
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(k),
                               static_cast<std::uint64_t>(i)}));
    const Matrix x = random_unit_rank(rng, m, n, k);
    double v = std::abs(squared_gain(op, x) - 1.0);
    if (i < kRipRefinedSamples) {
      v = std::max(v, refine(op, x, k, 0.0, 1.0));
      v = std::max(v, refine(op, x, k, shift, -1.0));
    }
    values[task] = v;
  });
  for (double v : values) est.delta_lower = std::max(est.delta_lower, v);
  // Sampled values cannot exceed delta_r; clamp round-off.
  est.delta_lower = std::min(est.delta_lower, exact);
  return est;
}

RipGoodnessBound goodness_from_rip(double delta_2s, std::size_t s) {
  if (!(delta_2s >= 0.0) || !std::isfinite(delta_2s)) {
    throw std::invalid_argument("goodness_from_rip: delta must be finite and >= 0");
  }
  if (s == 0) throw std::invalid_argument("goodness_from_rip: s must be positive");
  RipGoodnessBound out;
  const double denom = 1.0 + (kSqrt2 - 1.0) * delta_2s;
  out.gamma_hat_bound = kSqrt2 * delta_2s / denom;
  out.gamma_bound = delta_2s < 1.0 ? kSqrt2 * delta_2s / (1.0 - delta_2s)
                                   : std::numeric_limits<double>::infinity();
  out.beta_min = std::sqrt(static_cast<double>(s) * (1.0 + delta_2s)) / denom;
  out.certifying = delta_2s < kSqrt2 - 1.0;
  return out;
}

Gamma1RipBound gamma1_bound_from_rip(double delta_ts, double t, std::size_t s) {
  const double ts = t * static_cast<double>(s);
  if (!(ts > 1.0)) throw std::invalid_argument("gamma1_bound_from_rip: need t s > 1");
  if (!(delta_ts >= 0.0) || !(delta_ts < 1.0)) {
    throw std::invalid_argument("gamma1_bound_from_rip: need 0 <= delta < 1");
  }
  Gamma1RipBound out;
  const double root = std::sqrt(ts - 1.0);
  out.gamma1_bound = kSqrt2 * delta_ts / ((1.0 - delta_ts) * root);
  out.s_threshold = delta_ts == 0.0 ? std::numeric_limits<double>::infinity()
                                    : (1.0 - delta_ts) * root / (2.0 * kSqrt2 * delta_ts);
  return out;
}

std::string_view to_string(GuaranteeStatus status) {
  switch (status) {
    case GuaranteeStatus::kSatisfied:
      return "satisfied";
    case GuaranteeStatus::kNotRefuted:
      return "not_refuted";
    case GuaranteeStatus::kViolated:
      return "violated";
    case GuaranteeStatus::kUnknown:
      return "unknown";
  }
  return "unknown";
}

GuaranteeStatus evaluate_condition(const std::optional<RipEstimate>& estimate,
                                   double threshold) {
  if (!estimate) return GuaranteeStatus::kUnknown;
  if (estimate->delta_exact) {
    return *estimate->delta_exact < threshold ? GuaranteeStatus::kSatisfied
                                              : GuaranteeStatus::kViolated;
  }
  if (estimate->delta_lower >= threshold) return GuaranteeStatus::kViolated;
  if (estimate->delta_upper && *estimate->delta_upper < threshold) {
    return GuaranteeStatus::kSatisfied;
  }
  return GuaranteeStatus::kNotRefuted;
}

std::vector<GuaranteeEntry> guarantee_table(const std::optional<RipEstimate>& est2,
                                            const std::optional<RipEstimate>& est3,
                                            const std::optional<RipEstimate>& est4,
                                            const std::optional<RipEstimate>& est5) {
  struct Row {
    const char* source;
    std::size_t order;
    double threshold;
    const char* text;
  };
  const Row rows[] = {
      {"goodness-rip", 2, kSqrt2 - 1.0, "sqrt(2)-1"},
      {"Recht-Fazel-Parrilo", 5, 0.1, "1/10"},
      {"Lee-Bresler", 3, 1.0 / (1.0 + 4.0 / std::sqrt(3.0)), "1/(1+4/sqrt(3))"},
      {"Candes-Plan", 4, kSqrt2 - 1.0, "sqrt(2)-1"},
      {"Mohan-Fazel", 2, 0.307, "0.307"},
      {"Mohan-Fazel", 3, 2.0 * std::sqrt(5.0) - 4.0, "2sqrt(5)-4"},
      {"Mohan-Fazel", 4, (8.0 - std::sqrt(40.0)) / 3.0, "(8-sqrt(40))/3"},
      {"Meka-Jain-Dhillon", 2, 1.0 / 3.0, "1/3"},
      {"Oymak-Mohan-Fazel-Hassibi", 2, 0.472, "0.472"},
  };
  std::vector<GuaranteeEntry> out;
  for (const Row& row : rows) {
    const std::optional<RipEstimate>* est = nullptr;
    switch (row.order) {
      case 2:
        est = &est2;
        break;
      case 3:
        est = &est3;
        break;
      case 4:
        est = &est4;
        break;
      default:
        est = &est5;
        break;
    }
    GuaranteeEntry e;
    e.source = row.source;
    e.order_multiple = row.order;
    e.threshold = row.threshold;
    e.threshold_text = row.text;
    e.status = evaluate_condition(*est, row.threshold);
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace lmr
