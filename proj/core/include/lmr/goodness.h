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

#ifndef LMR_GOODNESS_H_
#define LMR_GOODNESS_H_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "lmr/linear_transformation.h"
#include "lmr/matrix.h"

namespace lmr {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class GNumberKind { kGamma, kGammaHat };
std::string_view to_string(GNumberKind kind);

struct GNumberQuery {
  std::size_t s = 1;
  double beta = kInfinity;  // positive, or kInfinity
  GNumberKind kind = GNumberKind::kGammaHat;
};

/// A G-number value together with the rescaled beta it refers to.
struct ConvertedGNumber {
  double value = 0.0;
  double beta = kInfinity;
};

/// gamma_s(A, beta) = g < 1  implies  gamma_hat_s(A, beta / (1 + g)) = g / (1 + g).
/// Throws std::invalid_argument unless 0 <= g < 1.
ConvertedGNumber gamma_hat_from_gamma(double gamma, double beta = kInfinity);

/// gamma_hat_s(A, beta) = g < 1/2  implies  gamma_s(A, beta / (1 - g)) = g / (1 - g).
/// Throws std::invalid_argument unless 0 <= g < 1/2.
ConvertedGNumber gamma_from_gamma_hat(double gamma_hat, double beta = kInfinity);

/// Orthonormal m x r and n x r factors (r = min(m, n)).
struct FactorPair {
  Matrix u;
  Matrix v;
};

struct LpBound {
  Vector x;            // x_t
  double bound = 0.0;  // sum of the s largest |x_t| (0 when rejected)
  bool accepted = true;
  double null_residual = 0.0;  // ||A(U Diag(x_t) V^T)||_2
};

/// Solves max <t, x> s.t. ||x||_1 <= 1, A_UV x = 0 on the restricted
/// representation and returns max over v in Delta_s of v^T x_t. The witness
/// U Diag(x_t) V^T is accepted only if its image under A has Euclidean norm
/// at most 1e-8. Throws std::invalid_argument if t is not in Delta_s or the
/// pair is not orthonormal.
LpBound lower_bound_lp(const LinearTransformation& op, std::size_t s,
                       const FactorPair& pair, std::span<const double> t);

/// Ascent iterate: the direction t_k and the lower bound obtained from it.
struct AscentStep {
  Vector t;
  double value = 0.0;
};

struct AscentRun {
  std::vector<AscentStep> steps;  // values nondecreasing
};

struct BoundTrace {
  std::vector<AscentRun> runs;
  std::size_t factor_pairs = 0;
  /// Wall-clock seconds per stage (lower, upper, rip). Informational only;
  /// never serialized, so outputs stay deterministic.
  std::vector<double> stage_seconds;
};

/// A null-space element attaining a lower bound, with its factor pair.
struct Witness {
  Matrix x;  // normalized to ||x||_* = 1
  FactorPair pair;
  double value = 0.0;  // ||x||_{s,*}
};

struct AscentResult {
  double best_bound = 0.0;
  BoundTrace trace;
  std::vector<Witness> witnesses;  // one per restart with positive bound
};

inline constexpr double kAscentTolerance = 1e-8;
inline constexpr std::size_t kAscentMaxIterations = 100;

/// Sequential LP ascent t_{k+1} = argmax_{v in Delta_s} v^T x_{t_k} from
/// random starting points t_1 and factor pairs of random null-space
/// elements; stops when the improvement drops below 1e-8 or after 100
/// iterations. Restart i draws from derive_seed(seed, {i}).
AscentResult lower_bound_ascent(const LinearTransformation& op, std::size_t s,
                                std::size_t restarts, std::uint64_t seed);

struct NullSpaceAscentResult {
  double bound = 0.0;
  std::optional<Witness> witness;
};

/// Lower bound on max ||X||_{s,*} over X in Null(A), ||X||_* = 1, from
/// random null-space starting points improved by projected gradient steps
/// on the ratio ||X||_{s,*} / ||X||_* alternated with LP ascent in the
/// factor frame of the current point. Only feasible points are evaluated.
NullSpaceAscentResult null_space_ascent(const LinearTransformation& op,
                                        std::size_t s, std::size_t samples,
                                        std::uint64_t seed);

/// Factor pairs of random null-space elements, with the columns belonging
/// to zero singular values replaced by a random orthonormal completion.
/// When the null space is trivial the pairs are random orthonormal frames.
std::vector<FactorPair> sample_factor_pairs(const LinearTransformation& op,
                                            std::size_t count, std::uint64_t seed);

/// max over the pair frames of Upsilon_i = max{x_i - beta ||A_UV x|| :
/// ||x||_1 <= 1}, i = 1..r, which equals min{||e_i - A_UV^T y||_inf :
/// ||y||_d <= beta}. With beta = infinity the penalty becomes A_UV x = 0.
/// Finite beta is solved through the dual form: a linear program for the
/// l1 and l-infinity norms, a log-barrier Newton method for l2 (accurate to
/// about 1e-9). Throws std::invalid_argument for empty pairs or beta < 0.
double upper_bound_gamma1(const LinearTransformation& op, double beta,
                          std::span<const FactorPair> pairs);

/// min(s * Gamma_1, Gamma_s) where Gamma_s per frame is
/// min_B max_i ||(I - B^T A_UV) e_i||_{s,1} s.t. ||B_{.j}||_d <= beta,
/// solved as a linear program (with cutting planes for a smooth dual norm;
/// the value returned is that of a feasible B). s = 1 returns
/// upper_bound_gamma1 exactly.
double upper_bound_gammas(const LinearTransformation& op, std::size_t s,
                          double beta, std::span<const FactorPair> pairs);

enum class Verdict { kSGood, kNotSGood, kInconclusive };
std::string_view to_string(Verdict verdict);

struct CertifyConfig {
  std::uint64_t seed = 0;
  std::size_t restarts = 8;
  std::size_t null_space_samples = 8;
  std::size_t factor_pairs = 32;
};

/// Upper bounds with provenance. Only the sound ones may yield S_GOOD.
struct UpperBounds {
  double sound = 1.0;       // min of the sound bounds below
  double trivial = 1.0;     // y = 0
  std::optional<double> injective;  // 0 when Null(A) = {0} and beta = inf
  std::optional<double> rip;        // restricted isometry bound at delta_r
  double sampled = kInfinity;       // sampled Gamma bound (not sound)
  /// s Gamma_1 from gamma1_bound_from_rip with t = r / s. Its derivation is
  /// not checked here, so it is reported but never used for the verdict.
  std::optional<double> rip_gamma1_asserted;
};

/// All upper bounds on gamma_hat_s(A, beta): the sound ones (trivial,
/// injective at beta = inf, restricted isometry with delta_r standing in
/// for delta_2s) and, when pairs are given, the sampled Gamma bound.
UpperBounds gamma_hat_upper_bounds(const LinearTransformation& op, std::size_t s,
                                   double beta, std::span<const FactorPair> pairs);

struct GoodnessCertificate {
  GNumberQuery query;
  double lower = 0.0;  // of the queried kind
  double upper = 1.0;  // min(sound, sampled), of the queried kind
  UpperBounds gamma_hat_upper;   // always in gamma-hat form
  double gamma_hat_lower = 0.0;  // null-space lower bound, beta = inf
  bool upper_sampled = false;    // the reported upper came from sampling
  Verdict verdict = Verdict::kInconclusive;
  BoundTrace trace;
};

/// Brackets the queried G-number and issues a verdict. Lower bounds are
/// computed at beta = infinity and are valid for every beta. NOT_S_GOOD
/// requires gamma_hat lower >= 1/2; S_GOOD requires a sound gamma_hat upper
/// < 1/2. Throws std::invalid_argument unless 1 <= s <= r and beta > 0.
GoodnessCertificate certify(const LinearTransformation& op, const GNumberQuery& query,
                            const CertifyConfig& config = {});

struct SStarEstimate {
  std::size_t s_lower = 0;
  std::size_t s_upper = 0;
};

/// Brackets the largest s for which A is s-good, using that the G-numbers
/// are nondecreasing in s.
SStarEstimate estimate_s_star(const LinearTransformation& op, double beta,
                              const CertifyConfig& config = {});

struct BetaSufficiency {
  double beta_min_gamma = 0.0;  // 1 / rho
  double beta_min_Gamma = 0.0;  // 3 / (2 rho)
  /// When requested: whether the l1 ball of radius rho was verified to lie
  /// in the image of the unit nuclear ball.
  std::optional<bool> inclusion_verified;
};

/// Beta thresholds above which gamma_s(A, beta) = gamma_s(A) (when
/// gamma_s(A) < 1) and Gamma_s(A, beta) = Gamma_s(A) (when Gamma_s(A) < 1/2),
/// given that {||x||_1 <= rho} lies in A({||X||_* <= 1}). With
/// verify_inclusion the hypothesis is checked by solving the nuclear-norm
/// programs for +-rho e_k. Throws std::invalid_argument for rho <= 0.
BetaSufficiency beta_sufficiency(const LinearTransformation& op, double rho,
                                 std::size_t s, bool verify_inclusion = false);

}  // namespace lmr

#endif  // LMR_GOODNESS_H_
