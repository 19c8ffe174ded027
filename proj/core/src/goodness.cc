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

#include "lmr/goodness.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

#include "lmr/lp.h"
#include "lmr/nnm.h"
#include "lmr/parallel.h"
#include "lmr/random.h"
#include "lmr/rip.h"
#include "lmr/svd.h"

namespace lmr {
namespace {

constexpr double kDeltaTol = 1e-12;
constexpr double kNullTol = 1e-8;
constexpr double kCutGap = 1e-10;
constexpr std::size_t kMaxCutRounds = 40;
constexpr std::size_t kGradientSteps = 20;
constexpr std::size_t kPolishRounds = 4;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_beta(double beta) {
  if (std::isnan(beta) || beta < 0.0) {
    throw std::invalid_argument("beta must be nonnegative or infinity");
  }
}

void check_in_delta(std::span<const double> t, std::size_t s) {
  if (norm_inf(t) > 1.0 + kDeltaTol || norm1(t) > static_cast<double>(s) + kDeltaTol) {
    throw std::invalid_argument("t is not in Delta_s = {||t||_1 <= s, ||t||_inf <= 1}");
  }
}

// z with z^T v = ||v|| (in `norm`) and dual_norm(z) <= 1.
Vector norm_subgradient(std::span<const double> v, MeasurementNorm norm) {
  Vector z(v.size(), 0.0);
  if (v.empty()) return z;
  switch (norm) {
    case MeasurementNorm::kL2: {
      const double nv = norm2(v);
      if (nv > 0.0) {
        for (std::size_t i = 0; i < v.size(); ++i) z[i] = v[i] / nv;
      }
      return z;
    }
    case MeasurementNorm::kL1:
      for (std::size_t i = 0; i < v.size(); ++i) z[i] = v[i] < 0.0 ? -1.0 : 1.0;
      return z;
    case MeasurementNorm::kLinf: {
      std::size_t k = 0;
      for (std::size_t i = 1; i < v.size(); ++i) {
        if (std::abs(v[i]) > std::abs(v[k])) k = i;
      }
      z[k] = v[k] < 0.0 ? -1.0 : 1.0;
      return z;
    }
  }
  return z;
}

Matrix diag_in_frame(const FactorPair& pair, std::span<const double> x) {
  Matrix ux = pair.u;
  for (std::size_t j = 0; j < x.size(); ++j) {
    for (std::size_t i = 0; i < ux.rows(); ++i) ux(i, j) *= x[j];
  }
  return ux * pair.v.transpose();
}

// Frame of X whose columns beyond the numerical rank are a random
// orthonormal completion (deterministic completion when rng is null).
FactorPair pair_from_matrix(const Matrix& x, Rng* rng) {
  const SvdFactors f = svd(x);
  const std::size_t r = f.sigma.size();
  const std::size_t k = f.rank();
  FactorPair pair{f.u, f.v};
  if (rng == nullptr || k == r) return pair;
  auto complete = [&](const Matrix& full, std::size_t dim) {
    const Matrix lead = full.columns(0, k);
    const Matrix comp = orthonormal_complement(lead);  // dim x (dim - k)
    const Matrix rot = random_orthonormal(*rng, dim - k, r - k);
    const Matrix tail = comp * rot;
    Matrix out = full;
    for (std::size_t j = 0; j < r - k; ++j) out.set_column(k + j, tail.column(j));
    return out;
  };
  pair.u = complete(f.u, x.rows());
  pair.v = complete(f.v, x.cols());
  return pair;
}

double ratio(const Matrix& x, std::size_t s) {
  const MatrixNorms nm = norms(x);
  if (nm.nuclear <= 0.0) return 0.0;
  return ky_fan_norm(x, s) / nm.nuclear;
}

// Solves h x = rhs by Gaussian elimination with partial pivoting.
Vector solve_dense(Matrix h, Vector rhs) {
  const std::size_t n = rhs.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(h(i, k)) > std::abs(h(piv, k))) piv = i;
    }
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(h(k, j), h(piv, j));
      std::swap(rhs[k], rhs[piv]);
    }
    const double d = h(k, k);
    if (d == 0.0) continue;
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = h(i, k) / d;
      if (f == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) h(i, j) -= f * h(k, j);
      rhs[i] -= f * rhs[k];
    }
  }
  Vector x(n, 0.0);
  for (std::size_t k = n; k-- > 0;) {
    double acc = rhs[k];
    for (std::size_t j = k + 1; j < n; ++j) acc -= h(k, j) * x[j];
    x[k] = h(k, k) == 0.0 ? 0.0 : acc / h(k, k);
  }
  return x;
}

// min_{||w||_2 <= beta} ||t - C w||_inf for C of full column rank, by a
// log-barrier method on (w, tau). The objective at the final strictly
// feasible iterate is returned; it exceeds the optimum by at most the
// barrier gap (2r + 1) mu < 1e-11.
double chebyshev_ball(const Matrix& c, std::span<const double> t, double beta) {
  const std::size_t r = c.rows();
  const std::size_t k = c.cols();
  const std::size_t dim = k + 1;
  const double ncons = static_cast<double>(2 * r + 1);
  Vector v(dim, 0.0);
  v[k] = norm_inf(t) + 1.0;
  Vector cw(r);
  auto residuals = [&](const Vector& x) {
    for (std::size_t j = 0; j < r; ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < k; ++i) acc += c(j, i) * x[i];
      cw[j] = acc;
    }
  };
  // tau - mu * (sum log slacks + log(beta^2 - |w|^2)); +inf when infeasible.
  auto barrier = [&](const Vector& x, double mu) {
    residuals(x);
    double logs = 0.0;
    for (std::size_t j = 0; j < r; ++j) {
      const double lo = x[k] - t[j] + cw[j];
      const double hi = x[k] + t[j] - cw[j];
      if (lo <= 0.0 || hi <= 0.0) return kInfinity;
      logs += std::log(lo) + std::log(hi);
    }
    double q = beta * beta;
    for (std::size_t i = 0; i < k; ++i) q -= x[i] * x[i];
    if (q <= 0.0) return kInfinity;
    return x[k] - mu * (logs + std::log(q));
  };

  for (double mu = 1.0; ncons * mu >= 1e-11 / 10.0; mu *= 0.1) {
    for (int it = 0; it < 100; ++it) {
      residuals(v);
      Vector grad(dim, 0.0);
      Matrix h(dim, dim);
      grad[k] = 1.0;
      for (std::size_t j = 0; j < r; ++j) {
        for (double sign : {1.0, -1.0}) {
          // slack = tau + sign * (c_j w - t_j), gradient a = (sign c_j, 1)
          const double g = v[k] + sign * (cw[j] - t[j]);
          Vector a(dim);
          for (std::size_t i = 0; i < k; ++i) a[i] = sign * c(j, i);
          a[k] = 1.0;
          for (std::size_t i = 0; i < dim; ++i) {
            grad[i] -= mu * a[i] / g;
            for (std::size_t l = 0; l < dim; ++l) h(i, l) += mu * a[i] * a[l] / (g * g);
          }
        }
      }
      double q = beta * beta;
      for (std::size_t i = 0; i < k; ++i) q -= v[i] * v[i];
      for (std::size_t i = 0; i < k; ++i) {
        grad[i] += mu * 2.0 * v[i] / q;
        for (std::size_t l = 0; l < k; ++l) h(i, l) += mu * 4.0 * v[i] * v[l] / (q * q);
        h(i, i) += mu * 2.0 / q;
      }
      Vector neg(dim);
      for (std::size_t i = 0; i < dim; ++i) neg[i] = -grad[i];
      const Vector dx = solve_dense(h, neg);
      const double decrement = -dot(grad, dx);
      if (!(decrement > 2e-15)) break;
      const double f0 = barrier(v, mu);
      double step = 1.0;
      bool moved = false;
      for (int ls = 0; ls < 60; ++ls, step *= 0.5) {
        Vector trial(dim);
        for (std::size_t i = 0; i < dim; ++i) trial[i] = v[i] + step * dx[i];
        if (barrier(trial, mu) <= f0 - 0.25 * step * decrement) {
          v = std::move(trial);
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }
  }
  residuals(v);
  double worst = 0.0;
  for (std::size_t j = 0; j < r; ++j) worst = std::max(worst, std::abs(t[j] - cw[j]));
  return worst;
}

// Upsilon = max_{||x||_1 <= 1} t^T x - beta ||a x|| = min{||t - a^T y||_inf :
// ||y||_d <= beta}; beta = inf means a x = 0. Polyhedral dual norms give an
// exact linear program; the l2 case is reduced to the range of a and
// solved by chebyshev_ball, whose value is never below the optimum.
double penalized_section(const Matrix& a, std::span<const double> t, double beta,
                         MeasurementNorm norm) {
  const std::size_t r = t.size();
  const std::size_t p = a.rows();
  if (std::isinf(beta)) return lp_solve_l1_section(t, a).value;
  if (p == 0 || beta == 0.0) return norm_inf(t);

  if (norm == MeasurementNorm::kL2) {
    // a^T y = V Sigma (U^T y); only the range part w = U_k^T y matters and
    // y = U_k w has the same norm.
    const SvdFactors f = svd(a);
    const std::size_t k = f.rank();
    if (k == 0) return norm_inf(t);
    Matrix c(r, k);
    for (std::size_t j = 0; j < r; ++j) {
      for (std::size_t i = 0; i < k; ++i) c(j, i) = f.v(j, i) * f.sigma[i];
    }
    return chebyshev_ball(c, t, beta);
  }

  // Variables (y, tau): minimize tau s.t. |t_j - (a^T y)_j| <= tau and the
  // dual-norm ball, a box for l1 and an l1 ball for l_inf.
  LpProblem lp;
  lp.objective.assign(p + 1, 0.0);
  lp.objective[p] = -1.0;
  lp.nonnegative.assign(p + 1, false);
  lp.nonnegative[p] = true;
  std::vector<Vector> rows;
  Vector rhs;
  for (std::size_t j = 0; j < r; ++j) {
    for (double sign : {1.0, -1.0}) {
      Vector row(p + 1, 0.0);
      for (std::size_t k = 0; k < p; ++k) row[k] = -sign * a(k, j);
      row[p] = -1.0;
      rows.push_back(std::move(row));
      rhs.push_back(-sign * t[j]);
    }
  }
  if (norm == MeasurementNorm::kL1) {
    for (std::size_t k = 0; k < p; ++k) {
      for (double sign : {1.0, -1.0}) {
        Vector row(p + 1, 0.0);
        row[k] = sign;
        rows.push_back(std::move(row));
        rhs.push_back(beta);
      }
    }
  } else {
    lp.l1_radius = beta;
    lp.l1_count = p;
  }
  lp.inequality = Matrix::from_rows(rows);
  lp.inequality_rhs = rhs;
  const LpResult res = lp_solve(lp);
  if (res.status != LpStatus::kOptimal) {
    throw std::logic_error("penalized_section: simplex returned " +
                           std::string(to_string(res.status)));
  }
  return -res.value;
}

// max_i ||(I - B^T a) e_i||_{s,1}, B stored p x r.
double gammas_objective(const Matrix& a, const Matrix& b, std::size_t s) {
  const std::size_t r = a.cols();
  const std::size_t p = a.rows();
  double worst = 0.0;
  Vector col(r);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < p; ++k) acc += b(k, j) * a(k, i);
      col[j] = (i == j ? 1.0 : 0.0) - acc;
    }
    worst = std::max(worst, s_largest_abs_sum(col, s));
  }
  return worst;
}

// min_B max_i ||(I - B^T a) e_i||_{s,1} s.t. ||B_{.j}||_d <= beta, as an LP
// in (B, lambda, tau, mu) with ||v||_{s,1} = min{s tau + sum mu : |v_j| <=
// tau + mu_j, tau, mu >= 0}. Returns the objective of a feasible B.
double direct_gammas(const Matrix& a, std::size_t s, double beta,
                     MeasurementNorm norm) {
  const std::size_t p = a.rows();
  const std::size_t r = a.cols();
  if (p == 0) return 1.0;
  const std::size_t nb = p * r;
  const std::size_t lambda = nb;
  const std::size_t tau0 = nb + 1;
  const std::size_t mu0 = tau0 + r;
  const std::size_t nvar = mu0 + r * r;
  auto bvar = [r](std::size_t k, std::size_t j) { return k * r + j; };

  LpProblem lp;
  lp.objective.assign(nvar, 0.0);
  lp.objective[lambda] = -1.0;
  lp.nonnegative.assign(nvar, false);
  for (std::size_t v = tau0; v < nvar; ++v) lp.nonnegative[v] = true;

  std::vector<Vector> rows;
  Vector rhs;
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      const double d = i == j ? 1.0 : 0.0;
      for (double sign : {1.0, -1.0}) {
        // sign * (d - sum_k B_kj a_ki) <= tau_i + mu_ij
        Vector row(nvar, 0.0);
        for (std::size_t k = 0; k < p; ++k) row[bvar(k, j)] = -sign * a(k, i);
        row[tau0 + i] = -1.0;
        row[mu0 + i * r + j] = -1.0;
        rows.push_back(std::move(row));
        rhs.push_back(-sign * d);
      }
    }
    Vector row(nvar, 0.0);
    row[tau0 + i] = static_cast<double>(s);
    for (std::size_t j = 0; j < r; ++j) row[mu0 + i * r + j] = 1.0;
    row[lambda] = -1.0;
    rows.push_back(std::move(row));
    rhs.push_back(0.0);
  }
  const bool bounded_b = !std::isinf(beta);
  if (bounded_b) {
    for (std::size_t j = 0; j < r; ++j) {
      for (std::size_t k = 0; k < p; ++k) {
        for (double sign : {1.0, -1.0}) {
          Vector row(nvar, 0.0);
          row[bvar(k, j)] = sign;
          rows.push_back(std::move(row));
          rhs.push_back(beta);
        }
      }
    }
  }

  double best = kInfinity;
  const MeasurementNorm dual = dual_of(norm);
  for (std::size_t round = 0; round < kMaxCutRounds; ++round) {
    lp.inequality = Matrix::from_rows(rows);
    lp.inequality_rhs = rhs;
    const LpResult res = lp_solve(lp);
    if (res.status != LpStatus::kOptimal) {
      throw std::logic_error("direct_gammas: simplex returned " +
                             std::string(to_string(res.status)));
    }
    Matrix b(p, r);
    for (std::size_t k = 0; k < p; ++k) {
      for (std::size_t j = 0; j < r; ++j) b(k, j) = res.x[bvar(k, j)];
    }
    if (!bounded_b) return gammas_objective(a, b, s);
    const double relaxed = -res.value;
    bool added = false;
    for (std::size_t j = 0; j < r; ++j) {
      const Vector col = b.column(j);
      const double nd = measurement_norm(col, dual);
      if (nd > beta) {
        for (std::size_t k = 0; k < p; ++k) b(k, j) *= beta / nd;
        if (nd > beta * (1.0 + 1e-12)) {
          const Vector z = norm_subgradient(col, dual);
          Vector row(nvar, 0.0);
          for (std::size_t k = 0; k < p; ++k) row[bvar(k, j)] = z[k];
          rows.push_back(std::move(row));
          rhs.push_back(beta);
          added = true;
        }
      }
    }
    best = std::min(best, gammas_objective(a, b, s));
    if (!added || best - relaxed <= kCutGap) break;
  }
  return best;
}

Vector sign_pattern(std::span<const double> x, std::size_t s) {
  Vector t(x.size(), 0.0);
  for (std::size_t i : s_largest_abs_indices(x, s)) t[i] = x[i] < 0.0 ? -1.0 : 1.0;
  return t;
}

struct FrameAscent {
  AscentRun run;
  Vector x;  // best x_t
  double bound = 0.0;
};

// LP ascent within one frame starting from t.
FrameAscent ascend_in_frame(const LinearTransformation& op, std::size_t s,
                            const FactorPair& pair, Vector t) {
  FrameAscent out;
  double prev = -1.0;
  for (std::size_t k = 0; k < kAscentMaxIterations; ++k) {
    const LpBound lb = lower_bound_lp(op, s, pair, t);
    if (!lb.accepted) break;
    const double value = lb.bound;
    out.run.steps.push_back(AscentStep{t, value});
    if (value > out.bound || out.x.empty()) {
      out.bound = std::max(out.bound, value);
      out.x = lb.x;
    }
    if (k > 0 && value - prev < kAscentTolerance) break;
    prev = value;
    t = sign_pattern(lb.x, s);
  }
  return out;
}

std::optional<Witness> make_witness(const FactorPair& pair, std::span<const double> x,
                                    std::size_t s) {
  const double l1 = norm1(x);
  if (l1 <= 0.0) return std::nullopt;
  Vector xn(x.begin(), x.end());
  for (double& v : xn) v /= l1;
  Witness w;
  w.x = diag_in_frame(pair, xn);
  w.pair = pair;
  w.value = ratio(w.x, s);
  return w;
}

}  // namespace

std::string_view to_string(GNumberKind kind) {
  return kind == GNumberKind::kGamma ? "gamma" : "gamma_hat";
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::kSGood:
      return "S_GOOD";
    case Verdict::kNotSGood:
      return "NOT_S_GOOD";
    case Verdict::kInconclusive:
      return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

ConvertedGNumber gamma_hat_from_gamma(double gamma, double beta) {
  if (!(gamma >= 0.0) || !(gamma < 1.0)) {
    throw std::invalid_argument("gamma_hat_from_gamma: need 0 <= gamma < 1");
  }
  return {gamma / (1.0 + gamma), std::isinf(beta) ? beta : beta / (1.0 + gamma)};
}

ConvertedGNumber gamma_from_gamma_hat(double gamma_hat, double beta) {
  if (!(gamma_hat >= 0.0) || !(gamma_hat < 0.5)) {
    throw std::invalid_argument("gamma_from_gamma_hat: need 0 <= gamma_hat < 1/2");
  }
  return {gamma_hat / (1.0 - gamma_hat),
          std::isinf(beta) ? beta : beta / (1.0 - gamma_hat)};
}

LpBound lower_bound_lp(const LinearTransformation& op, std::size_t s,
                       const FactorPair& pair, std::span<const double> t) {
  const std::size_t r = op.r();
  if (s < 1 || s > r) throw std::invalid_argument("lower_bound_lp: s must lie in [1, r]");
  if (t.size() != r) throw std::invalid_argument("lower_bound_lp: t must have length r");
  check_in_delta(t, s);
  const RestrictedRepresentation rr = restrict_to_pair(op, pair.u, pair.v);
  LpBound out;
  out.x = lp_solve_l1_section(t, rr.a).x;
  out.null_residual = norm2(op.apply(diag_in_frame(pair, out.x)));
  out.accepted = out.null_residual <= kNullTol;
  out.bound = out.accepted ? s_largest_abs_sum(out.x, s) : 0.0;
  return out;
}

AscentResult lower_bound_ascent(const LinearTransformation& op, std::size_t s,
                                std::size_t restarts, std::uint64_t seed) {
  const std::size_t r = op.r();
  if (s < 1 || s > r) throw std::invalid_argument("lower_bound_ascent: s must lie in [1, r]");
  if (restarts == 0) throw std::invalid_argument("lower_bound_ascent: restarts must be >= 1");
  AscentResult out;
  const NullSpaceBasis ns = null_space_basis(op);
  if (ns.dim == 0) return out;

  std::vector<FrameAscent> runs(restarts);
  std::vector<FactorPair> pairs(restarts);
  parallel_for(restarts, [&](std::size_t i) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(i)}));
    const Matrix x = ns.combine(rng.gaussian_vector(ns.dim), op.m(), op.n());
    pairs[i] = pair_from_matrix(x, &rng);
    Vector t = random_in_delta(rng, r, static_cast<double>(s));
    runs[i] = ascend_in_frame(op, s, pairs[i], std::move(t));
  });
  for (std::size_t i = 0; i < restarts; ++i) {
    out.best_bound = std::max(out.best_bound, runs[i].bound);
    if (runs[i].bound > 0.0) {
      if (auto w = make_witness(pairs[i], runs[i].x, s)) out.witnesses.push_back(*w);
    }
    out.trace.runs.push_back(std::move(runs[i].run));
  }
  out.trace.factor_pairs = restarts;
  return out;
}

NullSpaceAscentResult null_space_ascent(const LinearTransformation& op,
                                        std::size_t s, std::size_t samples,
                                        std::uint64_t seed) {
  const std::size_t r = op.r();
  if (s < 1 || s > r) throw std::invalid_argument("null_space_ascent: s must lie in [1, r]");
  NullSpaceAscentResult out;
  const NullSpaceBasis ns = null_space_basis(op);
  if (ns.dim == 0 || samples == 0) return out;
  const std::size_t m = op.m();
  const std::size_t n = op.n();

  auto coords = [&](const Matrix& x) {
    Vector c(ns.dim);
    for (std::size_t k = 0; k < ns.dim; ++k) c[k] = inner(ns.basis[k], x);
    const double nc = norm2(c);
    if (nc > 0.0) {
      for (double& v : c) v /= nc;
    }
    return c;
  };
  // Gradient of ||X||_{s,*} / ||X||_* in null-space coordinates.
  auto gradient = [&](const Matrix& x) {
    const SvdFactors f = svd(x);
    const std::size_t rank = f.rank();
    double ks = 0.0;
    double nuc = 0.0;
    for (std::size_t j = 0; j < f.sigma.size(); ++j) {
      nuc += f.sigma[j];
      if (j < s) ks += f.sigma[j];
    }
    Matrix g(m, n);
    for (std::size_t j = 0; j < rank; ++j) {
      const double w = ((j < s ? nuc : 0.0) - ks) / (nuc * nuc);
      for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < n; ++b) g(a, b) += w * f.u(a, j) * f.v(b, j);
      }
    }
    Vector gc(ns.dim);
    for (std::size_t k = 0; k < ns.dim; ++k) gc[k] = inner(ns.basis[k], g);
    return gc;
  };

  std::vector<double> best(samples, 0.0);
  std::vector<Vector> best_c(samples);
  parallel_for(samples, [&](std::size_t i) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(i)}));
    Vector c = rng.gaussian_vector(ns.dim);
    const double nc = norm2(c);
    for (double& v : c) v /= nc;
    Matrix x = ns.combine(c, m, n);
    double value = ratio(x, s);
    for (std::size_t round = 0; round < kPolishRounds; ++round) {
      for (std::size_t step = 0; step < kGradientSteps; ++step) {
        const Vector g = gradient(x);
        const double ng = norm2(g);
        if (ng < 1e-14) break;
        bool improved = false;
        for (double eta = 0.5; eta > 1e-8; eta *= 0.5) {
          Vector trial(ns.dim);
          for (std::size_t k = 0; k < ns.dim; ++k) trial[k] = c[k] + eta * g[k] / ng;
          const double nt = norm2(trial);
          for (double& v : trial) v /= nt;
          const Matrix xt = ns.combine(trial, m, n);
          const double vt = ratio(xt, s);
          if (vt > value) {
            c = std::move(trial);
            x = xt;
            value = vt;
            improved = true;
            break;
          }
        }
        if (!improved) break;
      }
      // LP ascent in the frame of the current point, starting from the
      // indicator of its s leading singular directions.
      const FactorPair pair = pair_from_matrix(x, nullptr);
      Vector t(r, 0.0);
      for (std::size_t j = 0; j < s; ++j) t[j] = 1.0;
      const FrameAscent fa = ascend_in_frame(op, s, pair, std::move(t));
      if (!fa.x.empty() && norm1(fa.x) > 0.0) {
        const Vector cand_c = coords(diag_in_frame(pair, fa.x));
        const Matrix cand = ns.combine(cand_c, m, n);
        const double vc = ratio(cand, s);
        if (vc > value) {
          c = cand_c;
          x = cand;
          value = vc;
        }
      }
    }
    best[i] = value;
    best_c[i] = std::move(c);
  });
  std::size_t arg = 0;
  for (std::size_t i = 1; i < samples; ++i) {
    if (best[i] > best[arg]) arg = i;
  }
  out.bound = best[arg];
  if (out.bound > 0.0) {
    Matrix x = ns.combine(best_c[arg], m, n);
    x *= 1.0 / nuclear_norm(x);
    Witness w;
    w.pair = pair_from_matrix(x, nullptr);
    w.x = std::move(x);
    w.value = out.bound;
    out.witness = std::move(w);
  }
  return out;
}

std::vector<FactorPair> sample_factor_pairs(const LinearTransformation& op,
                                            std::size_t count, std::uint64_t seed) {
  const NullSpaceBasis ns = null_space_basis(op);
  std::vector<FactorPair> pairs(count);
  parallel_for(count, [&](std::size_t i) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(i)}));
    if (ns.dim > 0) {
      const Matrix x = ns.combine(rng.gaussian_vector(ns.dim), op.m(), op.n());
      pairs[i] = pair_from_matrix(x, &rng);
    } else {
      pairs[i].u = random_orthonormal(rng, op.m(), op.r());
      pairs[i].v = random_orthonormal(rng, op.n(), op.r());
    }
  });
  return pairs;
}

double upper_bound_gamma1(const LinearTransformation& op, double beta,
                          std::span<const FactorPair> pairs) {
  check_beta(beta);
  if (pairs.empty()) throw std::invalid_argument("upper_bound_gamma1: no factor pairs");
  const std::size_t r = op.r();
  Vector per_pair(pairs.size(), 0.0);
  parallel_for(pairs.size(), [&](std::size_t q) {
    const Matrix a = restrict_to_pair(op, pairs[q].u, pairs[q].v).a;
    double worst = 0.0;
    for (std::size_t i = 0; i < r; ++i) {
      Vector e(r, 0.0);
      e[i] = 1.0;
      worst = std::max(worst, penalized_section(a, e, beta, op.norm()));
    }
    per_pair[q] = worst;
  });
  return *std::max_element(per_pair.begin(), per_pair.end());
}

double upper_bound_gammas(const LinearTransformation& op, std::size_t s,
                          double beta, std::span<const FactorPair> pairs) {
  if (s < 1 || s > op.r()) throw std::invalid_argument("upper_bound_gammas: s must lie in [1, r]");
  const double g1 = upper_bound_gamma1(op, beta, pairs);
  if (s == 1) return g1;
  Vector per_pair(pairs.size(), 0.0);
  parallel_for(pairs.size(), [&](std::size_t q) {
    const Matrix a = restrict_to_pair(op, pairs[q].u, pairs[q].v).a;
    per_pair[q] = direct_gammas(a, s, beta, op.norm());
  });
  const double direct = *std::max_element(per_pair.begin(), per_pair.end());
  return std::min(static_cast<double>(s) * g1, direct);
}

namespace {

// Sound restricted-isometry upper bound on gamma_hat_s(A, beta), or nullopt.
// delta_r bounds delta_2s from above. gamma_hat_s(A, beta) equals
// gamma_hat_s(cA, beta / c), so rescalings c are scanned.
std::optional<double> rip_gamma_hat_bound(const LinearTransformation& op, std::size_t s,
                                          double beta) {
  if (!std::isinf(beta) && op.norm() != MeasurementNorm::kL2) return std::nullopt;
  const RepresentationSpectrum sp = representation_spectrum(op);
  const double hi = sp.sigma_max * sp.sigma_max;
  const double lo = sp.sigma_min * sp.sigma_min;
  if (hi == 0.0) return std::nullopt;
  std::optional<double> best;
  auto consider = [&](double c2) {
    const double delta = std::max(c2 * hi - 1.0, 1.0 - c2 * lo);
    if (delta < 0.0) return;
    const RipGoodnessBound g = goodness_from_rip(delta, s);
    if (!g.certifying) return;
    if (!std::isinf(beta) && beta / std::sqrt(c2) < g.beta_min) return;
    if (!best || g.gamma_hat_bound < *best) best = g.gamma_hat_bound;
  };
  const double c_opt = 2.0 / (hi + lo);
  if (std::isinf(beta)) {
    consider(c_opt);
  } else {
    consider(1.0);
    constexpr int kGrid = 64;
    const double lo_c = std::min(1.0, c_opt);
    const double hi_c = std::max(1.0, c_opt);
    for (int g = 0; g <= kGrid; ++g) {
      consider(lo_c * std::pow(hi_c / lo_c, static_cast<double>(g) / kGrid));
    }
  }
  return best;
}

double to_gamma(double gamma_hat) {
  return gamma_hat < 0.5 ? gamma_hat / (1.0 - gamma_hat) : kInfinity;
}

}  // namespace

UpperBounds gamma_hat_upper_bounds(const LinearTransformation& op, std::size_t s,
                                   double beta, std::span<const FactorPair> pairs) {
  const std::size_t r = op.r();
  if (s < 1 || s > r) throw std::invalid_argument("gamma_hat_upper_bounds: s must lie in [1, r]");
  check_beta(beta);
  UpperBounds ub;
  if (!pairs.empty()) ub.sampled = upper_bound_gammas(op, s, beta, pairs);
  ub.trivial = 1.0;
  ub.sound = ub.trivial;
  if (std::isinf(beta) && null_space_basis(op).dim == 0) {
    ub.injective = 0.0;
    ub.sound = 0.0;
  }
  ub.rip = rip_gamma_hat_bound(op, s, beta);
  if (ub.rip) ub.sound = std::min(ub.sound, *ub.rip);
  if (r > 1 && std::isinf(beta)) {
    const double delta = rip_full_rank_rescaled(op);
    if (delta < 1.0) {
      const Gamma1RipBound g1 =
          gamma1_bound_from_rip(delta, static_cast<double>(r) / static_cast<double>(s), s);
      ub.rip_gamma1_asserted = static_cast<double>(s) * g1.gamma1_bound;
    }
  }
  return ub;
}

GoodnessCertificate certify(const LinearTransformation& op, const GNumberQuery& query,
                            const CertifyConfig& config) {
  const std::size_t s = query.s;
  const std::size_t r = op.r();
  if (s < 1 || s > r) throw std::invalid_argument("certify: s must lie in [1, r]");
  if (std::isnan(query.beta) || query.beta <= 0.0) {
    throw std::invalid_argument("certify: beta must be positive or infinity");
  }
  const double beta = query.beta;
  GoodnessCertificate cert;
  cert.query = query;

  // Lower bounds, beta = infinity: witnesses from every order s' <= s,
  // evaluated at s, so the bound is nondecreasing in s.
  auto t0 = Clock::now();
  std::vector<Witness> witnesses;
  for (std::size_t sp = 1; sp <= s; ++sp) {
    AscentResult asc = lower_bound_ascent(op, sp, config.restarts,
                                          derive_seed(config.seed, {1, sp}));
    for (Witness& w : asc.witnesses) witnesses.push_back(std::move(w));
    if (sp == s) cert.trace.runs = std::move(asc.trace.runs);
    NullSpaceAscentResult nsa = null_space_ascent(op, sp, config.null_space_samples,
                                                  derive_seed(config.seed, {2, sp}));
    if (nsa.witness) witnesses.push_back(std::move(*nsa.witness));
  }
  double lower = 0.0;
  for (const Witness& w : witnesses) lower = std::max(lower, ratio(w.x, s));
  cert.gamma_hat_lower = lower;
  cert.trace.stage_seconds.push_back(seconds_since(t0));

  // Sampled Gamma bound over random frames plus every witness frame.
  t0 = Clock::now();
  std::vector<FactorPair> pairs =
      sample_factor_pairs(op, config.factor_pairs, derive_seed(config.seed, {3}));
  for (const Witness& w : witnesses) pairs.push_back(w.pair);
  cert.trace.factor_pairs = pairs.size();
  cert.gamma_hat_upper = gamma_hat_upper_bounds(op, s, beta, pairs);
  const UpperBounds& ub = cert.gamma_hat_upper;
  cert.trace.stage_seconds.push_back(seconds_since(t0));

  // Witness ratios come from an SVD and may exceed an exactly attained
  // upper bound by round-off.
  const double best_upper = std::min(ub.sound, ub.sampled);
  if (lower > best_upper && lower - best_upper <= 1e-9) lower = best_upper;
  cert.gamma_hat_lower = lower;

  if (query.kind == GNumberKind::kGammaHat) {
    cert.lower = lower;
    cert.upper = std::min(ub.sound, ub.sampled);
    cert.upper_sampled = ub.sampled < ub.sound;
    if (ub.sound < 0.5) {
      cert.verdict = Verdict::kSGood;
    } else if (lower >= 0.5) {
      cert.verdict = Verdict::kNotSGood;
    }
    return cert;
  }

  // gamma form. With beta = inf the map g -> g / (1 - g) transfers bounds.
  // For finite beta, gamma_s(A, beta) <= u / (1 - u) needs
  // gamma_hat_s(A, beta (1 - u)) <= u, which is re-derived from the
  // restricted isometry bound; sampled and trivial bounds give nothing.
  cert.lower = lower < 0.5 ? lower / (1.0 - lower) : 1.0;
  double sound = kInfinity;
  double sampled = kInfinity;
  if (std::isinf(beta)) {
    sound = to_gamma(ub.sound);
    sampled = to_gamma(ub.sampled);
  } else if (ub.rip) {
    double u = *ub.rip;
    for (int it = 0; it < 50; ++it) {
      const std::optional<double> next = rip_gamma_hat_bound(op, s, beta * (1.0 - u));
      if (!next || *next > u) {
        u = kInfinity;
        break;
      }
      if (*next == u) break;
      u = *next;
    }
    if (!std::isinf(u)) sound = to_gamma(u);
  }
  cert.upper = std::min(sound, sampled);
  cert.upper_sampled = sampled < sound;
  if (sound < 1.0) {
    cert.verdict = Verdict::kSGood;
  } else if (cert.lower >= 1.0) {
    cert.verdict = Verdict::kNotSGood;
  }
  return cert;
}

SStarEstimate estimate_s_star(const LinearTransformation& op, double beta,
                              const CertifyConfig& config) {
  SStarEstimate out;
  out.s_upper = op.r();
  for (std::size_t s = 1; s <= op.r(); ++s) {
    const GoodnessCertificate cert = certify(op, {s, beta, GNumberKind::kGammaHat}, config);
    if (cert.verdict == Verdict::kSGood) out.s_lower = s;
    if (cert.verdict == Verdict::kNotSGood) {
      out.s_upper = s - 1;
      break;
    }
  }
  out.s_lower = std::min(out.s_lower, out.s_upper);
  return out;
}

BetaSufficiency beta_sufficiency(const LinearTransformation& op, double rho,
                                 std::size_t s, bool verify_inclusion) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw std::invalid_argument("beta_sufficiency: rho must be positive and finite");
  }
  if (s > op.r()) throw std::invalid_argument("beta_sufficiency: s exceeds r");
  BetaSufficiency out;
  out.beta_min_gamma = 1.0 / rho;
  out.beta_min_Gamma = 3.0 / (2.0 * rho);
  if (verify_inclusion) {
    // The image of the nuclear ball is convex and symmetric, so it contains
    // the l1 ball of radius rho iff it contains each rho e_k, i.e.
    // rho * min{||X||_* : A X = e_k} <= 1.
    bool ok = op.p() > 0;
    for (std::size_t k = 0; ok && k < op.p(); ++k) {
      Vector e(op.p(), 0.0);
      e[k] = 1.0;
      const NnmSolution sol = solve_equality(NnmProblem{op, e, 0.0});
      ok = sol.status != SolveStatus::kInfeasible && rho * sol.objective <= 1.0;
    }
    out.inclusion_verified = ok;
  }
  return out;
}

}  // namespace lmr
