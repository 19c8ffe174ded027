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

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

#include "lmr/parallel.h"
#include "lmr/random.h"
#include "lmr/svd.h"

namespace lmr {
namespace {

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Replaces columns k.. of `full` (dim x r) by `tail` columns.
Matrix with_tail(const Matrix& full, std::size_t k, const Matrix& tail) {
  Matrix out = full;
  for (std::size_t j = 0; k + j < full.cols(); ++j) out.set_column(k + j, tail.column(j));
  return out;
}

Matrix projector_complement(const Matrix& q) {
  Matrix p = Matrix::identity(q.rows());
  p -= q * q.transpose();
  return p;
}

struct BlockEval {
  double residual = 0.0;
  Matrix x1;
  Matrix x2;
  Matrix x_s;
};

BlockEval evaluate_blocks(const Matrix& x, const FactorPair& pair, std::size_t s) {
  const std::size_t r = pair.u.cols();
  const Matrix core = pair.u.transpose() * x * pair.v;  // r x r
  BlockEval ev;
  ev.x1 = core.block(0, 0, s, s);
  ev.x2 = core.block(s, s, r - s, r - s);
  Matrix diag(r, r);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      if ((i < s) == (j < s)) diag(i, j) = core(i, j);
    }
  }
  ev.residual = frobenius_norm(x - pair.u * diag * pair.v.transpose());
  Matrix lead(r, r);
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < s; ++j) lead(i, j) = core(i, j);
  }
  ev.x_s = pair.u * lead * pair.v.transpose();
  return ev;
}

void check_trial_inputs(const LinearTransformation& op, const Matrix& w,
                        const RecoveryConfig& cfg) {
  if (w.rows() != op.m() || w.cols() != op.n()) {
    throw std::invalid_argument("recovery trial: W shape does not match the operator");
  }
  if (cfg.s < 1 || cfg.s > op.r()) {
    throw std::invalid_argument("recovery trial: s must lie in [1, r]");
  }
  if (!(cfg.success_tol > 0.0)) {
    throw std::invalid_argument("recovery trial: success_tol must be positive");
  }
}

TrialRecord score(const LinearTransformation& op, const Matrix& w, const NnmSolution& sol,
                  double eps, const RecoveryConfig& cfg) {
  TrialRecord rec;
  rec.op.m = op.m();
  rec.op.n = op.n();
  rec.op.p = op.p();
  rec.op.norm = std::string(to_string(op.norm()));
  rec.m = op.m();
  rec.n = op.n();
  rec.s = cfg.s;
  rec.w_singular_values = singular_values(w);
  rec.epsilon = eps;
  rec.theta = sol.residual;
  rec.upsilon = sol.upsilon_bound;
  rec.status = sol.status;
  rec.iterations = sol.iterations;
  const Matrix diff = sol.x - w;
  rec.recovery_error_nuclear = nuclear_norm(diff);
  const double wf = frobenius_norm(w);
  rec.recovery_error_rel_frobenius = wf > 0.0 ? frobenius_norm(diff) / wf : frobenius_norm(diff);
  rec.success = sol.status == SolveStatus::kConverged &&
                rec.recovery_error_rel_frobenius <= cfg.success_tol;
  if (wf > 0.0) {
    rec.certificate_valid = subgradient_certificate(op, w).valid;
    rec.block_assumption =
        block_assumption_check(sol.x, w, cfg.s, cfg.block_pairs).holds;
  }

  const std::optional<double> upsilon =
      sol.upsilon_bound ? sol.upsilon_bound : cfg.conservative_upsilon;
  if (cfg.goodness && rec.block_assumption && upsilon && cfg.goodness->gamma_hat < 0.5) {
    const Vector& sigma = rec.w_singular_values;
    double tail = 0.0;
    for (std::size_t i = cfg.s; i < sigma.size(); ++i) tail += sigma[i];
    const double u = std::max(0.0, cfg.goodness->gamma_hat);
    const double up = std::max(0.0, *upsilon);
    if (!std::isinf(cfg.goodness->beta)) {
      rec.bound_value = error_bound_noisy(u, cfg.goodness->beta, rec.theta, eps, tail, up);
    } else if (eps == 0.0) {
      rec.bound_value = error_bound_noiseless(u, up, tail);
    }
  }
  if (rec.bound_value) {
    rec.bound_respected = rec.recovery_error_nuclear <= *rec.bound_value + kBoundSlack;
  }
  return rec;
}

}  // namespace

BlockCheck block_assumption_check(const Matrix& x, const Matrix& w,
                                  std::optional<std::size_t> s_opt,
                                  std::size_t extra_pairs, std::uint64_t seed) {
  if (x.rows() != w.rows() || x.cols() != w.cols()) {
    throw std::invalid_argument("block_assumption_check: X and W shapes differ");
  }
  const SvdFactors f = svd(w);
  const std::size_t k = f.rank();
  if (k == 0) throw std::invalid_argument("block_assumption_check: W must be nonzero");
  const std::size_t r = f.sigma.size();
  const std::size_t s = s_opt.value_or(k);
  if (s > r) throw std::invalid_argument("block_assumption_check: s exceeds r");
  const std::size_t m = w.rows();
  const std::size_t n = w.cols();

  // Columns k.. of U and V are free in the SVD set of W (zero singular
  // values). The canonical completion uses the singular vectors of X
  // restricted to the complements, which diagonalizes that block.
  const Matrix uk = f.u.columns(0, k);
  const Matrix vk = f.v.columns(0, k);
  std::vector<FactorPair> pairs;
  {
    const Matrix xc = projector_complement(uk) * x * projector_complement(vk);
    const SvdFactors g = svd(xc);
    // Singular vectors of xc for zero singular values may point into the
    // span of U_k; re-orthogonalize against it.
    Matrix ut = g.u.columns(0, r - k);
    Matrix vt = g.v.columns(0, r - k);
    const Matrix uc = orthonormal_complement(uk);
    const Matrix vc = orthonormal_complement(vk);
    // Express in the complement bases and orthonormalize via SVD polar.
    const SvdFactors pu = svd(uc.transpose() * ut);
    const SvdFactors pv = svd(vc.transpose() * vt);
    ut = uc * (pu.u * pu.v.transpose());
    vt = vc * (pv.u * pv.v.transpose());
    pairs.push_back({with_tail(f.u, k, ut), with_tail(f.v, k, vt)});
  }
  Rng rng(seed);
  for (std::size_t e = 0; e < extra_pairs && k < r; ++e) {
    const Matrix uc = orthonormal_complement(uk);
    const Matrix vc = orthonormal_complement(vk);
    const Matrix ut = uc * random_orthonormal(rng, m - k, r - k);
    const Matrix vt = vc * random_orthonormal(rng, n - k, r - k);
    pairs.push_back({with_tail(f.u, k, ut), with_tail(f.v, k, vt)});
  }

  const double xf = frobenius_norm(x);
  const double tol = kBlockTolerance * xf;
  BlockCheck out;
  bool first = true;
  for (const FactorPair& pair : pairs) {
    BlockEval ev = evaluate_blocks(x, pair, s);
    if (first || ev.residual < out.relative_residual * xf) {
      out.relative_residual = xf > 0.0 ? ev.residual / xf : 0.0;
      out.x1 = std::move(ev.x1);
      out.x2 = std::move(ev.x2);
      out.x_s = std::move(ev.x_s);
      out.pair = pair;
      out.holds = ev.residual <= tol;
      first = false;
    }
    if (out.holds) break;
  }
  return out;
}

double error_bound_noiseless(double gamma_hat, double upsilon, double tail) {
  if (!(gamma_hat >= 0.0) || !(gamma_hat < 0.5)) {
    throw std::invalid_argument("error_bound_noiseless: need 0 <= gamma_hat < 1/2");
  }
  if (!(upsilon >= 0.0) || !(tail >= 0.0)) {
    throw std::invalid_argument("error_bound_noiseless: upsilon and tail must be >= 0");
  }
  return (upsilon + 2.0 * tail) / (1.0 - 2.0 * gamma_hat);
}

double error_bound_noisy(double gamma_hat, double beta, double theta, double eps,
                         double tail, double upsilon) {
  if (!(gamma_hat >= 0.0) || !(gamma_hat < 0.5)) {
    throw std::invalid_argument("error_bound_noisy: need 0 <= gamma_hat < 1/2");
  }
  if (!std::isfinite(beta) || beta < 0.0) {
    throw std::invalid_argument("error_bound_noisy: beta must be finite and >= 0");
  }
  if (!(theta >= 0.0) || !(eps >= 0.0) || !(tail >= 0.0) || !(upsilon >= 0.0)) {
    throw std::invalid_argument("error_bound_noisy: slacks must be >= 0");
  }
  return (2.0 * beta * (theta + eps) + 2.0 * tail + upsilon) / (1.0 - 2.0 * gamma_hat);
}

TrialRecord exact_recovery_trial(const LinearTransformation& op, const Matrix& w,
                                 const RecoveryConfig& cfg) {
  check_trial_inputs(op, w, cfg);
  const NnmSolution sol = solve_equality(NnmProblem{op, op.apply(w), 0.0}, cfg.solver);
  TrialRecord rec = score(op, w, sol, 0.0, cfg);
  rec.seed = cfg.solver.seed;
  return rec;
}

TrialRecord noisy_recovery_trial(const LinearTransformation& op, const Matrix& w,
                                 std::span<const double> noise, double eps,
                                 const RecoveryConfig& cfg) {
  check_trial_inputs(op, w, cfg);
  if (noise.size() != op.p()) {
    throw std::invalid_argument("noisy_recovery_trial: noise length must equal p");
  }
  if (!(eps >= 0.0) || measurement_norm(noise, op.norm()) > eps) {
    throw std::invalid_argument("noisy_recovery_trial: ||noise|| must not exceed eps");
  }
  Vector b = op.apply(w);
  for (std::size_t i = 0; i < b.size(); ++i) b[i] += noise[i];
  const NnmSolution sol = solve_noisy(NnmProblem{op, b, eps}, cfg.solver);
  TrialRecord rec = score(op, w, sol, eps, cfg);
  rec.seed = cfg.solver.seed;
  return rec;
}

PhaseGrid phase_grid(const PhaseGridConfig& cfg) {
  if (cfg.s_values.empty() || cfg.p_values.empty()) {
    throw std::invalid_argument("phase_grid: axes must be nonempty");
  }
  if (cfg.trials == 0) throw std::invalid_argument("phase_grid: trials must be >= 1");
  const std::size_t r = std::min(cfg.m, cfg.n);
  for (std::size_t s : cfg.s_values) {
    if (s < 1 || s > r) throw std::invalid_argument("phase_grid: s must lie in [1, r]");
  }
  PhaseGrid grid;
  grid.s_values = cfg.s_values;
  grid.p_values = cfg.p_values;
  grid.success_tol = cfg.success_tol;
  const std::size_t ncell = cfg.s_values.size() * cfg.p_values.size();
  grid.trials.resize(ncell * cfg.trials);
  parallel_for(grid.trials.size(), [&](std::size_t task) {
    const std::size_t cell = task / cfg.trials;
    const std::size_t trial = task % cfg.trials;
    const std::size_t s = cfg.s_values[cell / cfg.p_values.size()];
    const std::size_t p = cfg.p_values[cell % cfg.p_values.size()];
    const std::uint64_t trial_seed = derive_seed(cfg.seed, {cell, trial});
    const std::uint64_t op_seed = derive_seed(trial_seed, {0});
    const LinearTransformation op =
        LinearTransformation::gaussian(cfg.m, cfg.n, p, op_seed).with_norm(cfg.norm);
    const Matrix w = random_s_rank(cfg.m, cfg.n, s, derive_seed(trial_seed, {1}));
    RecoveryConfig rc;
    rc.s = s;
    rc.success_tol = cfg.success_tol;
    rc.solver = cfg.solver;
    rc.solver.seed = trial_seed;
    TrialRecord rec = exact_recovery_trial(op, w, rc);
    rec.seed = trial_seed;
    rec.op.kind = "gaussian";
    rec.op.seed = op_seed;
    grid.trials[task] = std::move(rec);
  });
  for (std::size_t cell = 0; cell < ncell; ++cell) {
    PhaseCell pc;
    pc.s = cfg.s_values[cell / cfg.p_values.size()];
    pc.p = cfg.p_values[cell % cfg.p_values.size()];
    pc.trials = cfg.trials;
    double err = 0.0;
    double its = 0.0;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      const TrialRecord& rec = grid.trials[cell * cfg.trials + t];
      pc.successes += rec.success ? 1 : 0;
      err += rec.recovery_error_rel_frobenius;
      its += static_cast<double>(rec.iterations);
    }
    pc.mean_rel_error = err / static_cast<double>(cfg.trials);
    pc.mean_iterations = its / static_cast<double>(cfg.trials);
    grid.cells.push_back(pc);
  }
  return grid;
}

void write_phase_csv(std::ostream& out, const PhaseGrid& grid) {
  out << "s,p,trials,successes,mean_rel_error,mean_iterations\n";
  for (const PhaseCell& c : grid.cells) {
    out << c.s << ',' << c.p << ',' << c.trials << ',' << c.successes << ','
        << shortest(c.mean_rel_error) << ',' << shortest(c.mean_iterations) << '\n';
  }
}

}  // namespace lmr
