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

#include "lmr/nnm.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include "lmr/svd.h"

namespace lmr {
namespace {

constexpr double kCertificateTol = 1e-8;

// Thin factorization M = Uk Diag(sk) Vk^T of the p x mn representation,
// truncated at the numerical rank.
struct RangeFactors {
  Matrix m;   // p x mn
  Matrix uk;  // p x k
  Vector sk;
  Matrix vk;  // mn x k

  explicit RangeFactors(const LinearTransformation& op)
      : m(op.matrix_representation()) {
    if (op.p() == 0) {
      uk = Matrix(0, 0);
      vk = Matrix(op.m() * op.n(), 0);
      return;
    }
    const SvdFactors f = svd(m);
    const std::size_t k = f.rank();
    uk = f.u.columns(0, k);
    vk = f.v.columns(0, k);
    sk.assign(f.sigma.begin(), f.sigma.begin() + static_cast<long>(k));
  }

  std::size_t rank() const { return sk.size(); }

  Vector apply(std::span<const double> x) const {
    return m.rows() == 0 ? Vector{} : m * x;
  }

  Vector apply_transpose(std::span<const double> y) const {
    Vector out(m.cols(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (y[i] == 0.0) continue;
      auto row = m.row(i);
      for (std::size_t j = 0; j < out.size(); ++j) out[j] += y[i] * row[j];
    }
    return out;
  }

  // Vk^T z
  Vector vk_t(std::span<const double> z) const {
    Vector c(rank(), 0.0);
    for (std::size_t j = 0; j < vk.rows(); ++j) {
      for (std::size_t l = 0; l < c.size(); ++l) c[l] += vk(j, l) * z[j];
    }
    return c;
  }

  Vector vk_times(std::span<const double> c) const {
    Vector out(vk.rows(), 0.0);
    for (std::size_t j = 0; j < vk.rows(); ++j) {
      for (std::size_t l = 0; l < c.size(); ++l) out[j] += vk(j, l) * c[l];
    }
    return out;
  }

  Vector uk_t(std::span<const double> y) const {
    Vector c(rank(), 0.0);
    for (std::size_t i = 0; i < uk.rows(); ++i) {
      for (std::size_t l = 0; l < c.size(); ++l) c[l] += uk(i, l) * y[i];
    }
    return c;
  }

  Vector uk_times(std::span<const double> c) const {
    Vector out(uk.rows(), 0.0);
    for (std::size_t i = 0; i < uk.rows(); ++i) {
      for (std::size_t l = 0; l < c.size(); ++l) out[i] += uk(i, l) * c[l];
    }
    return out;
  }

  // M^+ y
  Vector pinv(std::span<const double> y) const {
    Vector c = uk_t(y);
    for (std::size_t l = 0; l < c.size(); ++l) c[l] /= sk[l];
    return vk_times(c);
  }

  // (M^+)^T z, the least-squares solution of M^T y = z.
  Vector pinv_t(std::span<const double> z) const {
    Vector c = vk_t(z);
    for (std::size_t l = 0; l < c.size(); ++l) c[l] /= sk[l];
    return uk_times(c);
  }

  // Distance from y to range(M), Euclidean.
  double range_residual(std::span<const double> y) const {
    const Vector proj = uk_times(uk_t(y));
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += (y[i] - proj[i]) * (y[i] - proj[i]);
    return std::sqrt(s);
  }
};

Vector sub(std::span<const double> a, std::span<const double> b) {
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

// Euclidean projection onto {w : ||w|| <= radius} for the given norm.
Vector project_ball(Vector w, double radius, MeasurementNorm norm) {
  switch (norm) {
    case MeasurementNorm::kL2: {
      const double nw = norm2(w);
      if (nw > radius) {
        for (double& v : w) v *= radius / nw;
      }
      return w;
    }
    case MeasurementNorm::kLinf:
      for (double& v : w) v = std::clamp(v, -radius, radius);
      return w;
    case MeasurementNorm::kL1: {
      if (norm1(w) <= radius) return w;
      Vector a(w.size());
      for (std::size_t i = 0; i < w.size(); ++i) a[i] = std::abs(w[i]);
      Vector sorted = a;
      std::sort(sorted.begin(), sorted.end(), std::greater<>());
      double cumsum = 0.0;
      double theta = 0.0;
      for (std::size_t k = 0; k < sorted.size(); ++k) {
        cumsum += sorted[k];
        const double t = (cumsum - radius) / static_cast<double>(k + 1);
        if (sorted[k] - t > 0.0) theta = t;
      }
      for (std::size_t i = 0; i < w.size(); ++i) {
        const double mag = std::max(a[i] - theta, 0.0);
        w[i] = w[i] < 0.0 ? -mag : mag;
      }
      return w;
    }
  }
  return w;
}

Matrix as_matrix(const LinearTransformation& op, Vector data) {
  return Matrix(op.m(), op.n(), std::move(data));
}

// Dual objective b^T y - eps ||y||_d after scaling y into {||A^* y|| <= 1}.
double dual_value(const LinearTransformation& op, const RangeFactors& rf,
                  std::span<const double> b, double eps, Vector y) {
  const Matrix aty = as_matrix(op, rf.apply_transpose(y));
  const double spec = spectral_norm(aty);
  if (spec > 1.0) {
    for (double& v : y) v /= spec;
  }
  return dot(b, y) - eps * dual_norm(y, op.norm());
}

NnmSolution zero_solution(const NnmProblem& problem) {
  NnmSolution sol;
  sol.x = Matrix(problem.op.m(), problem.op.n());
  sol.residual = measurement_norm(problem.b, problem.op.norm());
  sol.theta = sol.residual;
  sol.upsilon_bound = 0.0;
  sol.status = SolveStatus::kConverged;
  return sol;
}

void check_problem(const NnmProblem& problem) {
  if (problem.b.size() != problem.op.p()) {
    throw std::invalid_argument("nnm: b has length " +
                                std::to_string(problem.b.size()) + ", expected " +
                                std::to_string(problem.op.p()));
  }
  for (double v : problem.b) {
    if (!std::isfinite(v)) throw std::invalid_argument("nnm: non-finite b");
  }
  if (!(problem.epsilon >= 0.0) || !std::isfinite(problem.epsilon)) {
    throw std::invalid_argument("nnm: epsilon must be finite and nonnegative");
  }
}

}  // namespace

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kConverged:
      return "converged";
    case SolveStatus::kNotConverged:
      return "not_converged";
    case SolveStatus::kInfeasible:
      return "infeasible";
  }
  return "unknown";
}

Matrix singular_value_threshold(const Matrix& x, double tau) {
  const SvdFactors f = svd(x);
  Matrix out(x.rows(), x.cols());
  for (std::size_t k = 0; k < f.sigma.size(); ++k) {
    const double s = f.sigma[k] - tau;
    if (s <= 0.0) break;
    for (std::size_t i = 0; i < x.rows(); ++i) {
      const double ui = s * f.u(i, k);
      if (ui == 0.0) continue;
      for (std::size_t j = 0; j < x.cols(); ++j) out(i, j) += ui * f.v(j, k);
    }
  }
  return out;
}

NnmSolution solve_equality(const NnmProblem& problem, const SolverConfig& config) {
  check_problem(problem);
  const LinearTransformation& op = problem.op;
  const Vector& b = problem.b;
  if (norm_inf(b) == 0.0) return zero_solution(problem);

  const RangeFactors rf(op);
  NnmSolution sol;
  const double range_res = rf.range_residual(b);
  if (range_res > config.feas_tol * std::max(1.0, norm2(b))) {
    sol.x = as_matrix(op, rf.pinv(b));
    sol.objective = nuclear_norm(sol.x);
    sol.residual = measurement_norm(sub(rf.apply(sol.x.data()), b), op.norm());
    sol.theta = sol.residual;
    sol.status = SolveStatus::kInfeasible;
    return sol;
  }

  const double rho = config.rho;
  const std::size_t mn = op.m() * op.n();
  // x = z - M^+ (M z - b) projects onto {M x = b}.
  auto project = [&](std::span<const double> z) {
    const Vector corr = rf.pinv(sub(rf.apply(z), b));
    return sub(z, corr);
  };

  Vector x = rf.pinv(b);
  Matrix z = as_matrix(op, x);
  Matrix u(op.m(), op.n());
  double gap = std::numeric_limits<double>::infinity();
  std::size_t it = 0;
  bool converged = false;
  while (it < config.max_iterations) {
    ++it;
    Vector zu(mn);
    for (std::size_t k = 0; k < mn; ++k) zu[k] = z.data()[k] - u.data()[k];
    x = project(zu);
    Matrix xu = as_matrix(op, x);
    xu += u;
    z = singular_value_threshold(xu, 1.0 / rho);
    for (std::size_t k = 0; k < mn; ++k) u.data()[k] += x[k] - z.data()[k];

    if (it % config.check_every == 0 || it == config.max_iterations) {
      Vector ru(u.data().begin(), u.data().end());
      for (double& v : ru) v *= rho;
      const double dual = dual_value(op, rf, b, 0.0, rf.pinv_t(ru));
      gap = std::max(0.0, nuclear_norm(as_matrix(op, x)) - dual);
      if (gap <= config.gap_tol) {
        converged = true;
        break;
      }
    }
  }
  sol.x = as_matrix(op, std::move(x));
  sol.objective = nuclear_norm(sol.x);
  sol.residual = measurement_norm(sub(rf.apply(sol.x.data()), b), op.norm());
  sol.theta = sol.residual;
  sol.upsilon_bound = gap;
  sol.iterations = it;
  sol.status = converged && sol.residual <= config.feas_tol * std::max(1.0, norm2(b))
                   ? SolveStatus::kConverged
                   : SolveStatus::kNotConverged;
  return sol;
}

NnmSolution solve_noisy(const NnmProblem& problem, const SolverConfig& config) {
  check_problem(problem);
  if (problem.epsilon == 0.0) return solve_equality(problem, config);
  const LinearTransformation& op = problem.op;
  const Vector& b = problem.b;
  const double eps = problem.epsilon;
  if (measurement_norm(b, op.norm()) <= eps) return zero_solution(problem);

  const RangeFactors rf(op);
  const double rho = config.rho;
  const std::size_t mn = op.m() * op.n();
  const std::size_t p = op.p();

  // (I + M^T M)^{-1} z = z - Vk Diag(s^2 / (1 + s^2)) Vk^T z.
  Vector shrink(rf.rank());
  for (std::size_t l = 0; l < shrink.size(); ++l) {
    const double s2 = rf.sk[l] * rf.sk[l];
    shrink[l] = s2 / (1.0 + s2);
  }
  auto solve_normal = [&](Vector z) {
    Vector c = rf.vk_t(z);
    for (std::size_t l = 0; l < c.size(); ++l) c[l] *= shrink[l];
    const Vector corr = rf.vk_times(c);
    for (std::size_t k = 0; k < z.size(); ++k) z[k] -= corr[k];
    return z;
  };

  Matrix z(op.m(), op.n());
  Matrix u(op.m(), op.n());
  Vector w = project_ball(sub(Vector(p, 0.0), b), eps, op.norm());
  Vector v(p, 0.0);
  double gap = std::numeric_limits<double>::infinity();
  double residual = measurement_norm(b, op.norm());
  bool converged = false;
  std::size_t it = 0;
  while (it < config.max_iterations) {
    ++it;
    Vector rhs(mn);
    Vector bwv(p);
    for (std::size_t i = 0; i < p; ++i) bwv[i] = b[i] + w[i] - v[i];
    const Vector mt = rf.apply_transpose(bwv);
    for (std::size_t k = 0; k < mn; ++k) rhs[k] = z.data()[k] - u.data()[k] + mt[k];
    const Vector x = solve_normal(std::move(rhs));
    Matrix xu = as_matrix(op, x);
    xu += u;
    z = singular_value_threshold(xu, 1.0 / rho);
    const Vector mx = rf.apply(x);
    Vector target(p);
    for (std::size_t i = 0; i < p; ++i) target[i] = mx[i] - b[i] + v[i];
    w = project_ball(std::move(target), eps, op.norm());
    for (std::size_t k = 0; k < mn; ++k) u.data()[k] += x[k] - z.data()[k];
    for (std::size_t i = 0; i < p; ++i) v[i] += mx[i] - b[i] - w[i];

    if (it % config.check_every == 0 || it == config.max_iterations) {
      residual = measurement_norm(sub(rf.apply(z.data()), b), op.norm());
      Vector cand1(p), cand2(p);
      for (std::size_t i = 0; i < p; ++i) {
        cand1[i] = -rho * v[i];
        cand2[i] = rho * v[i];
      }
      Vector ru(u.data().begin(), u.data().end());
      for (double& e : ru) e *= rho;
      double dual = 0.0;  // y = 0
      dual = std::max(dual, dual_value(op, rf, b, eps, std::move(cand1)));
      dual = std::max(dual, dual_value(op, rf, b, eps, std::move(cand2)));
      dual = std::max(dual, dual_value(op, rf, b, eps, rf.pinv_t(ru)));
      gap = std::max(0.0, nuclear_norm(z) - dual);
      if (gap <= config.gap_tol && residual <= eps + config.feas_tol) {
        converged = true;
        break;
      }
    }
  }
  NnmSolution sol;
  sol.x = std::move(z);
  sol.objective = nuclear_norm(sol.x);
  sol.residual = residual;
  sol.theta = residual;
  sol.upsilon_bound = gap;
  sol.iterations = it;
  sol.status = converged ? SolveStatus::kConverged : SolveStatus::kNotConverged;
  return sol;
}

SubgradientCertificate subgradient_certificate(const LinearTransformation& op,
                                               const Matrix& w) {
  if (w.rows() != op.m() || w.cols() != op.n()) {
    throw std::invalid_argument("subgradient_certificate: W has wrong dimensions");
  }
  const SvdFactors f = svd(w);
  const std::size_t s = f.rank();
  if (f.sigma.empty() || f.sigma[0] == 0.0) {
    throw std::invalid_argument("subgradient_certificate: W must be nonzero");
  }
  const Matrix us = f.u.columns(0, s);
  const Matrix vs = f.v.columns(0, s);
  const Matrix pu = us * us.transpose();
  const Matrix pv = vs * vs.transpose();
  // P_T(Z) = Pu Z + Z Pv - Pu Z Pv
  auto tangent = [&](const Matrix& zm) {
    const Matrix puz = pu * zm;
    return puz + zm * pv - puz * pv;
  };
  const Matrix target = us * vs.transpose();
  const std::size_t mn = op.m() * op.n();

  SubgradientCertificate cert;
  cert.y.assign(op.p(), 0.0);
  if (op.p() == 0) {
    cert.residual = frobenius_norm(target);
    cert.diagnostic = "operator has no measurements; A^* y = 0 cannot match U_s V_s^T";
    return cert;
  }
  Matrix g(mn, op.p());
  for (std::size_t i = 0; i < op.p(); ++i) {
    const Matrix t = tangent(op.frames()[i]);
    g.set_column(i, t.data());
  }
  const SvdFactors gf = svd(g);
  const std::size_t k = gf.rank();
  if (k == 0) {
    cert.residual = frobenius_norm(target);
    cert.diagnostic = "frames have no component in the tangent space of W";
    return cert;
  }
  // y = G^+ vec(target)
  Vector c(k, 0.0);
  for (std::size_t l = 0; l < k; ++l) {
    double acc = 0.0;
    for (std::size_t j = 0; j < mn; ++j) acc += gf.u(j, l) * target.data()[j];
    c[l] = acc / gf.sigma[l];
  }
  for (std::size_t i = 0; i < op.p(); ++i) {
    double acc = 0.0;
    for (std::size_t l = 0; l < k; ++l) acc += gf.v(i, l) * c[l];
    cert.y[i] = acc;
  }
  const Matrix aty = op.adjoint(cert.y);
  const Matrix pt = tangent(aty);
  cert.residual = frobenius_norm(pt - target);
  const Matrix mperp = aty - pt;
  cert.gamma_observed = spectral_norm(mperp);
  if (cert.residual > kCertificateTol) {
    cert.diagnostic = "tangent-space equations are not solvable (residual " +
                      std::to_string(cert.residual) + ")";
    return cert;
  }
  if (cert.gamma_observed > 1.0) {
    cert.diagnostic = "orthogonal component has spectral norm above 1";
    return cert;
  }
  cert.valid = true;
  return cert;
}

}  // namespace lmr
