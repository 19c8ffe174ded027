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

#include "lmr/random.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lmr {
namespace {

double unit_interval(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = splitmix64(master);
  for (std::uint64_t p : path) h = splitmix64(h ^ splitmix64(p + 0x632be59bd9b4e019ULL));
  return h;
}

// Box-Muller directly on the engine output keeps streams identical across
// standard library implementations, unlike std::normal_distribution.
double Rng::gaussian() {
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  double u1 = 0.0;
  do {
    u1 = unit_interval(engine_);
  } while (u1 <= 0.0);
  const double u2 = unit_interval(engine_);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * unit_interval(engine_);
}

Vector Rng::gaussian_vector(std::size_t n) {
  Vector v(n);
  for (double& x : v) x = gaussian();
  return v;
}

Matrix Rng::gaussian_matrix(std::size_t rows, std::size_t cols, double stddev) {
  Matrix m(rows, cols);
  for (double& x : m.data()) x = stddev * gaussian();
  return m;
}

Matrix random_orthonormal(Rng& rng, std::size_t m, std::size_t k) {
  if (k > m) throw std::invalid_argument("random_orthonormal: k > m");
  Matrix q(m, k);
  std::vector<Vector> basis;
  while (basis.size() < k) {
    Vector v = rng.gaussian_vector(m);
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vector& b : basis) {
        const double p = dot(b, v);
        for (std::size_t i = 0; i < m; ++i) v[i] -= p * b[i];
      }
    }
    const double nv = norm2(v);
    if (nv < 1e-8) continue;
    for (double& x : v) x /= nv;
    q.set_column(basis.size(), v);
    basis.push_back(std::move(v));
  }
  return q;
}

Vector random_in_delta(Rng& rng, std::size_t r, double s) {
  Vector t = rng.gaussian_vector(r);
  const double scale = std::max(norm_inf(t), norm1(t) / s);
  if (scale > 0.0) {
    for (double& x : t) x /= scale;
  }
  return t;
}

Matrix random_s_rank(std::size_t m, std::size_t n, std::size_t s,
                     std::uint64_t seed, SingularValueLaw law) {
  if (s < 1 || s > std::min(m, n)) {
    throw std::invalid_argument("random_s_rank: s must lie in [1, min(m, n)]");
  }
  Rng rng(seed);
  const Matrix u = random_orthonormal(rng, m, s);
  const Matrix v = random_orthonormal(rng, n, s);
  Matrix us = u;
  for (std::size_t j = 0; j < s; ++j) {
    const double sigma = rng.uniform(law.lo, law.hi);
    for (std::size_t i = 0; i < m; ++i) us(i, j) *= sigma;
  }
  return us * v.transpose();
}

}  // namespace lmr
