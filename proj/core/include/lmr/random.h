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

#ifndef LMR_RANDOM_H_
#define LMR_RANDOM_H_

#include <cstdint>
#include <initializer_list>
#include <random>

#include "lmr/matrix.h"

namespace lmr {

/// Mixes a master seed with task coordinates (cell, trial, restart...) so
/// that every task draws from its own reproducible stream.
std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> path);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double gaussian();
  double uniform(double lo, double hi);
  Vector gaussian_vector(std::size_t n);
  Matrix gaussian_matrix(std::size_t rows, std::size_t cols,
                         double stddev = 1.0);

 private:
  std::mt19937_64 engine_;
};

/// m x k matrix with orthonormal columns (Gram-Schmidt on a Gaussian draw).
Matrix random_orthonormal(Rng& rng, std::size_t m, std::size_t k);

/// Random vector in {t : ||t||_1 <= s, ||t||_inf <= 1}.
Vector random_in_delta(Rng& rng, std::size_t r, double s);

struct SingularValueLaw {
  double lo = 1.0;
  double hi = 2.0;
};

/// Rank-exactly-s matrix U_s Diag(sigma) V_s^T with random orthonormal
/// factors and singular values uniform in [law.lo, law.hi].
Matrix random_s_rank(std::size_t m, std::size_t n, std::size_t s,
                     std::uint64_t seed, SingularValueLaw law = {});

}  // namespace lmr

#endif  // LMR_RANDOM_H_
