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


#include "benchmark/benchmark.h"
#include "lmr/linear_transformation.h"
#include "lmr/lp.h"
#include "lmr/random.h"

namespace lmr {
namespace {

// The lower-bound LP on the restricted representation of a random frame.
void BM_L1Section(benchmark::State& state) {
  const auto r = static_cast<std::size_t>(state.range(0));
  const auto p = static_cast<std::size_t>(state.range(1));
  const LinearTransformation op = LinearTransformation::gaussian(r, r, p, 3);
  Rng rng(4);
  const Matrix a = restrict_to_pair(op, random_orthonormal(rng, r, r),
                                    random_orthonormal(rng, r, r)).a;
  const Vector t = random_in_delta(rng, r, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(lp_solve_l1_section(t, a));
}
BENCHMARK(BM_L1Section)->Args({4, 2})->Args({8, 4})->Args({16, 8})->Args({32, 16});

void BM_DenseLp(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(5);
  LpProblem lp;
  lp.objective = rng.gaussian_vector(n);
  lp.inequality = rng.gaussian_matrix(2 * n, n);
  lp.inequality_rhs.assign(2 * n, 1.0);
  lp.l1_radius = 10.0;
  for (auto _ : state) benchmark::DoNotOptimize(lp_solve(lp));
}
BENCHMARK(BM_DenseLp)->Arg(8)->Arg(16)->Arg(32);

}  // namespace
}  // namespace lmr
