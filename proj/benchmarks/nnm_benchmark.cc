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
#include "lmr/nnm.h"
#include "lmr/random.h"

namespace lmr {
namespace {

void BM_SolveEquality(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::size_t p = n * n * 5 / 8;
  const LinearTransformation op = LinearTransformation::gaussian(n, n, p, 6);
  const Vector b = op.apply(random_s_rank(n, n, 1, 7));
  std::size_t iterations = 0;
  for (auto _ : state) {
    const NnmSolution sol = solve_equality({op, b});
    iterations = sol.iterations;
    benchmark::DoNotOptimize(sol.objective);
  }
  state.counters["admm_iterations"] = static_cast<double>(iterations);
}
BENCHMARK(BM_SolveEquality)->Arg(4)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_SolveNoisy(benchmark::State& state) {
  const LinearTransformation op = LinearTransformation::gaussian(8, 8, 40, 8);
  Vector b = op.apply(random_s_rank(8, 8, 1, 9));
  for (double& v : b) v += 1e-3;
  for (auto _ : state) benchmark::DoNotOptimize(solve_noisy({op, b, 0.01}).objective);
}
BENCHMARK(BM_SolveNoisy)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace lmr
