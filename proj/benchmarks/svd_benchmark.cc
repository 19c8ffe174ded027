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
#include "lmr/random.h"
#include "lmr/svd.h"

namespace lmr {
namespace {

void BM_Svd(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  const Matrix x = rng.gaussian_matrix(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(svd(x));
}
BENCHMARK(BM_Svd)->Arg(4)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void BM_KyFan(benchmark::State& state) {
  Rng rng(2);
  const Matrix x = rng.gaussian_matrix(16, 16);
  for (auto _ : state) benchmark::DoNotOptimize(ky_fan_norm(x, 4));
}
BENCHMARK(BM_KyFan);

}  // namespace
}  // namespace lmr
