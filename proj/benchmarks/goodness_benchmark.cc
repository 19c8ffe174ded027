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
#include "lmr/goodness.h"
#include "lmr/rip.h"

namespace lmr {
namespace {

void BM_Certify(benchmark::State& state) {
  const auto p = static_cast<std::size_t>(state.range(0));
  const double beta = state.range(1) == 0 ? kInfinity : 2.0;
  const LinearTransformation op = LinearTransformation::gaussian(4, 4, p, 10);
  CertifyConfig cfg;
  cfg.seed = 11;
  for (auto _ : state) {
    benchmark::DoNotOptimize(certify(op, {2, beta, GNumberKind::kGammaHat}, cfg).upper);
  }
}
BENCHMARK(BM_Certify)->Args({8, 0})->Args({12, 0})->Args({12, 1})->Unit(benchmark::kMillisecond);

void BM_UpperGamma1(benchmark::State& state) {
  const LinearTransformation op = LinearTransformation::gaussian(4, 4, 10, 12);
  const std::vector<FactorPair> pairs = sample_factor_pairs(op, 8, 13);
  const double beta = state.range(0) == 0 ? kInfinity : 1.5;
  for (auto _ : state) benchmark::DoNotOptimize(upper_bound_gamma1(op, beta, pairs));
}
BENCHMARK(BM_UpperGamma1)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_RipSample(benchmark::State& state) {
  const LinearTransformation op = LinearTransformation::gaussian(4, 4, 20, 14);
  for (auto _ : state) benchmark::DoNotOptimize(rip_sample_lower(op, 2, 1000, 15));
}
BENCHMARK(BM_RipSample)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace lmr
