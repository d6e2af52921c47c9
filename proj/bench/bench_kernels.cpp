// Copyright 2026 The bnnv Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

// Serial against OpenMP kernels, and one campaign at several thread counts.

#include <benchmark/benchmark.h>

#include <map>

#include "bnnv/encoder.hpp"
#include "bnnv/kernels.hpp"
#include "bnnv/pipeline.hpp"

namespace {

using namespace bnnv;

struct Dense {
  SquareMatrix q;
  BitVector bits;

  explicit Dense(std::size_t n) : q(n) {
    Rng rng(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) q(i, j) = q(j, i) = 2.0 * uniform01(rng) - 1.0;
    }
    bits = random_bits(n, rng);
  }
};

const Dense& dense(std::int64_t n) {
  static std::map<std::int64_t, Dense> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, Dense(static_cast<std::size_t>(n))).first;
  return it->second;
}

template <class F>
void serial(benchmark::State& st, F f) {
  const auto& d = dense(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(f(d.q, d.bits));
}

template <class F>
void parallel(benchmark::State& st, F f) {
  const auto& d = dense(st.range(0));
  const int threads = static_cast<int>(st.range(1));
  for (auto _ : st) benchmark::DoNotOptimize(f(d.q, d.bits, threads));
}

void BM_RowSumsSerial(benchmark::State& st) { serial(st, kernels::row_sums_serial); }
void BM_RowSumsParallel(benchmark::State& st) { parallel(st, kernels::row_sums_parallel); }
void BM_QuadraticFormSerial(benchmark::State& st) { serial(st, kernels::quadratic_form_serial); }
void BM_QuadraticFormParallel(benchmark::State& st) { parallel(st, kernels::quadratic_form_parallel); }
void BM_FlipDeltasSerial(benchmark::State& st) { serial(st, kernels::flip_deltas_serial); }
void BM_FlipDeltasParallel(benchmark::State& st) { parallel(st, kernels::flip_deltas_parallel); }

void BM_Campaign(benchmark::State& st) {
  Rng rng(21);
  const auto m = random_model({15, 3, 1}, rng);
  const auto x = random_bits(15, rng);
  const auto inst = encode(m, x, m.forward(x), {.epsilon = 4});
  SolverConfig solver;
  solver.solvers = {SolverKind::dcim, SolverKind::sa};
  solver.dcim.schedule.steps = 200;
  solver.sa.sweeps = 200;
  CampaignConfig cfg;
  cfg.samples = 16;
  cfg.master_seed = 5;
  cfg.threads = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(run_campaign(inst, m, solver, cfg).report.good);
}

void sizes(benchmark::internal::Benchmark* b) {
  for (std::int64_t n : {256, 1067}) b->Arg(n);
}

void sizes_threads(benchmark::internal::Benchmark* b) {
  for (std::int64_t n : {256, 1067}) {
    for (std::int64_t t : {1, 2, 4, 8}) b->Args({n, t});
  }
}

}  // namespace

BENCHMARK(BM_RowSumsSerial)->Apply(sizes);
BENCHMARK(BM_RowSumsParallel)->Apply(sizes_threads)->UseRealTime();
BENCHMARK(BM_QuadraticFormSerial)->Apply(sizes);
BENCHMARK(BM_QuadraticFormParallel)->Apply(sizes_threads)->UseRealTime();
BENCHMARK(BM_FlipDeltasSerial)->Apply(sizes);
BENCHMARK(BM_FlipDeltasParallel)->Apply(sizes_threads)->UseRealTime();
BENCHMARK(BM_Campaign)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
