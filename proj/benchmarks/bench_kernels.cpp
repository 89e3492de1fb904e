// benchmarks/bench_kernels.cpp

// Copyright 2026   hierarchylab authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <vector>

#include "hierarchylab/derivs.hpp"
#include "hierarchylab/hierarchy.hpp"
#include "hierarchylab/nonlin.hpp"
#include "hierarchylab/rng.hpp"

namespace {

using namespace hierarchylab;

void BM_KernelStep(benchmark::State& state) {
  const Nonlinearity nl = Nonlinearity::tanh();
  double K = 0.25;
  for (auto _ : state) {
    K = kernel_step(K, 0.0, 1.0, nl);
    benchmark::DoNotOptimize(K);
    if (K < 1e-6) K = 0.25;
  }
}
BENCHMARK(BM_KernelStep);

void BM_CumulantStep(benchmark::State& state) {
  const Nonlinearity nl = Nonlinearity::tanh();
  CumulantState st;
  st.K = 0.25;
  for (auto _ : state) {
    st = cumulant_step(st, 256, 1.0, nl);
    benchmark::DoNotOptimize(st);
    if (st.K < 1e-6) {
      st = CumulantState{};
      st.K = 0.25;
    }
  }
}
BENCHMARK(BM_CumulantStep);

void BM_DerivFourthStep(benchmark::State& state) {
  const Nonlinearity nl = Nonlinearity::tanh();
  NetworkSpec spec;
  spec.n0 = 4;
  spec.input_x = {0.0, 0.0, 1.0, 1.0};
  spec.widths = {64};
  spec.nl = nl;
  const DerivKernelState ks = deriv_kernel_seed(spec);
  DerivFourthState f;
  f.k1100 = -1e-4;
  f.k1111 = 1e-4;
  for (auto _ : state) {
    DerivFourthState next = deriv_fourth_step(f, ks, 64, 1.0, nl);
    benchmark::DoNotOptimize(next);
  }
}
BENCHMARK(BM_DerivFourthStep);

void BM_FillNormals(benchmark::State& state) {
  std::vector<double> buf(static_cast<std::size_t>(state.range(0)));
  std::uint32_t draw = 0;
  for (auto _ : state) {
    fill_normals(42, draw++, 1, buf.data(), static_cast<int>(buf.size()));
    benchmark::DoNotOptimize(buf.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FillNormals)->Arg(4096)->Arg(65536);

}  // namespace
