// Copyright 2026 The qcut authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "qcut/decomposition.hpp"
#include "qcut/hamsim.hpp"
#include "qcut/matrix.hpp"
#include "qcut/rng.hpp"
#include "qcut/spacecut.hpp"
#include "qcut/statevector.hpp"
#include "qcut/svd.hpp"

namespace {

using namespace qcut;

void BM_apply_two_qubit_gate(benchmark::State& state) {
  const std::size_t n = std::size_t(state.range(0));
  StateVector st(n);
  apply_matrix_in_place(st, hadamard(), {0});
  ComplexMatrix g = cnot_matrix();
  for (auto _ : state) {
    apply_matrix_in_place(st, g, {n / 2, n / 2 + 1});
    benchmark::DoNotOptimize(st.amp(0));
  }
  state.SetItemsProcessed(std::int64_t(state.iterations()) << n);
}
BENCHMARK(BM_apply_two_qubit_gate)->Arg(10)->Arg(14)->Arg(18);

void BM_svd_square(benchmark::State& state) {
  const std::size_t d = std::size_t(state.range(0));
  RngStream rng(1);
  ComplexMatrix m = ComplexMatrix::zero(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i, j) = Complex(rng.normal(), rng.normal());
  for (auto _ : state) {
    SvdResult r = svd(m);
    benchmark::DoNotOptimize(r.singular_values[0]);
  }
}
BENCHMARK(BM_svd_square)->Arg(4)->Arg(16)->Arg(64);

void BM_gate_cut_trial(benchmark::State& state) {
  LocalDecomposition gamma = pauli_decomposition(cnot_matrix(), {2, 2});
  Circuit prep = {{hadamard(), {0}, std::nullopt, "h"}, {hadamard(), {1}, std::nullopt, "h"}};
  Observable x = Observable::pauli("Z", {0});
  RngStream rng(2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_trial(gamma, {2, 2}, prep, x, rng));
  }
  state.SetItemsProcessed(std::int64_t(state.iterations()));
}
BENCHMARK(BM_gate_cut_trial);

void BM_closed_form_phi(benchmark::State& state) {
  std::vector<PauliTerm> terms = {{-1.0, {{0, 'Z'}, {1, 'Z'}}},
                                  {-1.0, {{2, 'Z'}, {3, 'Z'}}},
                                  {-0.5, {{0, 'X'}}},
                                  {-0.5, {{1, 'X'}}},
                                  {-0.5, {{2, 'X'}}},
                                  {-0.5, {{3, 'X'}}},
                                  {0.2, {{1, 'Z'}, {2, 'Z'}}}};
  ClusteredHamiltonian ham = classify(terms, 4, {{0, 1}, {2, 3}});
  HamsimOptions opt;
  opt.r_override = std::size_t(state.range(0));
  for (auto _ : state) {
    HamsimPlan plan = make_plan(ham, 1.0, 0.05, opt);
    benchmark::DoNotOptimize(plan.phi);
  }
}
BENCHMARK(BM_closed_form_phi)->Arg(16)->Arg(256)->Arg(4096);

}  // namespace

BENCHMARK_MAIN();
