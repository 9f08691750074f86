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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "qcut/decomposition.hpp"
#include "qcut/design.hpp"
#include "qcut/matrix.hpp"
#include "qcut/rng.hpp"
#include "qcut/statevector.hpp"

using namespace qcut;

TEST_CASE("hadamard on wire 0 of two") {
  StateVector st(2);
  apply_matrix_in_place(st, hadamard(), {0});
  CHECK(std::abs(st.amp(0) - Complex(1.0 / std::sqrt(2.0), 0.0)) < 1e-15);
  CHECK(std::abs(st.amp(1) - Complex(1.0 / std::sqrt(2.0), 0.0)) < 1e-15);
  CHECK(std::abs(st.amp(2)) == 0.0);
  CHECK(std::abs(st.amp(3)) == 0.0);
}

TEST_CASE("bell pair via controlled apply") {
  StateVector st(2);
  apply_matrix_in_place(st, hadamard(), {0});
  GateOp cx{pauli_x(), {1}, 0, "cx"};
  apply_gate_in_place(st, cx);
  CHECK(std::abs(st.amp(0) - Complex(1.0 / std::sqrt(2.0), 0.0)) < 1e-15);
  CHECK(std::abs(st.amp(3) - Complex(1.0 / std::sqrt(2.0), 0.0)) < 1e-15);
  CHECK(std::abs(st.amp(1)) == 0.0);
  CHECK(std::abs(st.amp(2)) == 0.0);
}

TEST_CASE("two-wire gate respects target order (targets[0] is the gate LSB)") {
  StateVector st(2);
  apply_matrix_in_place(st, pauli_x(), {1});  // |10> in wire order, index 2
  // cnot_matrix controls on the gate's high bit; mapping targets {0,1} makes
  // wire 1 the control and wire 0 the payload
  apply_matrix_in_place(st, cnot_matrix(), {0, 1});
  CHECK(std::abs(st.amp(3) - Complex(1.0, 0.0)) < 1e-15);
}

TEST_CASE("norm preservation over random circuits") {
  RngStream rng(31);
  StateVector st(4);
  for (int k = 0; k < 60; ++k) {
    const std::size_t w = rng.uniform_index(4);
    switch (rng.uniform_index(3)) {
      case 0: apply_matrix_in_place(st, hadamard(), {w}); break;
      case 1: apply_matrix_in_place(st, phase_s(), {w}); break;
      default: {
        const std::size_t v = (w + 1 + rng.uniform_index(3)) % 4;
        apply_matrix_in_place(st, zz_matrix(rng.uniform(0.0, 3.0)), {w, v});
      }
    }
    CHECK(st.norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("gate application validates wires") {
  StateVector st(2);
  CHECK_THROWS(apply_gate_in_place(st, GateOp{hadamard(), {2}, std::nullopt, "h"}));
  CHECK_THROWS(apply_gate_in_place(st, GateOp{hadamard(), {0}, 0, "h"}));
  CHECK_THROWS(apply_gate_in_place(st, GateOp{cnot_matrix(), {0, 0}, std::nullopt, "cx"}));
  CHECK_THROWS(apply_gate_in_place(st, GateOp{hadamard(), {0, 1}, std::nullopt, "h"}));
}

TEST_CASE("apply_phase_function multiplies basis phases") {
  StateVector st(2);
  apply_matrix_in_place(st, hadamard(), {0});
  apply_matrix_in_place(st, hadamard(), {1});
  apply_phase_function(st, [](std::uint64_t bits) { return bits == 3 ? M_PI : 0.0; });
  // |++> with a sign on |11> equals CZ|++>
  StateVector ref(2);
  apply_matrix_in_place(ref, hadamard(), {0});
  apply_matrix_in_place(ref, hadamard(), {1});
  apply_matrix_in_place(ref, cz_matrix(), {0, 1});
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(st.amp(i) - ref.amp(i)) < 1e-14);
}

TEST_CASE("born rule chi-squared on a biased single qubit") {
  // amplitudes sqrt(0.17), sqrt(0.83): measured frequencies must match
  StateVector proto = StateVector::from_amplitudes({std::sqrt(0.17), std::sqrt(0.83)});
  RngStream rng(101);
  const std::size_t shots = 100000;
  std::size_t ones = 0;
  for (std::size_t s = 0; s < shots; ++s) {
    StateVector st = proto;
    ones += measure_in_place(st, {0}, rng);
  }
  const double p = 0.83;
  const double chi2 = [&] {
    const double e1 = double(shots) * p, e0 = double(shots) * (1 - p);
    const double o1 = double(ones), o0 = double(shots - ones);
    return (o1 - e1) * (o1 - e1) / e1 + (o0 - e0) * (o0 - e0) / e0;
  }();
  CHECK(chi2 < 10.83);  // 1 dof, p = 0.001
}

TEST_CASE("measurement collapses and reports wire bits in order") {
  RngStream rng(7);
  StateVector st(3);
  apply_matrix_in_place(st, pauli_x(), {2});
  const std::uint64_t outcome = measure_in_place(st, {2, 0}, rng);
  // bit 0 of the outcome is wires[0] = wire 2
  CHECK(outcome == 1);
  CHECK(std::abs(st.amp(4) - Complex(1.0, 0.0)) < 1e-15);
}

TEST_CASE("observable eigenbasis measurement matches exact expectation") {
  RngStream rng(55);
  StateVector proto(2);
  apply_matrix_in_place(proto, hadamard(), {0});
  apply_matrix_in_place(proto, zz_matrix(M_PI / 8.0), {0, 1});
  const Observable x = Observable::pauli("X", {0});
  const double exact = exact_expectation(proto, x);
  CHECK(exact == doctest::Approx(std::cos(M_PI / 4.0)).epsilon(1e-12));
  const PreparedObservable prep = prepare_observable(x);
  double acc = 0.0;
  const std::size_t shots = 200000;
  for (std::size_t s = 0; s < shots; ++s) {
    StateVector st = proto;
    acc += measure_observable_in_place(st, prep, rng);
  }
  acc /= double(shots);
  CHECK(std::abs(acc - exact) < 5.0 / std::sqrt(double(shots)));
}

TEST_CASE("projector observable yields 0/1 outcomes with the right mean") {
  RngStream rng(77);
  ComplexMatrix col = ComplexMatrix::zero(2, 1);
  col(0, 0) = 1.0;
  const Observable x = Observable::projector(col, {1});
  StateVector proto(2);
  apply_matrix_in_place(proto, hadamard(), {1});
  CHECK(exact_expectation(proto, x) == doctest::Approx(0.5).epsilon(1e-12));
  const PreparedObservable prep = prepare_observable(x);
  for (int s = 0; s < 50; ++s) {
    StateVector st = proto;
    const double y = measure_observable_in_place(st, prep, rng);
    CHECK((y == 0.0 || y == 1.0));
  }
}

TEST_CASE("apply_observable_operator feeds exact inner products") {
  StateVector st(2);
  apply_matrix_in_place(st, hadamard(), {0});
  const Observable x = Observable::pauli("Z", {0});
  const StateVector xst = apply_observable_operator(st, x);
  CHECK(std::abs(inner_product(st, xst)) < 1e-14);  // <+|Z|+> = 0
}

TEST_CASE("diagonal design phase function matches its gate expansion") {
  RngStream rng(13);
  const DiagonalDesignCircuit d = sample_diagonal_design(3, rng);
  StateVector a(3), b(3);
  for (std::size_t w = 0; w < 3; ++w) {
    apply_matrix_in_place(a, hadamard(), {w});
    apply_matrix_in_place(b, hadamard(), {w});
  }
  apply_diagonal_design(a, d, {0, 1, 2});
  apply_circuit_in_place(b, diagonal_design_gates(d, {0, 1, 2}));
  for (std::size_t i = 0; i < 8; ++i) CHECK(std::abs(a.amp(i) - b.amp(i)) < 1e-12);
}

TEST_CASE("diagonal design second moment matches uniform phases on 2 qubits") {
  // E[e^{i(theta(x) - theta(y))}] over the design must be [x == y]; checked
  // through the averaged density of the design acting on |++>
  RngStream rng(99);
  const std::size_t shots = 20000;
  ComplexMatrix acc = ComplexMatrix::zero(4, 4);
  for (std::size_t s = 0; s < shots; ++s) {
    StateVector st(2);
    apply_matrix_in_place(st, hadamard(), {0});
    apply_matrix_in_place(st, hadamard(), {1});
    apply_diagonal_design(st, sample_diagonal_design(2, rng), {0, 1});
    acc += density_matrix(st);
  }
  acc = acc * Complex(1.0 / double(shots), 0.0);
  // off-diagonals average to zero, diagonals to 1/4
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) {
      if (r == c)
        CHECK(std::abs(acc(r, c) - Complex(0.25, 0.0)) < 0.02);
      else
        CHECK(std::abs(acc(r, c)) < 0.02);
    }
}

TEST_CASE("statevector is deterministic for a fixed stream") {
  RngStream r1(5), r2(5);
  StateVector a(3), b(3);
  for (std::size_t w = 0; w < 3; ++w) {
    apply_matrix_in_place(a, hadamard(), {w});
    apply_matrix_in_place(b, hadamard(), {w});
  }
  const std::uint64_t o1 = measure_in_place(a, {0, 1, 2}, r1);
  const std::uint64_t o2 = measure_in_place(b, {0, 1, 2}, r2);
  CHECK(o1 == o2);
  for (std::size_t i = 0; i < 8; ++i) CHECK(a.amp(i) == b.amp(i));
}
