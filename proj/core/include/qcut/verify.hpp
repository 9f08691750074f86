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
//
// Brute-force oracles binding the samplers and simulators to exact linear
// algebra at small scale. Everything here works on dense matrices built by
// direct index arithmetic; none of it calls the statevector kernels it is
// used to check.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qcut/decomposition.hpp"
#include "qcut/hamsim.hpp"
#include "qcut/matrix.hpp"
#include "qcut/statevector.hpp"

namespace qcut {

struct OracleReport {
  std::string name;
  double computed = 0.0;
  double oracle = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

// pass iff |computed - oracle| <= tolerance.
OracleReport make_report(std::string name, double computed, double oracle, double tolerance);

// --- dense Hamiltonian oracles (wire 0 = least significant bit) ---

// The term's Pauli string embedded on n wires, without the coefficient.
ComplexMatrix dense_pauli_string(const PauliTerm& term, std::size_t n_qubits);

ComplexMatrix dense_hamiltonian(const ClusteredHamiltonian& ham);

// e^{-iHt} through a Hermitian eigendecomposition. Throws NumericalError if
// the result drifts from unitarity by more than 1e-10.
ComplexMatrix dense_evolution(const ClusteredHamiltonian& ham, double t);

// One first-order Trotter step: interior-A terms, interior-B terms, boundary
// terms, each exp(-i coeff dt P), in input order (earliest applies first).
ComplexMatrix dense_trotter_step(const ClusteredHamiltonian& ham, double dt);

// ||T(t/r)^r - e^{-iHt}||_op.
double trotter_error(const ClusteredHamiltonian& ham, double t, std::size_t r);

// --- dense circuit / observable oracles ---

ComplexMatrix dense_gate_matrix(const GateOp& g, std::size_t n_qubits);
ComplexMatrix dense_circuit_unitary(const Circuit& circuit, std::size_t n_qubits);
ComplexMatrix dense_observable(const Observable& x, std::size_t n_qubits);

// <0|U^dag X U|0> for the circuit's unitary U.
double dense_expectation(const Circuit& prep, const Observable& x, std::size_t n_qubits);

// The cross term Re <psi| M_j^dag X M_i |psi> that the double Hadamard test's
// conditional-mean difference must reproduce; M_i = W_i (x) V_i in state bit
// order (side A on the low wires), psi prepared by `prep` on the compact data
// register.
double cross_term_oracle(const LocalDecomposition& gamma, std::size_t i, std::size_t j,
                         const Circuit& prep, const Observable& x, const BipartiteShape& shape);

// --- exact sampler laws ---

// p(i,j,g) flattened to index (i*m + j)*2 + g; the (i,i,1) cells are zero.
std::vector<double> spacecut_distribution(const LocalDecomposition& gamma);

// Per-attempt rejection probability ||c||_2^2 / (2 ||c||_1^2).
double spacecut_rejection_rate(const LocalDecomposition& gamma);

// Joint law of the plan sampler's (x, y, g), flattened to
// (x_bits * 2^B + y_bits) * 2 + g with B = r * |boundary| and bit i of
// x_bits = x[i]; the (x == y, g = 1) cells are zero. Requires B <= 8; the
// joint table has 2^{2B+1} cells.
std::vector<double> plan_distribution(const HamsimPlan& plan);

double plan_rejection_rate(const HamsimPlan& plan);

// --- inequality audit ---

// Checks phi(Gamma) >= 1 + 2 R(J_U) (computed = phi, oracle = the bound);
// fails too if Gamma does not reproduce targetU to 1e-8 Frobenius.
OracleReport robustness_inequality_audit(const LocalDecomposition& gamma,
                                         const ComplexMatrix& target_u);

// --- separable-pair construction oracle ---

// Closed-form sigma_plus from phase moments (E e^{i(a-b)} = [a = b] applied
// to the fourth-moment sum), independent of the sampled construction.
ComplexMatrix sigma_plus_phase_moments(const ComplexMatrix& psi_column,
                                       const BipartiteShape& shape);

// --- audit suite and artifacts ---

std::vector<OracleReport> run_audit_suite(std::uint64_t seed);

bool all_pass(const std::vector<OracleReport>& reports);

void write_junit_xml(const std::vector<OracleReport>& reports, std::ostream& out);
void write_reports_csv(const std::vector<OracleReport>& reports, std::ostream& out);

}  // namespace qcut
