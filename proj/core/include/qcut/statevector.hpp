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

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qcut/matrix.hpp"
#include "qcut/rng.hpp"

namespace qcut {

// Pure state on n <= 20 qubits. Qubit 0 is the least significant bit of the
// amplitude index, repo-wide.
class StateVector {
 public:
  explicit StateVector(std::size_t n_qubits);  // |0...0>
  static StateVector from_amplitudes(std::vector<Complex> amps);

  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return amps_.size(); }

  Complex& amp(std::size_t i) { return amps_[i]; }
  const Complex& amp(std::size_t i) const { return amps_[i]; }
  const std::vector<Complex>& amplitudes() const { return amps_; }
  std::vector<Complex>& amplitudes() { return amps_; }

  double norm() const;
  void normalize();

 private:
  std::size_t n_qubits_ = 0;
  std::vector<Complex> amps_;
};

// One gate: `matrix` on `targets` (targets[0] = least significant bit of the
// gate's own index space), optionally conditioned on a control wire with
// semantics |0><0| (x) 1 + |1><1| (x) U.
struct GateOp {
  ComplexMatrix matrix;
  std::vector<std::size_t> targets;
  std::optional<std::size_t> control;
  std::string name;  // label for circuit dumps only
};

using Circuit = std::vector<GateOp>;

// Validates wires and unitarity, then applies in place.
void apply_gate_in_place(StateVector& state, const GateOp& g);

inline StateVector apply_gate(StateVector state, const GateOp& g) {
  apply_gate_in_place(state, g);
  return state;
}

void apply_circuit_in_place(StateVector& state, const Circuit& circuit);

// Same kernel as apply_gate but without the unitarity check; for observables
// and quasi-channel branches that are intentionally non-unitary.
void apply_matrix_in_place(StateVector& state, const ComplexMatrix& m,
                           const std::vector<std::size_t>& targets);

// Controlled variant, still unchecked; for pre-validated hot loops.
void apply_matrix_in_place(StateVector& state, const ComplexMatrix& m,
                           const std::vector<std::size_t>& targets,
                           std::optional<std::size_t> control);

// amp[x] *= e^{i theta(x)}; used by diagonal phase-random circuits.
void apply_phase_function(StateVector& state,
                          const std::function<double(std::uint64_t)>& theta);

struct MeasurementResult {
  std::uint64_t outcome = 0;  // bit m of `outcome` = result on wires[m]
  StateVector collapsed;
};

// Born-rule measurement of the listed wires; collapses and renormalizes.
// Branches with probability <= 1e-14 are never selected (resample guard).
std::uint64_t measure_in_place(StateVector& state, const std::vector<std::size_t>& wires,
                               RngStream& rng);

MeasurementResult measure_computational(const StateVector& state,
                                        const std::vector<std::size_t>& wires, RngStream& rng);

// Hermitian observable with op norm <= 1, acting on `targets` (identity on
// all other wires).
struct Observable {
  enum class Kind { kPauliString, kRank1Projector, kDenseHermitian };

  Kind kind = Kind::kPauliString;
  std::vector<std::size_t> targets;
  std::vector<char> letters;      // pauli-string payload, letters[m] on targets[m]
  double coefficient = 1.0;       // pauli-string scale, |coefficient| <= 1
  ComplexMatrix payload;          // projector: unit column; dense: matrix

  static Observable pauli(const std::string& letters, std::vector<std::size_t> targets,
                          double coefficient = 1.0);
  static Observable projector(const ComplexMatrix& unit_column, std::vector<std::size_t> targets);
  static Observable dense(const ComplexMatrix& hermitian, std::vector<std::size_t> targets);
};

// Eigenbasis data precomputed once per estimation run, so repeated sampling
// of a dense observable costs one basis rotation per trial.
struct PreparedObservable {
  Observable obs;
  std::vector<double> eigenvalues;   // dense kind only, clamped to [-1, 1]
  ComplexMatrix to_eigenbasis;       // V^dag; dense kind only
};

PreparedObservable prepare_observable(const Observable& obs);

// Samples an eigenvalue of the observable per the Born rule; consumes state.
double measure_observable_in_place(StateVector& state, const PreparedObservable& x,
                                   RngStream& rng);

double measure_observable(const StateVector& state, const Observable& x, RngStream& rng);

double exact_expectation(const StateVector& state, const Observable& x);

// X|psi> as an (unnormalized) vector; used by exact conditional means.
StateVector apply_observable_operator(const StateVector& state, const Observable& x);

// <a|b>.
Complex inner_product(const StateVector& a, const StateVector& b);

ComplexMatrix density_matrix(const StateVector& state);

struct ChoiMatrix {
  ComplexMatrix mat;  // trace 1; index convention (reference slot) * dim + (output slot)
  bool completely_positive = true;
  double min_eigenvalue = 0.0;
};

// Choi state J = (id (x) N)(Phi) of a channel given by Kraus operators.
// Quasi-channels (signed mixtures) legitimately fail the CP flag; only
// min eigenvalue < -1e-6 clears it.
ChoiMatrix channel_to_choi(const std::vector<ComplexMatrix>& kraus, std::size_t dim);

// Same, for a channel given as an action on density matrices.
ChoiMatrix channel_to_choi(const std::function<ComplexMatrix(const ComplexMatrix&)>& channel,
                           std::size_t dim);

// Monte Carlo Choi of a stochastic map acting on the low n qubits of a
// 2n-qubit register prepared in the maximally entangled state.
ComplexMatrix sampled_channel_choi(std::size_t n_qubits,
                                   const std::function<void(StateVector&, RngStream&)>& apply,
                                   std::size_t shots, RngStream& rng);

}  // namespace qcut
