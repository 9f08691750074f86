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
// Space-like gate cuts via the double Hadamard test. A nonlocal gate with
// local decomposition {(c_i, V_i (x) W_i)} is replaced by random strictly
// local circuits using one ancilla per side; the signed, rescaled outcomes
// average to Tr(X U rho U^dag) with single-trial values bounded by the
// decomposition magnitude.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "qcut/decomposition.hpp"
#include "qcut/matrix.hpp"
#include "qcut/montecarlo.hpp"
#include "qcut/rng.hpp"
#include "qcut/statevector.hpp"

namespace qcut {

// Wire layout of one cut instance. A-side data wires come first, then the
// A ancilla, then the B-side data wires, then the B ancilla; the ancilla
// sits at the highest index of its side so circuit dumps are stable.
struct WireLayout {
  std::size_t na = 1;  // A data qubits
  std::size_t nb = 1;  // B data qubits

  std::size_t ra() const { return na; }
  std::size_t rb() const { return na + nb + 1; }
  std::size_t total() const { return na + nb + 2; }

  std::vector<std::size_t> a_wires() const;
  std::vector<std::size_t> b_wires() const;

  // Callers author state prep and observables on a compact data register
  // (A block [0, na), B block [na, na+nb)); this maps it into the layout.
  std::size_t data_wire(std::size_t k) const { return k < na ? k : k + 1; }
};

WireLayout layout_for(const BipartiteShape& shape);

// Setting random variables of one trial. (i == j && g == 1) has probability
// zero and is never produced.
struct SettingSample {
  std::size_t i = 0;
  std::size_t j = 0;
  int g = 0;
};

// The assembled local circuits of one setting: H on both ancillas, S on both
// ancillas when g = 1, the controlled selects |0><0| (x) V_i + |1><1| (x) V_j
// per side, and the closing Hadamards. Measurement of the ancillas and the
// data register happens in run_trial.
struct DoubleHadamardCircuit {
  WireLayout layout;
  SettingSample setting;
  Circuit gates;
};

struct CutEstimate {
  double mean = 0.0;
  double empirical_variance = 0.0;
  std::size_t trials = 0;
  double one_norm = 0.0;  // phi(Gamma)
  double std_error = 0.0;
};

struct EstimateOptions {
  std::size_t threads = 1;
  // Replaces the final sampled measurement by the exact conditional mean per
  // sampled setting: same expectation, lower variance. Validation only.
  bool conditional_mean = false;
  // Receives the first few assembled circuits, for --dump-circuits.
  std::function<void(const DoubleHadamardCircuit&)> dump_sink;
  std::size_t dump_limit = 8;
};

// Draws (i, j, g) from p(i,j,g) = c_i c_j / phi(Gamma) on the allowed set,
// by marginal sampling of i and j, a fair bit g, and redrawing on the
// zero-probability cell.
SettingSample sample_setting(const LocalDecomposition& gamma, RngStream& rng);

// Same draw, reporting how many proposals the rejection loop consumed.
SettingSample sample_setting(const LocalDecomposition& gamma, RngStream& rng,
                             std::size_t& attempts);

DoubleHadamardCircuit build_circuit(const LocalDecomposition& gamma, const SettingSample& s,
                                    const BipartiteShape& shape);

// One full trial: sample a setting, run the local circuits on
// rho_prep (x) |00><00|, measure ancillas and observable, and return
// phi(Gamma) * (-1)^{g + b1 + b2} * y. Always within [-phi, +phi].
double run_trial(const LocalDecomposition& gamma, const BipartiteShape& shape,
                 const Circuit& rho_prep, const Observable& x, RngStream& rng);

CutEstimate estimate(const LocalDecomposition& gamma, const BipartiteShape& shape,
                     const Circuit& rho_prep, const Observable& x, std::size_t trials,
                     RngStream& rng, const EstimateOptions& options = {});

// Exact conditional mean E[(-1)^{b1+b2} y | setting], by evolving the full
// branch superposition (no sampling).
double exact_conditional_mean(const LocalDecomposition& gamma, const SettingSample& s,
                              const BipartiteShape& shape, const Circuit& rho_prep,
                              const Observable& x);

// E[. | g=0] - E[. | g=1] for a fixed index pair; equals the interference
// cross term (1/2)[Tr(X (V_i(x)W_i) psi (V_j(x)W_j)^dag) + h.c.].
double exact_conditional_difference(const LocalDecomposition& gamma, std::size_t i, std::size_t j,
                                    const BipartiteShape& shape, const Circuit& rho_prep,
                                    const Observable& x);

// Enumerates every setting with weight (-1)^g c_i c_j, applies the assembled
// circuits as channels on state (x) |00><00|, post-processes with
// sigma_z (x) sigma_z on the ancillas, and sums the Choi contributions.
// For a valid decomposition the result equals the Choi matrix of U
// (trace 1, index (reference * d + output)). Requires d_A * d_B <= 64.
ComplexMatrix reconstruct_choi(const LocalDecomposition& gamma, const BipartiteShape& shape);

// ||j - J_U||_F without materializing J_U (rank-1 identity-conjugation Choi).
double choi_residual_vs_unitary(const ComplexMatrix& j, const ComplexMatrix& u);

}  // namespace qcut
