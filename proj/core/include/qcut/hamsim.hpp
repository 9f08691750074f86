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
// Clustered Hamiltonian simulation with a cut boundary: first-order Trotter
// steps whose boundary terms are replaced by sampled two-term local
// decompositions. Sampling cost scales as exp(O(eta * t)) in the total
// boundary coefficient weight eta, independent of the interior.

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qcut/decomposition.hpp"
#include "qcut/matrix.hpp"
#include "qcut/rng.hpp"
#include "qcut/spacecut.hpp"
#include "qcut/statevector.hpp"

namespace qcut {

inline constexpr std::size_t kDefaultLocalityCap = 4;

// One Pauli term coefficient * P, |coefficient| <= 1, with at least one
// non-identity factor and bounded locality.
struct PauliTerm {
  double coefficient = 0.0;
  std::vector<std::pair<std::size_t, char>> paulis;  // (wire, letter), sorted by wire

  std::vector<std::size_t> wires() const;
};

struct Partition {
  std::vector<std::size_t> a;
  std::vector<std::size_t> b;
};

struct ClusteredHamiltonian {
  std::size_t n_qubits = 0;
  Partition partition;
  std::vector<PauliTerm> interior_a;
  std::vector<PauliTerm> interior_b;
  std::vector<PauliTerm> boundary;
  double eta = 0.0;  // sum of |coefficient| over boundary terms
};

// Assigns each term to interior A, interior B, or the boundary by support
// intersection with the partition, preserving input order within each class.
ClusteredHamiltonian classify(const std::vector<PauliTerm>& terms, std::size_t n_qubits,
                              const Partition& partition,
                              std::size_t locality_cap = kDefaultLocalityCap);

// Two-term local decomposition of exp(-i * coefficient * P * t / r) for a
// boundary term, phases folded into the A factor: {(|cos x|, +-1 (x) 1),
// (|sin x|, -i sgn P_A (x) P_B)} with x = coefficient * t / r. Entries with
// |c| < 1e-14 are pruned.
LocalDecomposition boundary_decomposition(const PauliTerm& term, const Partition& partition,
                                          double t, std::size_t r);

// r = ceil(4 t^2 (sum_j |coeff_j|)^2 / epsilon); first-order Trotter error
// is then at most epsilon / 4. t = 0 gives r = 1. Deliberately loose; pass
// an explicit r through HamsimOptions to override.
std::size_t choose_r(const ClusteredHamiltonian& ham, double t, double epsilon);

struct HamsimOptions {
  std::size_t r_override = 0;  // 0 = choose_r
  std::size_t retry_cap = 64;
  std::size_t threads = 1;
  // Exact conditional mean per sampled setting instead of measurement;
  // validation only.
  bool conditional_mean = false;
  std::function<void(const DoubleHadamardCircuit&)> dump_sink;
  std::size_t dump_limit = 4;
};

struct HamsimPlan {
  ClusteredHamiltonian ham;
  double t = 0.0;
  double epsilon = 0.0;
  std::size_t r = 1;
  std::size_t retry_cap = 64;
  double phi = 1.0;             // closed-form magnitude of the full product
  std::vector<double> c0, c1;   // per-boundary-term branch weights
  WireLayout layout;            // A cluster, R_A, B cluster, R_B
};

HamsimPlan make_plan(const ClusteredHamiltonian& ham, double t, double epsilon,
                     const HamsimOptions& options = {});

// phi(Gamma) = 2 (prod_k (c0+c1))^{2r} - (prod_k (c0^2+c1^2))^r, evaluated in
// O(|boundary|); switches to log-space when 4 eta t > 300 to avoid overflow.
double closed_form_magnitude(const HamsimPlan& plan);

// The plan's implicit decomposition expanded term by term via the product
// rule, over the full cluster spaces. Exponential in r * |boundary|; meant
// for r <= 2 cross-checks only.
LocalDecomposition expanded_plan_decomposition(const HamsimPlan& plan);

// Branch-selection bits per (step, boundary term), drawn by independent
// Bernoullis with success weight c1/(c0+c1), plus a fair sign bit g;
// (x == y, g = 1) is rejected and redrawn. Throws RetryCapError after
// retry_cap consecutive rejections.
struct PlanSetting {
  std::vector<std::uint8_t> x;  // index (step * |boundary| + k)
  std::vector<std::uint8_t> y;
  int g = 0;
};

PlanSetting sample_plan_setting(const HamsimPlan& plan, RngStream& rng);

// Same draw, reporting how many proposals the rejection loop consumed.
PlanSetting sample_plan_setting(const HamsimPlan& plan, RngStream& rng, std::size_t& attempts);

// Explicit gate list of one trial: H (and S when g = 1) on both ancillas,
// r Trotter steps of interior-A, interior-B, then controlled boundary
// insertions selected by the setting bits, closing Hadamards. No gate
// touches both an A-side and a B-side wire.
DoubleHadamardCircuit assemble_local_circuits(const HamsimPlan& plan, const PlanSetting& s);

struct HamsimEstimate {
  CutEstimate est;     // one_norm = phi(Gamma)
  double eta = 0.0;
  std::size_t r = 1;
};

// Monte Carlo estimate of Tr(X e^{-iHt} rho e^{iHt}). rho_prep and the
// observable are authored on the Hamiltonian's own wire numbering; X must be
// a Pauli string, or a projector/dense observable supported on one side.
HamsimEstimate hamsim_estimate(const ClusteredHamiltonian& ham, const Circuit& rho_prep,
                               const Observable& x, double t, double epsilon,
                               std::size_t trials, RngStream& rng,
                               const HamsimOptions& options = {});

// Line-oriented Hamiltonian file: `qubits n`, `partition A: 0,1`, then one
// term per line `coeff PAULI@wire PAULI@wire ...`. `#` comments and blank
// lines are skipped. Throws ConfigError with a line number on bad input.
struct ParsedHamiltonian {
  std::size_t n_qubits = 0;
  std::vector<std::size_t> cluster_a;
  std::vector<PauliTerm> terms;
};

ParsedHamiltonian parse_hamiltonian(const std::string& text,
                                    std::size_t locality_cap = kDefaultLocalityCap);

}  // namespace qcut
