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

#include "qcut/timecut.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "qcut/errors.hpp"

namespace qcut {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void check_cut_wires(std::size_t n_qubits, const std::vector<std::size_t>& wires) {
  if (wires.empty()) throw std::invalid_argument("cut register must have at least one wire");
  for (std::size_t i = 0; i < wires.size(); ++i) {
    if (wires[i] >= n_qubits) throw std::invalid_argument("cut wire out of range");
    for (std::size_t j = i + 1; j < wires.size(); ++j)
      if (wires[i] == wires[j]) throw std::invalid_argument("duplicate cut wire");
  }
}

// Bits of the global index x restricted to `wires`, bit m <- wires[m].
std::uint64_t local_bits(std::uint64_t x, const std::vector<std::size_t>& wires) {
  std::uint64_t b = 0;
  for (std::size_t m = 0; m < wires.size(); ++m) b |= ((x >> wires[m]) & 1ULL) << m;
  return b;
}

void hadamard_layer(StateVector& state, const std::vector<std::size_t>& wires) {
  for (std::size_t w : wires) apply_matrix_in_place(state, hadamard(), {w});
}

}  // namespace

double DiagonalDesignCircuit::phase(std::uint64_t bits) const {
  double theta = 0.0;
  std::size_t k = 0;
  for (std::size_t p = 0; p < n; ++p) {
    const std::uint64_t bp = (bits >> p) & 1ULL;
    for (std::size_t q = p + 1; q < n; ++q, ++k) {
      const std::uint64_t bq = (bits >> q) & 1ULL;
      theta += pair_phases[k][bp | (bq << 1)];
    }
    if (bp) theta += single_phases[p];
  }
  return theta;
}

DiagonalDesignCircuit sample_diagonal_design(std::size_t n, RngStream& rng) {
  if (n == 0) throw std::invalid_argument("design register must have at least one wire");
  DiagonalDesignCircuit d;
  d.n = n;
  d.pair_phases.reserve(n * (n - 1) / 2);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = p + 1; q < n; ++q) {
      std::array<double, 4> ph;
      for (double& v : ph) v = rng.uniform(0.0, kTwoPi);
      d.pair_phases.push_back(ph);
    }
  d.single_phases.resize(n);
  for (double& v : d.single_phases) v = rng.uniform(0.0, kTwoPi);
  return d;
}

void apply_diagonal_design(StateVector& state, const DiagonalDesignCircuit& design,
                           const std::vector<std::size_t>& wires) {
  if (wires.size() != design.n) throw std::invalid_argument("design/wire count mismatch");
  check_cut_wires(state.n_qubits(), wires);
  apply_phase_function(state,
                       [&](std::uint64_t x) { return design.phase(local_bits(x, wires)); });
}

Circuit diagonal_design_gates(const DiagonalDesignCircuit& design,
                              const std::vector<std::size_t>& wires) {
  if (wires.size() != design.n) throw std::invalid_argument("design/wire count mismatch");
  Circuit out;
  char label[128];
  std::size_t k = 0;
  for (std::size_t p = 0; p < design.n; ++p)
    for (std::size_t q = p + 1; q < design.n; ++q, ++k) {
      ComplexMatrix g = ComplexMatrix::zero(4, 4);
      for (std::size_t v = 0; v < 4; ++v)
        g(v, v) = std::polar(1.0, design.pair_phases[k][v]);
      std::snprintf(label, sizeof label, "dpair(%.9g,%.9g,%.9g,%.9g)",
                    design.pair_phases[k][0], design.pair_phases[k][1],
                    design.pair_phases[k][2], design.pair_phases[k][3]);
      out.push_back({g, {wires[p], wires[q]}, std::nullopt, label});
    }
  for (std::size_t p = 0; p < design.n; ++p) {
    ComplexMatrix g = ComplexMatrix::identity(2);
    g(1, 1) = std::polar(1.0, design.single_phases[p]);
    std::snprintf(label, sizeof label, "dphase(%.9g)", design.single_phases[p]);
    out.push_back({g, {wires[p]}, std::nullopt, label});
  }
  return out;
}

std::uint64_t MeasureAndPrepare::apply(StateVector& state, const std::vector<std::size_t>& wires,
                                       RngStream& rng) const {
  if (wires.size() != n) throw std::invalid_argument("measure-and-prepare wire count mismatch");
  return kind == Kind::kM0 ? apply_M0(state, wires, rng)
                                      : apply_M1(state, wires, rng);
}

std::uint64_t apply_M0(StateVector& state, const std::vector<std::size_t>& cut_wires,
                       RngStream& rng) {
  check_cut_wires(state.n_qubits(), cut_wires);
  const DiagonalDesignCircuit design = sample_diagonal_design(cut_wires.size(), rng);
  // Measure in the frame basis {V H |x>}: undo V, undo H, read out.
  apply_phase_function(
      state, [&](std::uint64_t x) { return -design.phase(local_bits(x, cut_wires)); });
  hadamard_layer(state, cut_wires);
  const std::uint64_t x = measure_in_place(state, cut_wires, rng);
  // Re-prepare the same frame state from the collapsed |x>.
  hadamard_layer(state, cut_wires);
  apply_phase_function(
      state, [&](std::uint64_t y) { return design.phase(local_bits(y, cut_wires)); });
  return x;
}

std::uint64_t apply_M1(StateVector& state, const std::vector<std::size_t>& cut_wires,
                       RngStream& rng) {
  check_cut_wires(state.n_qubits(), cut_wires);
  const std::uint64_t d = 1ULL << cut_wires.size();
  const std::uint64_t k = measure_in_place(state, cut_wires, rng);
  std::uint64_t l = rng.uniform_index(d - 1);
  if (l >= k) ++l;  // uniform over the d-1 outcomes != k
  const std::uint64_t diff = k ^ l;
  for (std::size_t m = 0; m < cut_wires.size(); ++m)
    if ((diff >> m) & 1ULL) apply_matrix_in_place(state, pauli_x(), {cut_wires[m]});
  return k;
}

TimecutEstimate timecut_estimate(const Circuit& rho_prep, std::size_t n_qubits,
                                 const std::vector<std::size_t>& cut_wires, const Observable& x,
                                 std::size_t trials, RngStream& rng,
                                 const TimecutOptions& options) {
  check_cut_wires(n_qubits, cut_wires);
  const std::size_t da = std::size_t(1) << cut_wires.size();
  const double one_norm = double(2 * da - 1);
  const double p0 = double(da) / double(2 * da - 1);
  const PreparedObservable prepared = prepare_observable(x);
  const std::uint64_t base_seed = rng.raw();

  TrialStats st = run_chunked_trials(
      trials, options.threads, base_seed, [&](std::size_t, RngStream& trial_rng) {
        StateVector state(n_qubits);
        apply_circuit_in_place(state, rho_prep);
        const bool branch0 = trial_rng.bernoulli(p0);
        if (branch0)
          apply_M0(state, cut_wires, trial_rng);
        else
          apply_M1(state, cut_wires, trial_rng);
        const double y = measure_observable_in_place(state, prepared, trial_rng);
        return branch0 ? one_norm * y : -one_norm * y;
      });

  TimecutEstimate est;
  est.mean = st.mean;
  est.empirical_variance = st.variance;
  est.trials = st.trials;
  est.one_norm = one_norm;
  est.dim_a = da;
  return est;
}

ComplexMatrix choi_m0_analytic(std::size_t d) {
  if (d < 2) throw std::invalid_argument("register dimension must be >= 2");
  ComplexMatrix j = ComplexMatrix::zero(d * d, d * d);
  const double dd = double(d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t r2 = 0; r2 < d; ++r2) j(r * d + r, r2 * d + r2) += 1.0 / (dd * dd);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t l = 0; l < d; ++l)
      if (k != l) j(k * d + l, k * d + l) += 1.0 / (dd * dd);
  return j;
}

ComplexMatrix choi_m1_analytic(std::size_t d) {
  if (d < 2) throw std::invalid_argument("register dimension must be >= 2");
  ComplexMatrix j = ComplexMatrix::zero(d * d, d * d);
  const double w = 1.0 / (double(d) * double(d - 1));
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t l = 0; l < d; ++l)
      if (k != l) j(k * d + l, k * d + l) = w;
  return j;
}

double qpd_identity_check(std::size_t d) {
  if (d < 2 || d > 16) throw std::invalid_argument("identity check supports 2 <= d <= 16");
  const ComplexMatrix j0 = choi_m0_analytic(d);
  const ComplexMatrix j1 = choi_m1_analytic(d);
  ComplexMatrix resid = j0 * double(d) - j1 * double(d - 1);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t r2 = 0; r2 < d; ++r2) resid(r * d + r, r2 * d + r2) -= 1.0 / double(d);
  return resid.max_abs();
}

double variance_bound_check(const ComplexMatrix& x, const BipartiteShape& shape) {
  if (x.rows() != x.cols() || x.rows() != shape.total())
    throw std::invalid_argument("observable dimension does not match shape");
  if (!x.is_hermitian(1e-10)) throw std::invalid_argument("observable must be Hermitian");
  const double cap = double(2 * shape.dim_a - 1);
  const ComplexMatrix reduced = partial_trace(x * x, shape, Subsystem::B);
  const double envelope = 2.0 * op_norm(reduced) + 1.0;
  return cap * std::min(envelope, cap);
}

}  // namespace qcut
