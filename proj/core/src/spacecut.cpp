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

#include "qcut/spacecut.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "qcut/errors.hpp"

namespace qcut {

namespace {

std::size_t log2_dim(std::size_t d) {
  std::size_t n = 0;
  while ((std::size_t(1) << n) < d) ++n;
  if ((std::size_t(1) << n) != d || d < 2)
    throw std::invalid_argument("subsystem dimension must be a power of two >= 2");
  return n;
}

void check_gamma(const LocalDecomposition& gamma, const BipartiteShape& shape) {
  if (gamma.terms.empty()) throw std::invalid_argument("decomposition has no terms");
  if (!(gamma.shape == shape)) throw std::invalid_argument("decomposition/shape mismatch");
  for (const LocalTerm& t : gamma.terms) {
    if (!(t.c > 0)) throw std::invalid_argument("decomposition coefficients must be positive");
    if (t.v.rows() != shape.dim_a || t.v.cols() != shape.dim_a ||
        t.w.rows() != shape.dim_b || t.w.cols() != shape.dim_b)
      throw std::invalid_argument("decomposition operator dimension mismatch");
  }
}

Circuit remap_circuit(const Circuit& circuit, const WireLayout& layout) {
  Circuit out = circuit;
  const std::size_t ndata = layout.na + layout.nb;
  for (GateOp& g : out) {
    for (std::size_t& t : g.targets) {
      if (t >= ndata) throw std::invalid_argument("state-prep circuit wire out of range");
      t = layout.data_wire(t);
    }
    if (g.control) {
      if (*g.control >= ndata) throw std::invalid_argument("state-prep control wire out of range");
      g.control = layout.data_wire(*g.control);
    }
  }
  return out;
}

Observable remap_observable(const Observable& x, const WireLayout& layout) {
  Observable out = x;
  const std::size_t ndata = layout.na + layout.nb;
  for (std::size_t& t : out.targets) {
    if (t >= ndata) throw std::invalid_argument("observable wire out of range");
    t = layout.data_wire(t);
  }
  return out;
}

void prepare_input(StateVector& state, const Circuit& rho_prep_remapped) {
  apply_circuit_in_place(state, rho_prep_remapped);
}

// The four-gate select block of one side: V_i unconditionally, then
// controlled V_j V_i^dag, which equals |0><0| (x) V_i + |1><1| (x) V_j.
void push_side(Circuit& gates, const ComplexMatrix& vi, const ComplexMatrix& vj,
               const std::vector<std::size_t>& data, std::size_t anc, int g, const char* side,
               std::size_t i, std::size_t j) {
  char label[64];
  gates.push_back({hadamard(), {anc}, std::nullopt, "h"});
  if (g) gates.push_back({phase_s(), {anc}, std::nullopt, "s"});
  std::snprintf(label, sizeof label, "V%zu.%s", i + 1, side);
  gates.push_back({vi, data, std::nullopt, label});
  std::snprintf(label, sizeof label, "cV%zu.%zu.%s", j + 1, i + 1, side);
  gates.push_back({vj * vi.adjoint(), data, anc, label});
  gates.push_back({hadamard(), {anc}, std::nullopt, "h"});
}

struct PreparedTrial {
  LocalDecomposition gamma;
  BipartiteShape shape;
  WireLayout layout;
  Circuit rho_prep;          // remapped
  PreparedObservable x;      // remapped
  Observable x_remapped;     // for exact conditional means
  double phi = 0.0;
};

PreparedTrial prepare_trial(const LocalDecomposition& gamma, const BipartiteShape& shape,
                            const Circuit& rho_prep, const Observable& x) {
  check_gamma(gamma, shape);
  PreparedTrial p;
  p.gamma = gamma;
  p.shape = shape;
  p.layout = layout_for(shape);
  p.rho_prep = remap_circuit(rho_prep, p.layout);
  p.x_remapped = remap_observable(x, p.layout);
  p.x = prepare_observable(p.x_remapped);
  p.phi = magnitude(gamma);
  return p;
}

double sampled_trial(const PreparedTrial& p, RngStream& rng) {
  const SettingSample s = sample_setting(p.gamma, rng);
  const DoubleHadamardCircuit c = build_circuit(p.gamma, s, p.shape);
  StateVector state(p.layout.total());
  prepare_input(state, p.rho_prep);
  apply_circuit_in_place(state, c.gates);
  const std::uint64_t b = measure_in_place(state, {p.layout.ra(), p.layout.rb()}, rng);
  const double y = measure_observable_in_place(state, p.x, rng);
  const int parity = s.g + int(b & 1ULL) + int((b >> 1) & 1ULL);
  return (parity & 1) ? -p.phi * y : p.phi * y;
}

// Exact mean of (-1)^{b1+b2} y over the branch superposition: the ancilla
// signs become a sigma_z (x) sigma_z phase and y becomes <psi_z| X |psi>.
double conditional_mean_prepared(const PreparedTrial& p, const SettingSample& s) {
  const DoubleHadamardCircuit c = build_circuit(p.gamma, s, p.shape);
  StateVector state(p.layout.total());
  prepare_input(state, p.rho_prep);
  apply_circuit_in_place(state, c.gates);
  StateVector xstate = apply_observable_operator(state, p.x_remapped);
  apply_matrix_in_place(state, pauli_z(), {p.layout.ra()});
  apply_matrix_in_place(state, pauli_z(), {p.layout.rb()});
  return inner_product(state, xstate).real();
}

}  // namespace

std::vector<std::size_t> WireLayout::a_wires() const {
  std::vector<std::size_t> w(na);
  for (std::size_t k = 0; k < na; ++k) w[k] = k;
  return w;
}

std::vector<std::size_t> WireLayout::b_wires() const {
  std::vector<std::size_t> w(nb);
  for (std::size_t k = 0; k < nb; ++k) w[k] = na + 1 + k;
  return w;
}

WireLayout layout_for(const BipartiteShape& shape) {
  WireLayout l;
  l.na = log2_dim(shape.dim_a);
  l.nb = log2_dim(shape.dim_b);
  return l;
}

SettingSample sample_setting(const LocalDecomposition& gamma, RngStream& rng) {
  std::size_t attempts = 0;
  return sample_setting(gamma, rng, attempts);
}

SettingSample sample_setting(const LocalDecomposition& gamma, RngStream& rng,
                             std::size_t& attempts) {
  const std::size_t m = gamma.terms.size();
  if (m == 0) throw std::invalid_argument("decomposition has no terms");
  double norm1 = 0.0;
  for (const LocalTerm& t : gamma.terms) {
    if (!(t.c > 0)) throw std::invalid_argument("decomposition coefficients must be positive");
    norm1 += t.c;
  }
  auto draw_index = [&]() {
    const double u = rng.uniform() * norm1;
    double acc = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      acc += gamma.terms[k].c;
      if (u < acc) return k;
    }
    return m - 1;
  };
  // Rejection of the zero-probability cell reproduces the PMF exactly;
  // acceptance probability is at least 1/2.
  attempts = 0;
  for (;;) {
    ++attempts;
    SettingSample s;
    s.i = draw_index();
    s.j = draw_index();
    s.g = rng.fair_bit() ? 1 : 0;
    if (!(s.i == s.j && s.g == 1)) return s;
  }
}

DoubleHadamardCircuit build_circuit(const LocalDecomposition& gamma, const SettingSample& s,
                                    const BipartiteShape& shape) {
  check_gamma(gamma, shape);
  // (i, i, g=1) is never sampled but its circuit is still well defined; the
  // exact conditional means enumerate it.
  if (s.i >= gamma.terms.size() || s.j >= gamma.terms.size())
    throw std::invalid_argument("setting index out of range");
  DoubleHadamardCircuit c;
  c.layout = layout_for(shape);
  c.setting = s;
  push_side(c.gates, gamma.terms[s.i].v, gamma.terms[s.j].v, c.layout.a_wires(), c.layout.ra(),
            s.g, "A", s.i, s.j);
  push_side(c.gates, gamma.terms[s.i].w, gamma.terms[s.j].w, c.layout.b_wires(), c.layout.rb(),
            s.g, "B", s.i, s.j);
  return c;
}

double run_trial(const LocalDecomposition& gamma, const BipartiteShape& shape,
                 const Circuit& rho_prep, const Observable& x, RngStream& rng) {
  const PreparedTrial p = prepare_trial(gamma, shape, rho_prep, x);
  return sampled_trial(p, rng);
}

CutEstimate estimate(const LocalDecomposition& gamma, const BipartiteShape& shape,
                     const Circuit& rho_prep, const Observable& x, std::size_t trials,
                     RngStream& rng, const EstimateOptions& options) {
  const PreparedTrial p = prepare_trial(gamma, shape, rho_prep, x);
  const std::uint64_t base_seed = rng.raw();

  if (options.dump_sink) {
    RngStream dump_rng(base_seed, 0);  // mirrors the first chunk's stream
    const std::size_t limit = std::min(options.dump_limit, trials);
    for (std::size_t k = 0; k < limit; ++k)
      options.dump_sink(build_circuit(gamma, sample_setting(gamma, dump_rng), shape));
  }

  TrialStats st;
  if (options.conditional_mean) {
    st = run_chunked_trials(trials, options.threads, base_seed,
                            [&](std::size_t, RngStream& trial_rng) {
                              const SettingSample s = sample_setting(p.gamma, trial_rng);
                              const double e = conditional_mean_prepared(p, s);
                              return (s.g ? -p.phi : p.phi) * e;
                            });
  } else {
    st = run_chunked_trials(trials, options.threads, base_seed,
                            [&](std::size_t, RngStream& trial_rng) {
                              return sampled_trial(p, trial_rng);
                            });
  }

  CutEstimate est;
  est.mean = st.mean;
  est.empirical_variance = st.variance;
  est.trials = st.trials;
  est.one_norm = p.phi;
  est.std_error = st.std_error;
  return est;
}

double exact_conditional_mean(const LocalDecomposition& gamma, const SettingSample& s,
                              const BipartiteShape& shape, const Circuit& rho_prep,
                              const Observable& x) {
  const PreparedTrial p = prepare_trial(gamma, shape, rho_prep, x);
  return conditional_mean_prepared(p, s);
}

double exact_conditional_difference(const LocalDecomposition& gamma, std::size_t i, std::size_t j,
                                    const BipartiteShape& shape, const Circuit& rho_prep,
                                    const Observable& x) {
  const PreparedTrial p = prepare_trial(gamma, shape, rho_prep, x);
  return conditional_mean_prepared(p, {i, j, 0}) - conditional_mean_prepared(p, {i, j, 1});
}

namespace {

struct SparseEntry {
  std::size_t row;
  std::size_t col;
  Complex val;
};

// Choi factor of one side of one setting: run the side's circuit on
// |Phi> (x) |0>_anc, project the ancilla with sign (-1)^b, and form
// sum_b (-1)^b s_b s_b^dag over the (reference, data) index. Entries below
// a relative floor are dropped; for Pauli-like terms the factor is sparse.
std::vector<SparseEntry> side_choi_factor(const ComplexMatrix& vi, const ComplexMatrix& vj,
                                          std::size_t nd, int g) {
  const std::size_t d = std::size_t(1) << nd;
  // Mini register: data [0, nd), ancilla nd, reference [nd+1, 2nd+1).
  StateVector state(2 * nd + 1);
  {
    std::vector<Complex>& amps = state.amplitudes();
    std::fill(amps.begin(), amps.end(), Complex(0.0));
    const double w = 1.0 / std::sqrt(double(d));
    for (std::size_t k = 0; k < d; ++k) amps[(k << (nd + 1)) | k] = w;
  }
  std::vector<std::size_t> data(nd);
  for (std::size_t k = 0; k < nd; ++k) data[k] = k;
  const std::size_t anc = nd;

  apply_matrix_in_place(state, hadamard(), {anc});
  if (g) apply_matrix_in_place(state, phase_s(), {anc});
  apply_matrix_in_place(state, vi, data);
  {
    GateOp sel{vj * vi.adjoint(), data, anc, "sel"};
    apply_gate_in_place(state, sel);
  }
  apply_matrix_in_place(state, hadamard(), {anc});

  // Slices over (reference * d + data) for ancilla outcome b.
  std::vector<std::vector<std::pair<std::size_t, Complex>>> slices(2);
  double peak = 0.0;
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t m2 = 0; m2 < d; ++m2)
      for (std::size_t b = 0; b < 2; ++b)
        peak = std::max(peak, std::abs(state.amp((k << (nd + 1)) | (b << nd) | m2)));
  const double floor = peak * 1e-12;
  for (std::size_t b = 0; b < 2; ++b)
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t m2 = 0; m2 < d; ++m2) {
        const Complex a = state.amp((k << (nd + 1)) | (b << nd) | m2);
        if (std::abs(a) > floor) slices[b].push_back({k * d + m2, a});
      }

  std::vector<SparseEntry> out;
  out.reserve(slices[0].size() * slices[0].size() + slices[1].size() * slices[1].size());
  for (std::size_t b = 0; b < 2; ++b) {
    const double sign = b == 0 ? 1.0 : -1.0;
    for (const auto& [r, vr] : slices[b])
      for (const auto& [c, vc] : slices[b]) out.push_back({r, c, sign * vr * std::conj(vc)});
  }
  return out;
}

}  // namespace

ComplexMatrix reconstruct_choi(const LocalDecomposition& gamma, const BipartiteShape& shape) {
  check_gamma(gamma, shape);
  const std::size_t da = shape.dim_a, db = shape.dim_b, d = da * db;
  if (d > 64) throw std::invalid_argument("dimension too large");
  const std::size_t na = log2_dim(da), nb = log2_dim(db);
  const std::size_t m = gamma.terms.size();

  // Accumulate in the grouped index (ref_A * da + out_A) (x) (ref_B * db + out_B),
  // where each setting's contribution is a kron of two side factors.
  ComplexMatrix grouped = ComplexMatrix::zero(d * d, d * d);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (int g = 0; g < 2; ++g) {
        if (i == j && g == 1) continue;  // zero map; skipping matches the PMF support
        const double w = (g ? -1.0 : 1.0) * gamma.terms[i].c * gamma.terms[j].c;
        const auto fa = side_choi_factor(gamma.terms[i].v, gamma.terms[j].v, na, g);
        const auto fb = side_choi_factor(gamma.terms[i].w, gamma.terms[j].w, nb, g);
        for (const SparseEntry& ea : fa)
          for (const SparseEntry& eb : fb)
            grouped(ea.row * db * db + eb.row, ea.col * db * db + eb.col) +=
                w * ea.val * eb.val;
      }

  // Regroup to the standard Choi index (reference * d + output); the side
  // factors carry 1/da and 1/db from the entangled preparations, so the
  // result is already trace-normalized.
  ComplexMatrix out(d * d, d * d);
  for (std::size_t ka = 0; ka < da; ++ka)
    for (std::size_t ma = 0; ma < da; ++ma)
      for (std::size_t kb = 0; kb < db; ++kb)
        for (std::size_t mb = 0; mb < db; ++mb) {
          const std::size_t row_std = (ka * db + kb) * d + (ma * db + mb);
          const std::size_t row_grp = (ka * da + ma) * db * db + (kb * db + mb);
          for (std::size_t ka2 = 0; ka2 < da; ++ka2)
            for (std::size_t ma2 = 0; ma2 < da; ++ma2)
              for (std::size_t kb2 = 0; kb2 < db; ++kb2)
                for (std::size_t mb2 = 0; mb2 < db; ++mb2)
                  out(row_std, (ka2 * db + kb2) * d + (ma2 * db + mb2)) =
                      grouped(row_grp, (ka2 * da + ma2) * db * db + (kb2 * db + mb2));
        }
  return out;
}

double choi_residual_vs_unitary(const ComplexMatrix& j, const ComplexMatrix& u) {
  if (u.rows() != u.cols() || j.rows() != j.cols() || j.rows() != u.rows() * u.rows())
    throw std::invalid_argument("Choi/unitary dimension mismatch");
  const ComplexMatrix phi = choi_vector(u);
  const std::size_t n = j.rows();
  // Entrywise difference against the rank-1 J_U = phi phi^dag, streamed so
  // J_U is never materialized and no large-norm cancellation occurs.
  double acc = 0.0;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      acc += std::norm(j(r, c) - phi(r, 0) * std::conj(phi(c, 0)));
  return std::sqrt(acc);
}

}  // namespace qcut
