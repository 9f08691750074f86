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

#include "qcut/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qcut/errors.hpp"
#include "qcut/svd.hpp"

namespace qcut {

namespace {

constexpr std::size_t kMaxQubits = 20;
constexpr std::size_t kMaxGateWires = 12;
constexpr double kBranchFloor = 1e-14;  // zero-probability resample guard

void check_wires(std::size_t n, const std::vector<std::size_t>& targets,
                 std::optional<std::size_t> control) {
  if (targets.empty() || targets.size() > kMaxGateWires) {
    throw std::invalid_argument("gate must act on 1..12 wires");
  }
  std::vector<std::size_t> sorted = targets;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("gate targets must be distinct");
  }
  if (sorted.back() >= n) throw std::invalid_argument("gate wire out of range");
  if (control) {
    if (*control >= n) throw std::invalid_argument("control wire out of range");
    if (std::find(targets.begin(), targets.end(), *control) != targets.end()) {
      throw std::invalid_argument("control wire may not be a target");
    }
  }
}

// Inserts a zero bit at each of the (ascending) positions.
std::uint64_t expand_index(std::uint64_t x, const std::vector<std::size_t>& sorted_positions) {
  for (std::size_t p : sorted_positions) {
    const std::uint64_t low = x & ((std::uint64_t(1) << p) - 1);
    x = ((x >> p) << (p + 1)) | low;
  }
  return x;
}

bool is_diagonal(const ComplexMatrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (r != c && m(r, c) != Complex(0.0, 0.0)) return false;
  return true;
}

void apply_matrix_kernel(std::vector<Complex>& amps, const ComplexMatrix& m,
                         const std::vector<std::size_t>& targets, std::uint64_t control_mask) {
  const std::size_t k = targets.size();
  const std::size_t gdim = std::size_t(1) << k;
  if (m.rows() != gdim || m.cols() != gdim) {
    throw std::invalid_argument("gate matrix dimension does not match target count");
  }

  // Single-target, no-control stride loop covers most gates.
  if (k == 1 && control_mask == 0) {
    const std::uint64_t bit = std::uint64_t(1) << targets[0];
    const Complex m00 = m(0, 0), m01 = m(0, 1), m10 = m(1, 0), m11 = m(1, 1);
    for (std::uint64_t base = 0; base < amps.size(); base += 2 * bit) {
      for (std::uint64_t low = 0; low < bit; ++low) {
        Complex& a0 = amps[base | low];
        Complex& a1 = amps[base | low | bit];
        const Complex t0 = m00 * a0 + m01 * a1;
        a1 = m10 * a0 + m11 * a1;
        a0 = t0;
      }
    }
    return;
  }

  std::vector<std::size_t> sorted = targets;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::uint64_t> offsets(gdim, 0);
  for (std::size_t g = 0; g < gdim; ++g)
    for (std::size_t b = 0; b < k; ++b)
      if (g & (std::size_t(1) << b)) offsets[g] |= std::uint64_t(1) << targets[b];

  const std::uint64_t outer = amps.size() >> k;
  const bool diag = (k <= 4) && is_diagonal(m);
  std::vector<Complex> in(gdim), out(gdim);
  for (std::uint64_t x = 0; x < outer; ++x) {
    const std::uint64_t idx = expand_index(x, sorted);
    if (control_mask && !(idx & control_mask)) continue;
    if (diag) {
      for (std::size_t g = 0; g < gdim; ++g) amps[idx | offsets[g]] *= m(g, g);
      continue;
    }
    for (std::size_t g = 0; g < gdim; ++g) in[g] = amps[idx | offsets[g]];
    for (std::size_t r = 0; r < gdim; ++r) {
      Complex acc = 0.0;
      const Complex* row = m.data() + r * gdim;
      for (std::size_t g = 0; g < gdim; ++g) acc += row[g] * in[g];
      out[r] = acc;
    }
    for (std::size_t g = 0; g < gdim; ++g) amps[idx | offsets[g]] = out[g];
  }
}

void check_gate_unitary(const ComplexMatrix& m) {
  if (m.rows() <= 64) {
    if (!m.is_unitary(1e-10)) throw std::invalid_argument("gate matrix is not unitary");
    return;
  }
  // Large matrices: spot-check column norms and one orthogonality pair per
  // sampled column; a full Gram product would dwarf the gate application.
  const std::size_t dim = m.rows();
  const std::size_t step = dim / 16;
  for (std::size_t c = 0; c < dim; c += step) {
    double nrm2 = 0.0;
    Complex ortho = 0.0;
    const std::size_t c2 = (c + 1) % dim;
    for (std::size_t r = 0; r < dim; ++r) {
      nrm2 += std::norm(m(r, c));
      ortho += std::conj(m(r, c)) * m(r, c2);
    }
    if (std::abs(nrm2 - 1.0) > 1e-9 || std::abs(ortho) > 1e-9) {
      throw std::invalid_argument("gate matrix is not unitary");
    }
  }
}

double wire_one_probability(const std::vector<Complex>& amps, std::size_t wire) {
  const std::uint64_t bit = std::uint64_t(1) << wire;
  double p1 = 0.0;
  for (std::uint64_t base = 0; base < amps.size(); base += 2 * bit)
    for (std::uint64_t low = 0; low < bit; ++low) p1 += std::norm(amps[base | low | bit]);
  return p1;
}

void collapse_wire(std::vector<Complex>& amps, std::size_t wire, int outcome, double prob) {
  const std::uint64_t bit = std::uint64_t(1) << wire;
  const double scale = 1.0 / std::sqrt(prob);
  for (std::uint64_t base = 0; base < amps.size(); base += 2 * bit) {
    for (std::uint64_t low = 0; low < bit; ++low) {
      Complex& a0 = amps[base | low];
      Complex& a1 = amps[base | low | bit];
      if (outcome == 0) {
        a0 *= scale;
        a1 = 0.0;
      } else {
        a1 *= scale;
        a0 = 0.0;
      }
    }
  }
}

}  // namespace

StateVector::StateVector(std::size_t n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits == 0 || n_qubits > kMaxQubits) {
    throw std::invalid_argument("state must have 1..20 qubits");
  }
  amps_.assign(std::size_t(1) << n_qubits, Complex(0.0));
  amps_[0] = 1.0;
}

StateVector StateVector::from_amplitudes(std::vector<Complex> amps) {
  std::size_t n = 0;
  while ((std::size_t(1) << n) < amps.size()) ++n;
  if (amps.empty() || (std::size_t(1) << n) != amps.size() || n == 0 || n > kMaxQubits) {
    throw std::invalid_argument("amplitude count must be 2^n, n in 1..20");
  }
  StateVector s(n);
  s.amps_ = std::move(amps);
  return s;
}

double StateVector::norm() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return std::sqrt(s);
}

void StateVector::normalize() {
  const double n = norm();
  if (n <= 0.0) throw NumericalError("cannot normalize a zero state");
  const double inv = 1.0 / n;
  for (auto& a : amps_) a *= inv;
}

void apply_gate_in_place(StateVector& state, const GateOp& g) {
  check_wires(state.n_qubits(), g.targets, g.control);
  check_gate_unitary(g.matrix);
  const std::uint64_t cmask = g.control ? (std::uint64_t(1) << *g.control) : 0;
  apply_matrix_kernel(state.amplitudes(), g.matrix, g.targets, cmask);
}

void apply_circuit_in_place(StateVector& state, const Circuit& circuit) {
  for (const auto& g : circuit) apply_gate_in_place(state, g);
}

void apply_matrix_in_place(StateVector& state, const ComplexMatrix& m,
                           const std::vector<std::size_t>& targets) {
  check_wires(state.n_qubits(), targets, std::nullopt);
  apply_matrix_kernel(state.amplitudes(), m, targets, 0);
}

void apply_matrix_in_place(StateVector& state, const ComplexMatrix& m,
                           const std::vector<std::size_t>& targets,
                           std::optional<std::size_t> control) {
  check_wires(state.n_qubits(), targets, control);
  const std::uint64_t cmask = control ? (std::uint64_t(1) << *control) : 0;
  apply_matrix_kernel(state.amplitudes(), m, targets, cmask);
}

void apply_phase_function(StateVector& state,
                          const std::function<double(std::uint64_t)>& theta) {
  auto& amps = state.amplitudes();
  for (std::uint64_t x = 0; x < amps.size(); ++x) amps[x] *= std::polar(1.0, theta(x));
}

std::uint64_t measure_in_place(StateVector& state, const std::vector<std::size_t>& wires,
                               RngStream& rng) {
  check_wires(state.n_qubits(), wires, std::nullopt);
  auto& amps = state.amplitudes();
  std::uint64_t outcome = 0;
  for (std::size_t m = 0; m < wires.size(); ++m) {
    const double p1 = wire_one_probability(amps, wires[m]);
    int bit;
    if (p1 <= kBranchFloor) {
      bit = 0;
    } else if (1.0 - p1 <= kBranchFloor) {
      bit = 1;
    } else {
      bit = rng.uniform() < p1 ? 1 : 0;
    }
    collapse_wire(amps, wires[m], bit, bit ? p1 : 1.0 - p1);
    if (bit) outcome |= std::uint64_t(1) << m;
  }
  return outcome;
}

MeasurementResult measure_computational(const StateVector& state,
                                        const std::vector<std::size_t>& wires, RngStream& rng) {
  MeasurementResult res{0, state};
  res.outcome = measure_in_place(res.collapsed, wires, rng);
  return res;
}

Observable Observable::pauli(const std::string& letters, std::vector<std::size_t> targets,
                             double coefficient) {
  if (letters.size() != targets.size() || letters.empty()) {
    throw ConfigError("observable: one Pauli letter per target wire required");
  }
  for (char c : letters) {
    if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
      throw ConfigError(std::string("observable: invalid Pauli letter '") + c + "'");
    }
  }
  if (std::abs(coefficient) > 1.0 + 1e-12) {
    throw ConfigError("observable: |coefficient| must be <= 1");
  }
  Observable o;
  o.kind = Kind::kPauliString;
  o.targets = std::move(targets);
  o.letters.assign(letters.begin(), letters.end());
  o.coefficient = coefficient;
  return o;
}

Observable Observable::projector(const ComplexMatrix& unit_column,
                                 std::vector<std::size_t> targets) {
  if (unit_column.cols() != 1 ||
      unit_column.rows() != (std::size_t(1) << targets.size())) {
    throw ConfigError("observable: projector payload must be a 2^k column");
  }
  if (std::abs(unit_column.frobenius_norm() - 1.0) > 1e-8) {
    throw ConfigError("observable: projector vector must be normalized");
  }
  Observable o;
  o.kind = Kind::kRank1Projector;
  o.targets = std::move(targets);
  o.payload = unit_column * Complex(1.0 / unit_column.frobenius_norm());
  return o;
}

Observable Observable::dense(const ComplexMatrix& hermitian, std::vector<std::size_t> targets) {
  if (hermitian.rows() != hermitian.cols() ||
      hermitian.rows() != (std::size_t(1) << targets.size())) {
    throw ConfigError("observable: dense payload must be 2^k x 2^k");
  }
  if (!hermitian.is_hermitian(1e-10)) {
    throw ConfigError("observable: dense payload must be Hermitian");
  }
  EighResult e = eigh(hermitian);
  const double extreme = std::max(std::abs(e.values.front()), std::abs(e.values.back()));
  if (extreme > 1.0 + 1e-9) throw ConfigError("observable: operator norm must be <= 1");
  Observable o;
  o.kind = Kind::kDenseHermitian;
  o.targets = std::move(targets);
  o.payload = hermitian;
  return o;
}

PreparedObservable prepare_observable(const Observable& obs) {
  PreparedObservable p;
  p.obs = obs;
  if (obs.kind == Observable::Kind::kDenseHermitian) {
    EighResult e = eigh(obs.payload);
    p.eigenvalues = std::move(e.values);
    for (double& v : p.eigenvalues) v = std::clamp(v, -1.0, 1.0);
    p.to_eigenbasis = e.vectors.adjoint();
  }
  return p;
}

namespace {

// Expectation of a rank-1 projector on the target wires: sum over the other
// wires of |<phi|psi(outer)>|^2.
double projector_expectation(const StateVector& state, const ComplexMatrix& phi,
                             const std::vector<std::size_t>& targets) {
  std::vector<std::size_t> sorted = targets;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t k = targets.size();
  const std::size_t gdim = std::size_t(1) << k;
  std::vector<std::uint64_t> offsets(gdim, 0);
  for (std::size_t g = 0; g < gdim; ++g)
    for (std::size_t b = 0; b < k; ++b)
      if (g & (std::size_t(1) << b)) offsets[g] |= std::uint64_t(1) << targets[b];
  const auto& amps = state.amplitudes();
  const std::uint64_t outer = amps.size() >> k;
  double total = 0.0;
  for (std::uint64_t x = 0; x < outer; ++x) {
    const std::uint64_t idx = expand_index(x, sorted);
    Complex overlap = 0.0;
    for (std::size_t g = 0; g < gdim; ++g) overlap += std::conj(phi(g, 0)) * amps[idx | offsets[g]];
    total += std::norm(overlap);
  }
  return total;
}

const ComplexMatrix& pauli_letter(char c) {
  switch (c) {
    case 'X': return pauli_x();
    case 'Y': return pauli_y();
    case 'Z': return pauli_z();
    default: return pauli_i();
  }
}

// Maps the letter's eigenbasis onto the computational one: H for X, H S^dag
// for Y (S^dag Y S = X, then H X H = Z).
void rotate_letter_basis(StateVector& state, char letter, std::size_t wire) {
  static const ComplexMatrix h_sdag = hadamard() * phase_s().adjoint();
  if (letter == 'X') {
    apply_matrix_in_place(state, hadamard(), {wire});
  } else if (letter == 'Y') {
    apply_matrix_in_place(state, h_sdag, {wire});
  }
}

}  // namespace

double measure_observable_in_place(StateVector& state, const PreparedObservable& x,
                                   RngStream& rng) {
  const Observable& obs = x.obs;
  switch (obs.kind) {
    case Observable::Kind::kPauliString: {
      std::vector<std::size_t> measured;
      for (std::size_t m = 0; m < obs.targets.size(); ++m) {
        if (obs.letters[m] == 'I') continue;
        rotate_letter_basis(state, obs.letters[m], obs.targets[m]);
        measured.push_back(obs.targets[m]);
      }
      if (measured.empty()) return obs.coefficient;
      const std::uint64_t outcome = measure_in_place(state, measured, rng);
      const int parity = __builtin_popcountll(outcome) & 1;
      return parity ? -obs.coefficient : obs.coefficient;
    }
    case Observable::Kind::kRank1Projector: {
      const double p1 = projector_expectation(state, obs.payload, obs.targets);
      if (p1 <= kBranchFloor) return 0.0;
      if (1.0 - p1 <= kBranchFloor) return 1.0;
      return rng.uniform() < p1 ? 1.0 : 0.0;
    }
    case Observable::Kind::kDenseHermitian: {
      apply_matrix_in_place(state, x.to_eigenbasis, obs.targets);
      const std::uint64_t outcome = measure_in_place(state, obs.targets, rng);
      return x.eigenvalues[outcome];
    }
  }
  throw std::logic_error("unreachable");
}

double measure_observable(const StateVector& state, const Observable& x, RngStream& rng) {
  StateVector copy = state;
  return measure_observable_in_place(copy, prepare_observable(x), rng);
}

double exact_expectation(const StateVector& state, const Observable& x) {
  switch (x.kind) {
    case Observable::Kind::kPauliString: {
      StateVector applied = state;
      for (std::size_t m = 0; m < x.targets.size(); ++m) {
        if (x.letters[m] == 'I') continue;
        apply_matrix_in_place(applied, pauli_letter(x.letters[m]), {x.targets[m]});
      }
      return x.coefficient * inner_product(state, applied).real();
    }
    case Observable::Kind::kRank1Projector:
      return projector_expectation(state, x.payload, x.targets);
    case Observable::Kind::kDenseHermitian: {
      StateVector applied = state;
      apply_matrix_in_place(applied, x.payload, x.targets);
      return inner_product(state, applied).real();
    }
  }
  throw std::logic_error("unreachable");
}

StateVector apply_observable_operator(const StateVector& state, const Observable& x) {
  StateVector out = state;
  switch (x.kind) {
    case Observable::Kind::kPauliString:
      for (std::size_t m = 0; m < x.targets.size(); ++m) {
        if (x.letters[m] == 'I') continue;
        apply_matrix_in_place(out, pauli_letter(x.letters[m]), {x.targets[m]});
      }
      for (Complex& a : out.amplitudes()) a *= x.coefficient;
      return out;
    case Observable::Kind::kRank1Projector:
      apply_matrix_in_place(out, x.payload * x.payload.adjoint(), x.targets);
      return out;
    case Observable::Kind::kDenseHermitian:
      apply_matrix_in_place(out, x.payload, x.targets);
      return out;
  }
  throw std::logic_error("unreachable");
}

Complex inner_product(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("inner_product: dimension mismatch");
  Complex acc = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) acc += std::conj(a.amp(i)) * b.amp(i);
  return acc;
}

ComplexMatrix density_matrix(const StateVector& state) {
  const std::size_t d = state.dim();
  ComplexMatrix rho(d, d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) rho(r, c) = state.amp(r) * std::conj(state.amp(c));
  return rho;
}

namespace {

ChoiMatrix finalize_choi(ComplexMatrix j) {
  ChoiMatrix out;
  EighResult e = eigh(j);
  out.min_eigenvalue = e.values.front();
  out.completely_positive = (out.min_eigenvalue >= -1e-6);
  out.mat = std::move(j);
  return out;
}

}  // namespace

ChoiMatrix channel_to_choi(const std::vector<ComplexMatrix>& kraus, std::size_t dim) {
  if (dim == 0 || dim > 64) throw std::invalid_argument("channel_to_choi: dim must be 1..64");
  ComplexMatrix j(dim * dim, dim * dim);
  const double inv_sqrt_d = 1.0 / std::sqrt(double(dim));
  for (const auto& k : kraus) {
    if (k.rows() != dim || k.cols() != dim) {
      throw std::invalid_argument("channel_to_choi: Kraus operator dimension mismatch");
    }
    // v = (id (x) K)|Phi>, v[i*d + m] = K(m, i)/sqrt(d).
    std::vector<Complex> v(dim * dim);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t m = 0; m < dim; ++m) v[i * dim + m] = k(m, i) * inv_sqrt_d;
    for (std::size_t r = 0; r < v.size(); ++r) {
      if (v[r] == Complex(0.0)) continue;
      for (std::size_t c = 0; c < v.size(); ++c) j(r, c) += v[r] * std::conj(v[c]);
    }
  }
  return finalize_choi(std::move(j));
}

ChoiMatrix channel_to_choi(const std::function<ComplexMatrix(const ComplexMatrix&)>& channel,
                           std::size_t dim) {
  if (dim == 0 || dim > 64) throw std::invalid_argument("channel_to_choi: dim must be 1..64");
  ComplexMatrix j(dim * dim, dim * dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t jj = 0; jj < dim; ++jj) {
      ComplexMatrix basis(dim, dim);
      basis(i, jj) = 1.0;
      const ComplexMatrix out = channel(basis);
      for (std::size_t m = 0; m < dim; ++m)
        for (std::size_t n = 0; n < dim; ++n)
          j(i * dim + m, jj * dim + n) = out(m, n) / double(dim);
    }
  }
  return finalize_choi(std::move(j));
}

ComplexMatrix sampled_channel_choi(std::size_t n_qubits,
                                   const std::function<void(StateVector&, RngStream&)>& apply,
                                   std::size_t shots, RngStream& rng) {
  const std::size_t d = std::size_t(1) << n_qubits;
  std::vector<Complex> entangled(d * d, Complex(0.0));
  const double amp = 1.0 / std::sqrt(double(d));
  for (std::size_t k = 0; k < d; ++k) entangled[k * d + k] = amp;

  ComplexMatrix j(d * d, d * d);
  for (std::size_t shot = 0; shot < shots; ++shot) {
    StateVector s = StateVector::from_amplitudes(entangled);
    apply(s, rng);
    for (std::size_t r = 0; r < s.dim(); ++r) {
      const Complex sr = s.amp(r);
      if (sr == Complex(0.0)) continue;
      for (std::size_t c = 0; c < s.dim(); ++c) j(r, c) += sr * std::conj(s.amp(c));
    }
  }
  j *= Complex(1.0 / double(shots));
  return j;
}

}  // namespace qcut
