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

#include "qcut/hamsim.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "qcut/errors.hpp"
#include "qcut/montecarlo.hpp"

namespace qcut {

namespace {

constexpr double kPruneTol = 1e-14;

double sign_of(double v) { return v < 0.0 ? -1.0 : 1.0; }

void check_term(const PauliTerm& term, std::size_t n_qubits, std::size_t locality_cap) {
  if (term.paulis.empty()) throw std::invalid_argument("Pauli term with empty support");
  if (term.paulis.size() > locality_cap)
    throw std::invalid_argument("Pauli term exceeds locality cap");
  if (std::abs(term.coefficient) > 1.0 + 1e-12)
    throw std::invalid_argument("Pauli term |coefficient| must be <= 1");
  for (std::size_t m = 0; m < term.paulis.size(); ++m) {
    const auto& [w, letter] = term.paulis[m];
    if (w >= n_qubits) throw std::invalid_argument("Pauli term wire out of range");
    if (m > 0 && term.paulis[m - 1].first >= w)
      throw std::invalid_argument("Pauli term wires must be strictly increasing");
    if (letter != 'X' && letter != 'Y' && letter != 'Z')
      throw std::invalid_argument("Pauli term letter must be X, Y or Z");
  }
}

std::string term_label(const PauliTerm& term) {
  char buf[32];
  std::string s;
  std::snprintf(buf, sizeof buf, "%.6g*", term.coefficient);
  s = buf;
  for (const auto& [w, letter] : term.paulis) {
    std::snprintf(buf, sizeof buf, "%c%zu", letter, w);
    s += buf;
  }
  return s;
}

// exp(-i theta P) on the term's support, via cos I - i sin P.
ComplexMatrix rotation_matrix(const PauliTerm& term, double theta) {
  std::vector<char> letters;
  letters.reserve(term.paulis.size());
  for (const auto& [w, letter] : term.paulis) letters.push_back(letter);
  ComplexMatrix p = pauli_string_matrix(letters);
  ComplexMatrix out = ComplexMatrix::identity(p.rows()) * Complex(std::cos(theta), 0.0);
  out += p * Complex(0.0, -std::sin(theta));
  return out;
}

// Splits a boundary term's factors by partition side; returns per-side
// letters and the wires' positions inside the side's cluster list.
struct SideSplit {
  std::vector<char> letters_a, letters_b;
  std::vector<std::size_t> pos_a, pos_b;  // positions within partition.a / .b
};

SideSplit split_term(const PauliTerm& term, const Partition& partition) {
  SideSplit s;
  for (const auto& [w, letter] : term.paulis) {
    auto ita = std::find(partition.a.begin(), partition.a.end(), w);
    if (ita != partition.a.end()) {
      s.letters_a.push_back(letter);
      s.pos_a.push_back(std::size_t(ita - partition.a.begin()));
      continue;
    }
    auto itb = std::find(partition.b.begin(), partition.b.end(), w);
    if (itb == partition.b.end()) throw std::invalid_argument("term wire not in partition");
    s.letters_b.push_back(letter);
    s.pos_b.push_back(std::size_t(itb - partition.b.begin()));
  }
  return s;
}

}  // namespace

std::vector<std::size_t> PauliTerm::wires() const {
  std::vector<std::size_t> w;
  w.reserve(paulis.size());
  for (const auto& [wire, letter] : paulis) w.push_back(wire);
  return w;
}

ClusteredHamiltonian classify(const std::vector<PauliTerm>& terms, std::size_t n_qubits,
                              const Partition& partition, std::size_t locality_cap) {
  if (n_qubits == 0) throw std::invalid_argument("Hamiltonian needs at least one qubit");
  std::vector<int> owner(n_qubits, -1);
  for (std::size_t w : partition.a) {
    if (w >= n_qubits || owner[w] != -1) throw std::invalid_argument("bad partition (side A)");
    owner[w] = 0;
  }
  for (std::size_t w : partition.b) {
    if (w >= n_qubits || owner[w] != -1) throw std::invalid_argument("bad partition (side B)");
    owner[w] = 1;
  }
  for (std::size_t w = 0; w < n_qubits; ++w)
    if (owner[w] == -1) throw std::invalid_argument("partition must cover every wire");

  ClusteredHamiltonian h;
  h.n_qubits = n_qubits;
  h.partition = partition;
  for (const PauliTerm& term : terms) {
    check_term(term, n_qubits, locality_cap);
    bool on_a = false, on_b = false;
    for (const auto& [w, letter] : term.paulis) (owner[w] == 0 ? on_a : on_b) = true;
    if (on_a && on_b) {
      h.boundary.push_back(term);
      h.eta += std::abs(term.coefficient);
    } else if (on_a) {
      h.interior_a.push_back(term);
    } else {
      h.interior_b.push_back(term);
    }
  }
  return h;
}

LocalDecomposition boundary_decomposition(const PauliTerm& term, const Partition& partition,
                                          double t, std::size_t r) {
  if (r == 0) throw std::invalid_argument("step count must be positive");
  const SideSplit s = split_term(term, partition);
  if (s.letters_a.empty() || s.letters_b.empty())
    throw std::invalid_argument("term not on boundary");
  const double theta = term.coefficient * t / double(r);
  const std::size_t da = std::size_t(1) << s.letters_a.size();
  const std::size_t db = std::size_t(1) << s.letters_b.size();

  LocalDecomposition g;
  g.shape = {da, db};
  const double c = std::cos(theta), sn = std::sin(theta);
  if (std::abs(c) >= kPruneTol)
    g.terms.push_back({std::abs(c), ComplexMatrix::identity(da) * Complex(sign_of(c), 0.0),
                       ComplexMatrix::identity(db)});
  if (std::abs(sn) >= kPruneTol)
    g.terms.push_back({std::abs(sn),
                       pauli_string_matrix(s.letters_a) * Complex(0.0, -sign_of(sn)),
                       pauli_string_matrix(s.letters_b)});
  return g;
}

std::size_t choose_r(const ClusteredHamiltonian& ham, double t, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (t == 0.0) return 1;
  double total = 0.0;
  for (const auto* list : {&ham.interior_a, &ham.interior_b, &ham.boundary})
    for (const PauliTerm& term : *list) total += std::abs(term.coefficient);
  const double raw = std::ceil(4.0 * t * t * total * total / epsilon);
  if (!(raw < 1e12)) throw NumericalError("Trotter step count overflows practical limits");
  return std::max<std::size_t>(1, std::size_t(raw));
}

HamsimPlan make_plan(const ClusteredHamiltonian& ham, double t, double epsilon,
                     const HamsimOptions& options) {
  if (options.retry_cap == 0) throw std::invalid_argument("retry cap must be >= 1");
  HamsimPlan plan;
  plan.ham = ham;
  plan.t = t;
  plan.epsilon = epsilon;
  plan.r = options.r_override ? options.r_override : choose_r(ham, t, epsilon);
  plan.retry_cap = options.retry_cap;
  plan.layout.na = ham.partition.a.size();
  plan.layout.nb = ham.partition.b.size();
  if (plan.layout.na == 0 || plan.layout.nb == 0)
    throw std::invalid_argument("both clusters must be non-empty");
  plan.c0.reserve(ham.boundary.size());
  plan.c1.reserve(ham.boundary.size());
  for (const PauliTerm& term : ham.boundary) {
    const double theta = term.coefficient * t / double(plan.r);
    plan.c0.push_back(std::abs(std::cos(theta)));
    plan.c1.push_back(std::abs(std::sin(theta)));
  }
  plan.phi = closed_form_magnitude(plan);
  return plan;
}

double closed_form_magnitude(const HamsimPlan& plan) {
  if (plan.c0.empty()) return 1.0;
  const double exponent_scale = 4.0 * plan.ham.eta * std::abs(plan.t);
  if (exponent_scale > 300.0) {
    // 2 e^{s1} - e^{s2} = e^{s1} (2 - e^{s2 - s1}), s2 <= s1.
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t k = 0; k < plan.c0.size(); ++k) {
      s1 += std::log(plan.c0[k] + plan.c1[k]);
      s2 += std::log(plan.c0[k] * plan.c0[k] + plan.c1[k] * plan.c1[k]);
    }
    s1 *= 2.0 * double(plan.r);
    s2 *= double(plan.r);
    return std::exp(s1 + std::log(2.0 - std::exp(s2 - s1)));
  }
  double p1 = 1.0, p2 = 1.0;
  for (std::size_t k = 0; k < plan.c0.size(); ++k) {
    p1 *= plan.c0[k] + plan.c1[k];
    p2 *= plan.c0[k] * plan.c0[k] + plan.c1[k] * plan.c1[k];
  }
  return 2.0 * std::pow(p1, 2.0 * double(plan.r)) - std::pow(p2, double(plan.r));
}

namespace {

// Dense embedding of a k-local operator at the listed bit positions.
ComplexMatrix embed_at(const ComplexMatrix& op, const std::vector<std::size_t>& pos,
                       std::size_t n) {
  const std::size_t dim = std::size_t(1) << n;
  const std::size_t k = pos.size();
  std::uint64_t support = 0;
  for (std::size_t p : pos) support |= std::uint64_t(1) << p;
  ComplexMatrix out = ComplexMatrix::zero(dim, dim);
  for (std::size_t row = 0; row < dim; ++row) {
    std::size_t rsub = 0;
    for (std::size_t m = 0; m < k; ++m) rsub |= ((row >> pos[m]) & 1ULL) << m;
    const std::size_t rest = row & ~support;
    for (std::size_t csub = 0; csub < (std::size_t(1) << k); ++csub) {
      std::size_t col = rest;
      for (std::size_t m = 0; m < k; ++m) col |= ((csub >> m) & 1ULL) << pos[m];
      out(row, col) = op(rsub, csub);
    }
  }
  return out;
}

}  // namespace

LocalDecomposition expanded_plan_decomposition(const HamsimPlan& plan) {
  const std::size_t na = plan.layout.na, nb = plan.layout.nb;
  const std::size_t da = std::size_t(1) << na, db = std::size_t(1) << nb;

  auto interior_product = [&](const std::vector<PauliTerm>& terms,
                              const std::vector<std::size_t>& cluster, std::size_t n) {
    ComplexMatrix acc = ComplexMatrix::identity(std::size_t(1) << n);
    for (const PauliTerm& term : terms) {
      std::vector<std::size_t> pos;
      for (const auto& [w, letter] : term.paulis)
        pos.push_back(std::size_t(std::find(cluster.begin(), cluster.end(), w) -
                                  cluster.begin()));
      const ComplexMatrix rot =
          rotation_matrix(term, term.coefficient * plan.t / double(plan.r));
      // Gates apply left to right, so later terms multiply from the left.
      acc = embed_at(rot, pos, n) * acc;
    }
    return acc;
  };

  LocalDecomposition step;
  step.shape = {da, db};
  step.terms = {{1.0, interior_product(plan.ham.interior_a, plan.ham.partition.a, na),
                 interior_product(plan.ham.interior_b, plan.ham.partition.b, nb)}};
  for (const PauliTerm& term : plan.ham.boundary) {
    const SideSplit s = split_term(term, plan.ham.partition);
    LocalDecomposition gk = boundary_decomposition(term, plan.ham.partition, plan.t, plan.r);
    LocalDecomposition lifted;
    lifted.shape = {da, db};
    for (const LocalTerm& lt : gk.terms)
      lifted.terms.push_back({lt.c, embed_at(lt.v, s.pos_a, na), embed_at(lt.w, s.pos_b, nb)});
    step = product(lifted, step);  // boundary applies after the interiors
  }

  LocalDecomposition full = step;
  for (std::size_t rep = 1; rep < plan.r; ++rep) full = product(step, full);
  return full;
}

PlanSetting sample_plan_setting(const HamsimPlan& plan, RngStream& rng) {
  std::size_t attempts = 0;
  return sample_plan_setting(plan, rng, attempts);
}

PlanSetting sample_plan_setting(const HamsimPlan& plan, RngStream& rng, std::size_t& attempts) {
  const std::size_t nb = plan.c0.size();
  const std::size_t bits = plan.r * nb;
  std::vector<double> p1(nb);
  for (std::size_t k = 0; k < nb; ++k) p1[k] = plan.c1[k] / (plan.c0[k] + plan.c1[k]);

  for (attempts = 1; attempts <= plan.retry_cap; ++attempts) {
    PlanSetting s;
    s.x.resize(bits);
    s.y.resize(bits);
    for (std::size_t i = 0; i < bits; ++i) s.x[i] = rng.bernoulli(p1[i % nb]) ? 1 : 0;
    for (std::size_t i = 0; i < bits; ++i) s.y[i] = rng.bernoulli(p1[i % nb]) ? 1 : 0;
    s.g = rng.fair_bit() ? 1 : 0;
    if (s.g == 1 && s.x == s.y) continue;
    return s;
  }
  throw RetryCapError("boundary sampler hit the retry cap");
}

namespace {

// Per-boundary-term gate material, on layout wires.
struct BoundaryGates {
  std::vector<std::size_t> wires_a, wires_b;  // layout targets
  ComplexMatrix va[2], wb[2];                 // branch unitaries
  ComplexMatrix pa, pb;                       // branch Paulis, scalar stripped
  ComplexMatrix sel_a[2][2], sel_b[2][2];     // [x][y] = V_y V_x^dag
  std::string label;
};

inline constexpr std::size_t kQuietPowerWireCap = 8;

struct PlanCache {
  std::vector<GateOp> interior;  // one Trotter step, interiors only (A then B)
  std::vector<BoundaryGates> boundary;
  std::vector<std::size_t> wire_map;  // Hamiltonian wire -> layout wire
  // A Trotter step with all branch bits zero acts as the fixed interior-only
  // operator times a global phase. quiet_pows[j] is that operator to the
  // 2^j-th power on the data wires, letting a run of L quiet steps cost
  // O(log L) dense applies instead of L gate sweeps. Empty when the cluster
  // is too large to hold densely.
  std::vector<ComplexMatrix> quiet_pows;
  std::vector<std::size_t> data_wires;  // A block then B block, layout order
};

PlanCache build_cache(const HamsimPlan& plan, bool with_powers) {
  PlanCache cache;
  const auto& part = plan.ham.partition;
  cache.wire_map.resize(plan.ham.n_qubits);
  for (std::size_t p = 0; p < part.a.size(); ++p) cache.wire_map[part.a[p]] = p;
  for (std::size_t q = 0; q < part.b.size(); ++q)
    cache.wire_map[part.b[q]] = plan.layout.na + 1 + q;

  auto push_interior = [&](const std::vector<PauliTerm>& terms) {
    for (const PauliTerm& term : terms) {
      std::vector<std::size_t> targets;
      for (const auto& [w, letter] : term.paulis) targets.push_back(cache.wire_map[w]);
      const ComplexMatrix rot =
          rotation_matrix(term, term.coefficient * plan.t / double(plan.r));
      cache.interior.push_back({rot, targets, std::nullopt, "rot " + term_label(term)});
    }
  };
  push_interior(plan.ham.interior_a);
  push_interior(plan.ham.interior_b);

  for (std::size_t k = 0; k < plan.ham.boundary.size(); ++k) {
    const PauliTerm& term = plan.ham.boundary[k];
    const SideSplit s = split_term(term, part);
    BoundaryGates bg;
    bg.label = term_label(term);
    for (std::size_t p : s.pos_a) bg.wires_a.push_back(p);
    for (std::size_t q : s.pos_b) bg.wires_b.push_back(plan.layout.na + 1 + q);
    const double theta = term.coefficient * plan.t / double(plan.r);
    const double sc = std::cos(theta) < 0.0 ? -1.0 : 1.0;
    // sign(sin) with a +1 fallback at theta = 0 so the unused branch stays unitary
    const double ss = std::sin(theta) < 0.0 ? -1.0 : 1.0;
    bg.va[0] = ComplexMatrix::identity(std::size_t(1) << s.letters_a.size()) * Complex(sc, 0.0);
    bg.va[1] = pauli_string_matrix(s.letters_a) * Complex(0.0, -ss);
    bg.wb[0] = ComplexMatrix::identity(std::size_t(1) << s.letters_b.size());
    bg.wb[1] = pauli_string_matrix(s.letters_b);
    bg.pa = pauli_string_matrix(s.letters_a);
    bg.pb = pauli_string_matrix(s.letters_b);
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) {
        bg.sel_a[x][y] = bg.va[y] * bg.va[x].adjoint();
        bg.sel_b[x][y] = bg.wb[y] * bg.wb[x].adjoint();
      }
    cache.boundary.push_back(std::move(bg));
  }

  const std::size_t nd = plan.layout.na + plan.layout.nb;
  if (with_powers && nd <= kQuietPowerWireCap) {
    for (std::size_t p = 0; p < plan.layout.na; ++p) cache.data_wires.push_back(p);
    for (std::size_t q = 0; q < plan.layout.nb; ++q)
      cache.data_wires.push_back(plan.layout.na + 1 + q);
    // interior step over the compact data index (A bits low, B bits high)
    ComplexMatrix step = ComplexMatrix::identity(std::size_t(1) << nd);
    auto fold = [&](const std::vector<PauliTerm>& terms, const std::vector<std::size_t>& cluster,
                    std::size_t offset) {
      for (const PauliTerm& term : terms) {
        std::vector<std::size_t> pos;
        for (const auto& [w, letter] : term.paulis)
          pos.push_back(offset + std::size_t(std::find(cluster.begin(), cluster.end(), w) -
                                             cluster.begin()));
        const ComplexMatrix rot =
            rotation_matrix(term, term.coefficient * plan.t / double(plan.r));
        step = embed_at(rot, pos, nd) * step;
      }
    };
    fold(plan.ham.interior_a, part.a, 0);
    fold(plan.ham.interior_b, part.b, plan.layout.na);
    cache.quiet_pows.push_back(step);
    for (std::size_t len = 2; len <= plan.r; len *= 2) {
      const ComplexMatrix& prev = cache.quiet_pows.back();
      cache.quiet_pows.push_back(prev * prev);
    }
  }
  return cache;
}

void check_product_observable(const Observable& x, const std::vector<std::size_t>& wire_map,
                              const HamsimPlan& plan) {
  if (x.kind == Observable::Kind::kPauliString) return;  // product across any cut
  bool on_a = false, on_b = false;
  for (std::size_t t : x.targets) {
    if (t >= wire_map.size()) throw std::invalid_argument("observable wire out of range");
    (wire_map[t] < plan.layout.na ? on_a : on_b) = true;
  }
  if (on_a && on_b)
    throw std::invalid_argument(
        "non-Pauli observables must be supported on a single cluster");
}

}  // namespace

DoubleHadamardCircuit assemble_local_circuits(const HamsimPlan& plan, const PlanSetting& s) {
  const std::size_t nb = plan.c0.size();
  if (s.x.size() != plan.r * nb || s.y.size() != plan.r * nb)
    throw std::invalid_argument("setting size does not match plan");
  const PlanCache cache = build_cache(plan, false);
  const std::size_t ra = plan.layout.ra(), rb = plan.layout.rb();

  DoubleHadamardCircuit c;
  c.layout = plan.layout;
  // i and j carry the packed branch bit patterns (truncated past 64 bits);
  // dumps only, the estimator never reads them back
  c.setting = {0, 0, s.g};
  for (std::size_t b = 0; b < s.x.size() && b < 64; ++b) {
    c.setting.i |= std::size_t(s.x[b]) << b;
    c.setting.j |= std::size_t(s.y[b]) << b;
  }
  c.gates.push_back({hadamard(), {ra}, std::nullopt, "h"});
  c.gates.push_back({hadamard(), {rb}, std::nullopt, "h"});
  if (s.g) {
    c.gates.push_back({phase_s(), {ra}, std::nullopt, "s"});
    c.gates.push_back({phase_s(), {rb}, std::nullopt, "s"});
  }
  char label[96];
  for (std::size_t step = 0; step < plan.r; ++step) {
    for (const GateOp& g : cache.interior) c.gates.push_back(g);
    for (std::size_t k = 0; k < nb; ++k) {
      const BoundaryGates& bg = cache.boundary[k];
      const int xb = s.x[step * nb + k], yb = s.y[step * nb + k];
      std::snprintf(label, sizeof label, "sel[%d] %s.A", xb, bg.label.c_str());
      c.gates.push_back({bg.va[xb], bg.wires_a, std::nullopt, label});
      std::snprintf(label, sizeof label, "csel[%d->%d] %s.A", xb, yb, bg.label.c_str());
      c.gates.push_back({bg.sel_a[xb][yb], bg.wires_a, ra, label});
      std::snprintf(label, sizeof label, "sel[%d] %s.B", xb, bg.label.c_str());
      c.gates.push_back({bg.wb[xb], bg.wires_b, std::nullopt, label});
      std::snprintf(label, sizeof label, "csel[%d->%d] %s.B", xb, yb, bg.label.c_str());
      c.gates.push_back({bg.sel_b[xb][yb], bg.wires_b, rb, label});
    }
  }
  c.gates.push_back({hadamard(), {ra}, std::nullopt, "h"});
  c.gates.push_back({hadamard(), {rb}, std::nullopt, "h"});
  return c;
}

HamsimEstimate hamsim_estimate(const ClusteredHamiltonian& ham, const Circuit& rho_prep,
                               const Observable& x, double t, double epsilon,
                               std::size_t trials, RngStream& rng,
                               const HamsimOptions& options) {
  const HamsimPlan plan = make_plan(ham, t, epsilon, options);
  const PlanCache cache = build_cache(plan, true);
  check_product_observable(x, cache.wire_map, plan);

  // Remap state prep and observable from Hamiltonian wires to layout wires.
  Circuit prep = rho_prep;
  for (GateOp& g : prep) {
    std::vector<std::size_t> used;
    for (std::size_t& w : g.targets) {
      if (w >= plan.ham.n_qubits) throw std::invalid_argument("state-prep wire out of range");
      w = cache.wire_map[w];
      used.push_back(w);
    }
    if (g.control) {
      if (*g.control >= plan.ham.n_qubits)
        throw std::invalid_argument("state-prep control out of range");
      g.control = cache.wire_map[*g.control];
      used.push_back(*g.control);
    }
    std::sort(used.begin(), used.end());
    if (std::adjacent_find(used.begin(), used.end()) != used.end())
      throw std::invalid_argument("state-prep gate reuses a wire");
    if (g.matrix.rows() != (std::size_t(1) << g.targets.size()))
      throw std::invalid_argument("state-prep gate arity mismatch");
    if (!g.matrix.is_unitary(1e-10)) throw std::invalid_argument("state-prep gate not unitary");
  }
  Observable x_remapped = x;
  for (std::size_t& w : x_remapped.targets) w = cache.wire_map[w];
  const PreparedObservable prepared = prepare_observable(x_remapped);

  const std::size_t ra = plan.layout.ra(), rb = plan.layout.rb();
  const std::size_t nb = plan.c0.size();

  // All measured statistics and the conditional-mean inner products are
  // invariant under a global phase, so uncontrolled branch scalars
  // (sign(cos) on V_0, -i sign(sin) on V_1) are dropped here; the controlled
  // selects keep theirs. assemble_local_circuits stays fully faithful.
  auto quiet = [&](const PlanSetting& s, std::size_t step) {
    for (std::size_t k = 0; k < nb; ++k)
      if (s.x[step * nb + k] || s.y[step * nb + k]) return false;
    return true;
  };
  auto evolve = [&](StateVector& state, const PlanSetting& s) {
    for (const GateOp& g : prep) apply_matrix_in_place(state, g.matrix, g.targets, g.control);
    apply_matrix_in_place(state, hadamard(), {ra});
    apply_matrix_in_place(state, hadamard(), {rb});
    if (s.g) {
      apply_matrix_in_place(state, phase_s(), {ra});
      apply_matrix_in_place(state, phase_s(), {rb});
    }
    std::size_t step = 0;
    while (step < plan.r) {
      if (!cache.quiet_pows.empty() && quiet(s, step)) {
        std::size_t run = 1;
        while (step + run < plan.r && quiet(s, step + run)) ++run;
        if (!cache.interior.empty()) {
          for (std::size_t j = 0; run >> j; ++j)
            if ((run >> j) & 1ULL)
              apply_matrix_in_place(state, cache.quiet_pows[j], cache.data_wires);
        }
        step += run;
        continue;
      }
      for (const GateOp& g : cache.interior)
        apply_matrix_in_place(state, g.matrix, g.targets);
      for (std::size_t k = 0; k < nb; ++k) {
        const BoundaryGates& bg = cache.boundary[k];
        const int xb = s.x[step * nb + k], yb = s.y[step * nb + k];
        if (xb) {
          apply_matrix_in_place(state, bg.pa, bg.wires_a);
          apply_matrix_in_place(state, bg.pb, bg.wires_b);
        }
        // sel[x][x] is exactly the identity; skip it.
        if (xb != yb) {
          apply_matrix_in_place(state, bg.sel_a[xb][yb], bg.wires_a, ra);
          apply_matrix_in_place(state, bg.sel_b[xb][yb], bg.wires_b, rb);
        }
      }
      ++step;
    }
    apply_matrix_in_place(state, hadamard(), {ra});
    apply_matrix_in_place(state, hadamard(), {rb});
  };

  const std::uint64_t base_seed = rng.raw();
  if (options.dump_sink) {
    RngStream dump_rng(base_seed, 0);
    const std::size_t limit = std::min(options.dump_limit, trials);
    for (std::size_t k = 0; k < limit; ++k)
      options.dump_sink(assemble_local_circuits(plan, sample_plan_setting(plan, dump_rng)));
  }

  TrialStats st;
  if (options.conditional_mean) {
    st = run_chunked_trials(
        trials, options.threads, base_seed, [&](std::size_t, RngStream& trial_rng) {
          const PlanSetting s = sample_plan_setting(plan, trial_rng);
          StateVector state(plan.layout.total());
          evolve(state, s);
          StateVector xstate = apply_observable_operator(state, x_remapped);
          apply_matrix_in_place(state, pauli_z(), {ra});
          apply_matrix_in_place(state, pauli_z(), {rb});
          const double e = inner_product(state, xstate).real();
          return (s.g ? -plan.phi : plan.phi) * e;
        });
  } else {
    st = run_chunked_trials(
        trials, options.threads, base_seed, [&](std::size_t, RngStream& trial_rng) {
          const PlanSetting s = sample_plan_setting(plan, trial_rng);
          StateVector state(plan.layout.total());
          evolve(state, s);
          const std::uint64_t b = measure_in_place(state, {ra, rb}, trial_rng);
          const double y = measure_observable_in_place(state, prepared, trial_rng);
          const int parity = s.g + int(b & 1ULL) + int((b >> 1) & 1ULL);
          return (parity & 1) ? -plan.phi * y : plan.phi * y;
        });
  }

  HamsimEstimate out;
  out.est.mean = st.mean;
  out.est.empirical_variance = st.variance;
  out.est.trials = st.trials;
  out.est.one_norm = plan.phi;
  out.est.std_error = st.std_error;
  out.eta = plan.ham.eta;
  out.r = plan.r;
  return out;
}

ParsedHamiltonian parse_hamiltonian(const std::string& text, std::size_t locality_cap) {
  ParsedHamiltonian out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool have_qubits = false, have_partition = false;

  auto fail = [&](const std::string& msg) {
    throw ConfigError("line " + std::to_string(lineno) + ": " + msg);
  };

  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;  // blank or comment

    if (tok == "qubits") {
      if (have_qubits) fail("duplicate qubits line");
      long n = 0;
      if (!(ls >> n) || n < 1 || n > 20) fail("qubits must be an integer in [1, 20]");
      if (ls >> tok) fail("trailing tokens after qubit count");
      out.n_qubits = std::size_t(n);
      have_qubits = true;
      continue;
    }
    if (tok == "partition") {
      if (!have_qubits) fail("partition before qubits line");
      if (have_partition) fail("duplicate partition line");
      std::string rest;
      std::getline(ls, rest);
      std::size_t head = rest.find_first_not_of(" \t");
      if (head == std::string::npos || rest[head] != 'A') fail("expected `partition A: ...`");
      head = rest.find_first_not_of(" \t", head + 1);
      if (head == std::string::npos || rest[head] != ':') fail("expected `partition A: ...`");
      rest.erase(0, head + 1);
      std::vector<bool> seen(out.n_qubits, false);
      std::size_t pos = 0;
      while (pos < rest.size()) {
        while (pos < rest.size() && (rest[pos] == ' ' || rest[pos] == ',' || rest[pos] == '\t'))
          ++pos;
        if (pos >= rest.size()) break;
        if (!std::isdigit(static_cast<unsigned char>(rest[pos]))) fail("bad wire in partition");
        std::size_t end = pos;
        while (end < rest.size() && std::isdigit(static_cast<unsigned char>(rest[end]))) ++end;
        const std::size_t w = std::size_t(std::stoul(rest.substr(pos, end - pos)));
        if (w >= out.n_qubits) fail("partition wire out of range");
        if (seen[w]) fail("duplicate wire in partition");
        seen[w] = true;
        out.cluster_a.push_back(w);
        pos = end;
      }
      if (out.cluster_a.empty()) fail("cluster A must be non-empty");
      if (out.cluster_a.size() >= out.n_qubits) fail("cluster B must be non-empty");
      have_partition = true;
      continue;
    }

    if (!have_qubits || !have_partition) fail("term before qubits/partition header");
    PauliTerm term;
    try {
      std::size_t consumed = 0;
      term.coefficient = std::stod(tok, &consumed);
      if (consumed != tok.size()) fail("bad coefficient");
    } catch (const std::logic_error&) {
      fail("bad coefficient");
    }
    if (std::abs(term.coefficient) > 1.0) fail("|coefficient| must be <= 1");
    while (ls >> tok) {
      const std::size_t at = tok.find('@');
      if (at != 1 || tok.size() < 3) fail("factors must look like X@3");
      const char letter = char(std::toupper(static_cast<unsigned char>(tok[0])));
      if (letter != 'X' && letter != 'Y' && letter != 'Z') fail("Pauli letter must be X, Y or Z");
      std::size_t w = 0;
      try {
        std::size_t consumed = 0;
        w = std::size_t(std::stoul(tok.substr(at + 1), &consumed));
        if (consumed != tok.size() - at - 1) fail("bad wire index");
      } catch (const std::logic_error&) {
        fail("bad wire index");
      }
      if (w >= out.n_qubits) fail("factor wire out of range");
      for (const auto& [pw, pl] : term.paulis)
        if (pw == w) fail("duplicate wire in term");
      term.paulis.emplace_back(w, letter);
    }
    if (term.paulis.empty()) fail("term needs at least one Pauli factor");
    if (term.paulis.size() > locality_cap) fail("term locality exceeds cap");
    std::sort(term.paulis.begin(), term.paulis.end());
    out.terms.push_back(std::move(term));
  }
  if (!have_qubits) throw ConfigError("line 0: missing qubits header");
  if (!have_partition) throw ConfigError("line 0: missing partition header");
  if (out.terms.empty()) throw ConfigError("line 0: no Hamiltonian terms");
  return out;
}

}  // namespace qcut
