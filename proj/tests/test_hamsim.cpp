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
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "qcut/decomposition.hpp"
#include "qcut/errors.hpp"
#include "qcut/hamsim.hpp"
#include "qcut/montecarlo.hpp"
#include "qcut/statevector.hpp"

using namespace qcut;

namespace {

// exp(-i t P) for an involution P.
ComplexMatrix rot(const ComplexMatrix& p, double t) {
  ComplexMatrix out = ComplexMatrix::identity(p.rows()) * Complex(std::cos(t), 0.0);
  out += p * Complex(0.0, -std::sin(t));
  return out;
}

// Two qubits, one per cluster: Z on each side plus an XX bridge.
ClusteredHamiltonian two_site_model(double bridge = 0.4) {
  std::vector<PauliTerm> terms = {
      {1.0, {{0, 'Z'}}}, {1.0, {{1, 'Z'}}}, {bridge, {{0, 'X'}, {1, 'X'}}}};
  return classify(terms, 2, {{0}, {1}});
}

}  // namespace

TEST_CASE("classify splits terms by partition support") {
  ClusteredHamiltonian ham = two_site_model();
  CHECK(ham.interior_a.size() == 1);
  CHECK(ham.interior_b.size() == 1);
  CHECK(ham.boundary.size() == 1);
  CHECK(ham.eta == doctest::Approx(0.4).epsilon(1e-15));

  // no crossing term: boundary empty, eta zero
  std::vector<PauliTerm> local = {{0.5, {{0, 'X'}}}, {0.25, {{1, 'Y'}}}};
  ClusteredHamiltonian h2 = classify(local, 2, {{0}, {1}});
  CHECK(h2.boundary.empty());
  CHECK(h2.eta == 0.0);
}

TEST_CASE("classify validates terms and partition") {
  CHECK_THROWS_AS(classify({{1.5, {{0, 'X'}}}}, 2, {{0}, {1}}), std::invalid_argument);
  CHECK_THROWS_AS(classify({{0.5, {{0, 'Q'}}}}, 2, {{0}, {1}}), std::invalid_argument);
  CHECK_THROWS_AS(classify({{0.5, {{3, 'X'}}}}, 2, {{0}, {1}}), std::invalid_argument);
  // partition must cover every wire exactly once
  CHECK_THROWS_AS(classify({{0.5, {{0, 'X'}}}}, 3, {{0}, {1}}), std::invalid_argument);
  CHECK_THROWS_AS(classify({{0.5, {{0, 'X'}}}}, 2, {{0, 1}, {1}}), std::invalid_argument);
  // locality cap
  std::vector<PauliTerm> fat = {
      {0.5, {{0, 'X'}, {1, 'X'}, {2, 'X'}, {3, 'X'}, {4, 'X'}}}};
  CHECK_THROWS_AS(classify(fat, 5, {{0, 1, 2}, {3, 4}}), std::invalid_argument);
}

TEST_CASE("boundary decomposition reproduces the step rotation") {
  ClusteredHamiltonian ham = two_site_model();
  const double t = 1.0;
  for (std::size_t r : {std::size_t(1), std::size_t(2), std::size_t(3)}) {
    LocalDecomposition g = boundary_decomposition(ham.boundary[0], ham.partition, t, r);
    ComplexMatrix xx = kron(pauli_x(), pauli_x());
    CHECK(validity_residual(g, rot(xx, 0.4 * t / double(r))) < 1e-10);
    CHECK(magnitude(g) <= 1.0 + 4.0 * 0.4 * t / double(r) + 1e-12);
  }
  // t = 0 prunes the sine branch entirely
  LocalDecomposition id = boundary_decomposition(ham.boundary[0], ham.partition, 0.0, 1);
  CHECK(id.terms.size() == 1);
  CHECK(magnitude(id) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("closed-form magnitude matches the expanded product") {
  ClusteredHamiltonian ham = two_site_model();
  const double t = 1.0;
  for (std::size_t r : {std::size_t(1), std::size_t(2)}) {
    HamsimOptions opt;
    opt.r_override = r;
    HamsimPlan plan = make_plan(ham, t, 0.05, opt);
    LocalDecomposition full = expanded_plan_decomposition(plan);
    double phi_exp = magnitude(full);
    CHECK(std::abs(plan.phi - phi_exp) <= 1e-12 * std::max(1.0, phi_exp));
    CHECK(plan.phi <= std::exp(4.0 * ham.eta * t) + 1e-12);

    // the expanded sum must equal the dense Trotter power (grouped A-major
    // basis, so wire 0 is the high bit here)
    ComplexMatrix za = kron(pauli_z(), pauli_i());
    ComplexMatrix zb = kron(pauli_i(), pauli_z());
    ComplexMatrix xx = kron(pauli_x(), pauli_x());
    double dt = t / double(r);
    ComplexMatrix step = rot(xx, 0.4 * dt) * rot(zb, dt) * rot(za, dt);
    ComplexMatrix tr = ComplexMatrix::identity(4);
    for (std::size_t k = 0; k < r; ++k) tr = step * tr;
    CHECK(validity_residual(full, tr) < 1e-10);
  }
}

TEST_CASE("magnitude stays finite deep in the log-space regime") {
  std::vector<PauliTerm> big = {{1.0, {{0, 'X'}, {1, 'X'}}}};
  ClusteredHamiltonian bh = classify(big, 2, {{0}, {1}});
  HamsimOptions opt;
  opt.r_override = 4000;
  HamsimPlan plan = make_plan(bh, 100.0, 0.05, opt);  // 4 eta t = 400
  CHECK(std::isfinite(plan.phi));
  CHECK(plan.phi > 1.0);
  CHECK(plan.phi <= std::exp(400.0));
}

TEST_CASE("choose_r edge cases") {
  ClusteredHamiltonian ham = two_site_model();
  CHECK(choose_r(ham, 0.0, 0.05) == 1);
  CHECK_THROWS_AS(choose_r(ham, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(choose_r(ham, 1e8, 1e-6), NumericalError);
  // the generic bound is monotone in epsilon
  CHECK(choose_r(ham, 1.0, 0.01) >= choose_r(ham, 1.0, 0.1));
}

TEST_CASE("plan settings follow the product sampling law") {
  ClusteredHamiltonian ham = two_site_model();
  HamsimOptions opt;
  opt.r_override = 1;
  HamsimPlan plan = make_plan(ham, 1.0, 0.05, opt);
  REQUIRE(plan.c0.size() == 1);
  double c0 = plan.c0[0], c1 = plan.c1[0];
  double z = (c0 + c1) * (c0 + c1);

  std::map<int, double> want;
  double tot = 0.0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int g = 0; g < 2; ++g) {
        if (x == y && g == 1) continue;  // rejected cell
        double w = (x ? c1 : c0) * (y ? c1 : c0) / z * 0.5;
        want[x * 4 + y * 2 + g] = w;
        tot += w;
      }
  for (auto& [k, v] : want) v /= tot;

  RngStream rng(77);
  std::map<int, std::size_t> got;
  const std::size_t n = 400000;
  for (std::size_t i = 0; i < n; ++i) {
    PlanSetting s = sample_plan_setting(plan, rng);
    got[int(s.x[0]) * 4 + int(s.y[0]) * 2 + s.g]++;
  }
  double tv = 0.0;
  for (auto& [k, v] : want) tv += std::abs(v - double(got[k]) / double(n));
  CHECK(tv / 2.0 < 0.005);
  // the rejected cell never appears
  CHECK(got.count(0 * 4 + 0 * 2 + 1) == 0);
  CHECK(got.count(1 * 4 + 1 * 2 + 1) == 0);
}

TEST_CASE("rejection attempts match the acceptance probability") {
  ClusteredHamiltonian ham = two_site_model();
  HamsimOptions opt;
  opt.r_override = 2;
  HamsimPlan plan = make_plan(ham, 1.0, 0.05, opt);
  // P(x == y) over all r*|boundary| independent slots, half of which the
  // fair sign bit then rejects
  double same = 1.0;
  for (std::size_t slot = 0; slot < plan.r * plan.c0.size(); ++slot) {
    std::size_t k = slot % plan.c0.size();
    double p1 = plan.c1[k] / (plan.c0[k] + plan.c1[k]);
    same *= p1 * p1 + (1.0 - p1) * (1.0 - p1);
  }
  double p_reject = 0.5 * same;

  RngStream rng(13);
  const std::size_t n = 100000;
  double attempts_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t attempts = 0;
    (void)sample_plan_setting(plan, rng, attempts);
    attempts_sum += double(attempts);
  }
  double mean_attempts = attempts_sum / double(n);
  CHECK(mean_attempts == doctest::Approx(1.0 / (1.0 - p_reject)).epsilon(0.01));
}

TEST_CASE("sampler hits the retry cap when it only rejects") {
  ClusteredHamiltonian ham = two_site_model();
  HamsimOptions opt;
  opt.r_override = 1;
  opt.retry_cap = 1;
  HamsimPlan plan = make_plan(ham, 1.0, 0.05, opt);
  RngStream rng(3);
  bool threw = false;
  try {
    for (std::size_t i = 0; i < 10000; ++i) (void)sample_plan_setting(plan, rng);
  } catch (const RetryCapError&) {
    threw = true;
  }
  CHECK(threw);
}

TEST_CASE("assembled circuits stay on their own side") {
  ClusteredHamiltonian ham = two_site_model();
  HamsimOptions opt;
  opt.r_override = 2;
  HamsimPlan plan = make_plan(ham, 1.0, 0.05, opt);
  RngStream rng(5);
  for (int rep = 0; rep < 4; ++rep) {
    PlanSetting s = sample_plan_setting(plan, rng);
    DoubleHadamardCircuit c = assemble_local_circuits(plan, s);
    for (const GateOp& g : c.gates) {
      bool on_a = false, on_b = false;
      auto mark = [&](std::size_t w) { (w <= plan.layout.ra() ? on_a : on_b) = true; };
      for (std::size_t w : g.targets) mark(w);
      if (g.control) mark(*g.control);
      CHECK_FALSE((on_a && on_b));
    }
    StateVector st(plan.layout.total());
    apply_circuit_in_place(st, c.gates);  // validates unitarity of every gate
    CHECK(std::abs(st.norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("assembled circuit setting packs the branch bits") {
  ClusteredHamiltonian ham = two_site_model();
  HamsimOptions opt;
  opt.r_override = 3;
  HamsimPlan plan = make_plan(ham, 1.0, 0.05, opt);
  PlanSetting s;
  s.x = {1, 0, 1};
  s.y = {0, 0, 1};
  s.g = 1;
  DoubleHadamardCircuit c = assemble_local_circuits(plan, s);
  CHECK(c.setting.i == 0b101);
  CHECK(c.setting.j == 0b100);
  CHECK(c.setting.g == 1);
}

TEST_CASE("estimate agrees with the dense Trotter oracle") {
  ClusteredHamiltonian ham = two_site_model();
  const double t = 1.0;
  const std::size_t r = 6;

  // dense reference in standard wire order (wire 0 = low bit)
  ComplexMatrix z0 = kron(pauli_i(), pauli_z());
  ComplexMatrix z1 = kron(pauli_z(), pauli_i());
  ComplexMatrix xx = kron(pauli_x(), pauli_x());
  double dt = t / double(r);
  ComplexMatrix step = rot(xx, 0.4 * dt) * rot(z1, dt) * rot(z0, dt);
  ComplexMatrix tr = ComplexMatrix::identity(4);
  for (std::size_t k = 0; k < r; ++k) tr = step * tr;
  ComplexMatrix plus = ComplexMatrix::zero(4, 1);
  for (std::size_t i = 0; i < 4; ++i) plus(i, 0) = 0.5;
  ComplexMatrix evolved = tr * plus;
  ComplexMatrix zz = kron(pauli_z(), pauli_z());
  double target = (evolved.adjoint() * (zz * evolved))(0, 0).real();

  Circuit prep = {{hadamard(), {0}, std::nullopt, "h"}, {hadamard(), {1}, std::nullopt, "h"}};
  Observable x = Observable::pauli("ZZ", {0, 1});
  HamsimOptions opt;
  opt.r_override = r;

  RngStream rng1(123);
  HamsimEstimate e1 = hamsim_estimate(ham, prep, x, t, 0.05, 50000, rng1, opt);
  CHECK(std::abs(e1.est.mean - target) < 5.0 * e1.est.std_error);
  CHECK(e1.r == r);
  CHECK(e1.eta == doctest::Approx(0.4).epsilon(1e-15));
  // population variance obeys the envelope bound exactly
  double popvar =
      e1.est.empirical_variance * double(e1.est.trials - 1) / double(e1.est.trials);
  CHECK(popvar <= e1.est.one_norm * e1.est.one_norm + 1e-9);

  // conditional mean: same expectation, smaller spread
  opt.conditional_mean = true;
  RngStream rng2(123);
  HamsimEstimate e2 = hamsim_estimate(ham, prep, x, t, 0.05, 20000, rng2, opt);
  CHECK(std::abs(e2.est.mean - target) < 5.0 * e2.est.std_error);
  CHECK(e2.est.empirical_variance < e1.est.empirical_variance);

  // t = 0 reduces to Tr(X rho) with unit one-norm; <++|ZZ|++> = 0
  RngStream rng3(9);
  HamsimEstimate e0 = hamsim_estimate(ham, prep, x, 0.0, 0.05, 2000, rng3, opt);
  CHECK(std::abs(e0.est.mean) < 1e-12);
  CHECK(e0.est.one_norm == doctest::Approx(1.0).epsilon(1e-15));

  // thread count never changes the result
  HamsimOptions opt4 = opt;
  opt4.threads = 4;
  RngStream rng4(123);
  HamsimEstimate e4 = hamsim_estimate(ham, prep, x, t, 0.05, 20000, rng4, opt4);
  CHECK(e4.est.mean == e2.est.mean);
  CHECK(e4.est.empirical_variance == e2.est.empirical_variance);
}

TEST_CASE("boundary-free models are sampled exactly") {
  std::vector<PauliTerm> local = {{0.7, {{0, 'Z'}}}, {0.3, {{1, 'X'}}}};
  ClusteredHamiltonian ham = classify(local, 2, {{0}, {1}});
  Circuit prep = {{hadamard(), {0}, std::nullopt, "h"}};
  Observable x = Observable::pauli("X", {0});
  HamsimOptions opt;
  opt.r_override = 8;
  opt.conditional_mean = true;
  RngStream rng(2);
  HamsimEstimate e = hamsim_estimate(ham, prep, x, 0.9, 0.05, 64, rng, opt);
  // <+| e^{+iZs} X e^{-iZs} |+> with s = 0.7 * 0.9; Trotterization of a
  // single-term side is exact
  CHECK(e.est.one_norm == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(e.est.mean == doctest::Approx(std::cos(2.0 * 0.7 * 0.9)).epsilon(1e-10));
  CHECK(e.est.empirical_variance < 1e-12);
}

TEST_CASE("fused evolution matches the assembled gate list") {
  // The estimator fuses branch selections into matrix applications and drops
  // uncontrolled scalar phases; the assembled circuit keeps every factor.
  // Replaying the same trial stream through the assembled gates must give the
  // same conditional means.
  ClusteredHamiltonian ham = two_site_model();
  const double t = 1.0;
  HamsimOptions opt;
  opt.r_override = 3;
  opt.conditional_mean = true;
  HamsimPlan plan = make_plan(ham, t, 0.05, opt);

  // Hamiltonian wire -> layout wire: cluster A packs low, B above its ancilla
  std::vector<std::size_t> wire_map(ham.n_qubits);
  for (std::size_t p = 0; p < ham.partition.a.size(); ++p) wire_map[ham.partition.a[p]] = p;
  for (std::size_t q = 0; q < ham.partition.b.size(); ++q)
    wire_map[ham.partition.b[q]] = plan.layout.na + 1 + q;

  Circuit prep = {{hadamard(), {0}, std::nullopt, "h"}, {hadamard(), {1}, std::nullopt, "h"}};
  Circuit prep_mapped = prep;
  for (GateOp& g : prep_mapped)
    for (std::size_t& w : g.targets) w = wire_map[w];
  Observable x = Observable::pauli("ZZ", {0, 1});
  Observable x_mapped = x;
  for (std::size_t& w : x_mapped.targets) w = wire_map[w];

  auto assembled_value = [&](const PlanSetting& s) {
    StateVector st(plan.layout.total());
    for (const GateOp& g : prep_mapped)
      apply_matrix_in_place(st, g.matrix, g.targets, g.control);
    DoubleHadamardCircuit c = assemble_local_circuits(plan, s);
    apply_circuit_in_place(st, c.gates);
    StateVector xs = apply_observable_operator(st, x_mapped);
    apply_matrix_in_place(st, pauli_z(), {plan.layout.ra()});
    apply_matrix_in_place(st, pauli_z(), {plan.layout.rb()});
    double e = inner_product(st, xs).real();
    return (s.g ? -plan.phi : plan.phi) * e;
  };

  const std::size_t trials = 4096;
  RngStream seed_a(123);
  std::uint64_t base_seed = seed_a.raw();
  TrialStats mirror = run_chunked_trials(
      trials, 1, base_seed, [&](std::size_t, RngStream& trial_rng) {
        return assembled_value(sample_plan_setting(plan, trial_rng));
      });

  RngStream seed_b(123);
  HamsimEstimate fused = hamsim_estimate(ham, prep, x, t, 0.05, trials, seed_b, opt);
  CHECK(std::abs(fused.est.mean - mirror.mean) < 1e-9);
  CHECK(std::abs(fused.est.empirical_variance - mirror.variance) < 1e-9);
}

TEST_CASE("observables must respect the cut") {
  ClusteredHamiltonian ham = two_site_model();
  Circuit prep;
  HamsimOptions opt;
  opt.r_override = 1;

  // projector on a single side is fine
  ComplexMatrix zero_col = ComplexMatrix::zero(2, 1);
  zero_col(0, 0) = 1.0;
  Observable proj = Observable::projector(zero_col, {0});
  RngStream rng(1);
  CHECK_NOTHROW((void)hamsim_estimate(ham, prep, proj, 0.1, 0.5, 100, rng, opt));

  // Pauli strings may span the cut
  Observable zz = Observable::pauli("ZZ", {0, 1});
  RngStream rng2(1);
  CHECK_NOTHROW((void)hamsim_estimate(ham, prep, zz, 0.1, 0.5, 100, rng2, opt));

  // a dense block across the cut has no local factorization
  Observable dense2 = Observable::dense(kron(pauli_z(), pauli_z()), {0, 1});
  RngStream rng3(1);
  CHECK_THROWS_AS((void)hamsim_estimate(ham, prep, dense2, 0.1, 0.5, 100, rng3, opt),
                  std::invalid_argument);
}

TEST_CASE("dump sink sees at most dump_limit assembled circuits") {
  ClusteredHamiltonian ham = two_site_model();
  Circuit prep;
  Observable x = Observable::pauli("Z", {0});
  HamsimOptions opt;
  opt.r_override = 2;
  opt.dump_limit = 3;
  std::size_t seen = 0;
  opt.dump_sink = [&](const DoubleHadamardCircuit& c) {
    ++seen;
    CHECK((c.setting.g == 0 || c.setting.g == 1));
    CHECK_FALSE(c.gates.empty());
  };
  RngStream rng(4);
  (void)hamsim_estimate(ham, prep, x, 0.5, 0.5, 100, rng, opt);
  CHECK(seen == 3);
}

TEST_CASE("hamiltonian files parse with wires and clusters intact") {
  std::string text =
      "# transverse-field Ising, 2+2 wires\n"
      "qubits 4\n"
      "partition A: 0, 1\n"
      "\n"
      "-1.0 Z@0 Z@1   # interior A\n"
      "-1.0 Z@2 Z@3\n"
      "0.2 X@1 X@2    # boundary\n"
      "0.3 X@0\n";
  ParsedHamiltonian p = parse_hamiltonian(text);
  CHECK(p.n_qubits == 4);
  CHECK(p.cluster_a == std::vector<std::size_t>{0, 1});
  REQUIRE(p.terms.size() == 4);
  CHECK(p.terms[2].coefficient == doctest::Approx(0.2).epsilon(1e-15));
  REQUIRE(p.terms[2].paulis.size() == 2);
  CHECK(p.terms[2].paulis[0].first == 1);
  CHECK(p.terms[2].paulis[1].first == 2);
  CHECK(p.terms[2].paulis[0].second == 'X');
}

TEST_CASE("hamiltonian parse errors carry line numbers") {
  auto expect_line = [](const std::string& bad, const char* needle) {
    try {
      (void)parse_hamiltonian(bad);
      FAIL_CHECK("accepted: " << bad);
    } catch (const ConfigError& e) {
      std::string what = e.what();
      CHECK(what.find("line") != std::string::npos);
      CHECK(what.find(needle) != std::string::npos);
    }
  };
  expect_line("qubits 2\npartition A: 0\n1.5 X@0\n", "coefficient");
  expect_line("qubits 2\npartition A: 0\n0.5 Q@0\n", "Pauli letter");
  expect_line("qubits 2\npartition A: 0,1\n0.5 X@0\n", "cluster B");
  expect_line("qubits 2\n0.5 X@0\n", "before qubits/partition");
}
