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
// Release gate: ten numbered end-to-end checks, one verdict line each.
// Every oracle here is dense linear algebra built independently of the
// samplers it judges. All seeds are fixed; reruns are byte-identical.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qcut/decomposition.hpp"
#include "qcut/errors.hpp"
#include "qcut/hamsim.hpp"
#include "qcut/matrix.hpp"
#include "qcut/montecarlo.hpp"
#include "qcut/rng.hpp"
#include "qcut/spacecut.hpp"
#include "qcut/statevector.hpp"
#include "qcut/svd.hpp"
#include "qcut/timecut.hpp"
#include "qcut/verify.hpp"

using namespace qcut;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int num, bool pass, const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  std::printf("[%s] criterion %2d: %s\n", pass ? "PASS" : "FAIL", num, buf);
  std::fflush(stdout);
  if (!pass) ++failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

ComplexMatrix haar_unitary(std::size_t d, RngStream& rng) {
  ComplexMatrix g = ComplexMatrix::zero(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  return svd(g).u;
}

double frob_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s += std::norm(a(i, j) - b(i, j));
  return std::sqrt(s);
}

double frob_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// Transverse-field Ising on 2+2 qubits; eta scales the single crossing term.
ClusteredHamiltonian tfi(double eta) {
  std::vector<PauliTerm> terms = {
      {-1.0, {{0, 'Z'}, {1, 'Z'}}}, {-1.0, {{2, 'Z'}, {3, 'Z'}}}, {-0.5, {{0, 'X'}}},
      {-0.5, {{1, 'X'}}},           {-0.5, {{2, 'X'}}},           {-0.5, {{3, 'X'}}},
      {eta, {{1, 'Z'}, {2, 'Z'}}}};
  return classify(terms, 4, {{0, 1}, {2, 3}});
}

// Cuts created along the way; criterion 10 audits every one of them against
// the robustness lower bound.
std::vector<std::pair<LocalDecomposition, ComplexMatrix>> generated_cuts;

// --- criterion 1: Choi reconstruction of sampled cut circuits ---

void criterion_1() {
  auto t0 = Clock::now();
  std::vector<std::pair<LocalDecomposition, ComplexMatrix>> cases;
  cases.emplace_back(pauli_decomposition(cnot_matrix(), {2, 2}), cnot_matrix());
  for (double theta : {M_PI / 16.0, M_PI / 8.0, M_PI / 4.0})
    cases.emplace_back(pauli_decomposition(zz_matrix(theta), {2, 2}), zz_matrix(theta));
  RngStream rng(101);
  ComplexMatrix ur = haar_unitary(4, rng);
  cases.emplace_back(pauli_decomposition(ur, {2, 2}), ur);

  // transversal 3 (x) 3 qubit gate: three different two-qubit gates applied
  // across the cut in parallel
  LocalDecomposition g3 = tensor_combine(
      tensor_combine(pauli_decomposition(zz_matrix(M_PI / 8.0), {2, 2}),
                     pauli_decomposition(cnot_matrix(), {2, 2})),
      pauli_decomposition(zz_matrix(M_PI / 4.0), {2, 2}));
  ComplexMatrix u3 = kron(kron(zz_matrix(M_PI / 8.0), cnot_matrix()), zz_matrix(M_PI / 4.0));
  // regroup (A1 B1)(A2 B2)(A3 B3) -> (A1 A2 A3)(B1 B2 B3)
  ComplexMatrix perm = permutation_operator({0, 3, 1, 4, 2, 5}, {2, 2, 2, 2, 2, 2});
  ComplexMatrix target3 = perm.adjoint() * u3 * perm;
  cases.emplace_back(g3, target3);

  double worst = 0.0;
  for (const auto& [gamma, target] : cases) {
    ComplexMatrix j = reconstruct_choi(gamma, gamma.shape);
    double r = choi_residual_vs_unitary(j, target);
    if (r > worst) worst = r;
    generated_cuts.emplace_back(gamma, target);
  }
  double dt = seconds_since(t0);
  report(1, worst <= 1e-9 && dt <= 10.0,
         "reconstructed Choi residual max %.2e over %zu cuts (limit 1e-9) in %.1f s (limit 10)",
         worst, cases.size(), dt);
}

// --- criterion 2: entanglement measures through two independent routes ---

double schmidt_route_robustness(const ComplexMatrix& u, const BipartiteShape& shape) {
  SchmidtDecomposition sd = operator_schmidt(u, shape);
  double s = 0.0;
  for (double lam : sd.coefficients) s += lam;
  return 2.0 * s * s - 1.0;
}

void criterion_2() {
  double worst = 0.0;
  auto check = [&](double got, double want) {
    double d = std::abs(got - want);
    if (d > worst) worst = d;
  };

  ExtentResult xc = product_extent_schmidt(cnot_matrix(), {2, 2});
  bool certified = xc.certified;
  check(xc.value, 3.0);
  check(choi_robustness(cnot_matrix(), {2, 2}), 3.0);
  check(schmidt_route_robustness(cnot_matrix(), {2, 2}), 3.0);

  check(choi_robustness(swap_matrix(), {2, 2}), 7.0);
  check(schmidt_route_robustness(swap_matrix(), {2, 2}), 7.0);

  for (double theta : {M_PI / 16.0, M_PI / 8.0, M_PI / 4.0}) {
    double want = 1.0 + 2.0 * std::abs(std::sin(2.0 * theta));
    ExtentResult xz = product_extent_schmidt(zz_matrix(theta), {2, 2});
    certified = certified && xz.certified;
    check(xz.value, want);
    check(choi_robustness(zz_matrix(theta), {2, 2}), want);
    check(schmidt_route_robustness(zz_matrix(theta), {2, 2}), want);
  }
  report(2, worst <= 1e-8 && certified,
         "xi/Rc closed forms: max deviation %.2e over both routes (limit 1e-8), certified=%s",
         worst, certified ? "yes" : "no");
}

// --- criterion 3: unbiased estimates with capped variance, random instances ---

void criterion_3() {
  RngStream gen(0xC3);
  double worst_pull = 0.0, worst_var_ratio = 0.0;
  bool envelope_ok = true;
  const std::size_t kTrials = 100000;
  const std::size_t kEnvelopeTrials = 5000;

  for (int inst = 0; inst < 50; ++inst) {
    ComplexMatrix u = haar_unitary(16, gen);
    LocalDecomposition gamma = pauli_decomposition(u, {4, 4});

    Circuit prep = {{haar_unitary(4, gen), {0, 1}, std::nullopt, "u4"},
                    {haar_unitary(4, gen), {2, 3}, std::nullopt, "u4"},
                    {haar_unitary(4, gen), {1, 2}, std::nullopt, "u4"}};

    // random non-identity Pauli string over the four data wires
    std::string letters;
    std::vector<std::size_t> targets;
    while (targets.empty()) {
      letters.clear();
      targets.clear();
      for (std::size_t w = 0; w < 4; ++w) {
        std::size_t pick = gen.uniform_index(4);
        if (pick == 0) continue;
        letters.push_back("XYZ"[pick - 1]);
        targets.push_back(w);
      }
    }
    Observable x = Observable::pauli(letters, targets);

    // dense oracle, independent of the sampler kernels: regroup the A-major
    // bipartite matrix to state bit order (A cluster on the low wires)
    ComplexMatrix regroup = permutation_operator({1, 0}, {4, 4});
    ComplexMatrix u_state = regroup * u * regroup.adjoint();
    ComplexMatrix psi = dense_circuit_unitary(prep, 4);
    ComplexMatrix psi0 = ComplexMatrix::zero(16, 1);
    for (std::size_t k = 0; k < 16; ++k) psi0(k, 0) = psi(k, 0);
    ComplexMatrix evolved = u_state * psi0;
    ComplexMatrix xd = dense_observable(x, 4);
    double oracle = (evolved.adjoint() * (xd * evolved))(0, 0).real();

    RngStream est_rng(5000 + std::uint64_t(inst));
    CutEstimate est = estimate(gamma, {4, 4}, prep, x, kTrials, est_rng);
    double pull = std::abs(est.mean - oracle) / est.std_error;
    if (pull > worst_pull) worst_pull = pull;

    double phi = magnitude(gamma);
    double popvar = est.empirical_variance * double(est.trials - 1) / double(est.trials);
    double ratio = popvar / (phi * phi);
    if (ratio > worst_var_ratio) worst_var_ratio = ratio;

    RngStream env_rng(9000 + std::uint64_t(inst));
    for (std::size_t k = 0; k < kEnvelopeTrials; ++k) {
      double v = run_trial(gamma, {4, 4}, prep, x, env_rng);
      if (!(std::abs(v) <= phi)) envelope_ok = false;
    }
    generated_cuts.emplace_back(std::move(gamma), std::move(u));
  }
  report(3, worst_pull <= 5.0 && worst_var_ratio <= 1.0 + 1e-9 && envelope_ok,
         "50 random instances at 1e5 trials: worst pull %.2f sigma (limit 5), "
         "worst variance/phi^2 %.4f (limit 1), trial envelope %s",
         worst_pull, worst_var_ratio, envelope_ok ? "exact" : "VIOLATED");
}

// --- criterion 4: conditional-difference equals the symmetrized cross term ---

void criterion_4() {
  std::vector<LocalDecomposition> gammas;
  gammas.push_back(pauli_decomposition(zz_matrix(M_PI / 8.0), {2, 2}));  // m = 2
  LocalDecomposition g3;
  g3.shape = {2, 2};
  g3.terms.push_back({0.5, pauli_i(), pauli_i()});
  g3.terms.push_back({0.3, pauli_x(), pauli_z()});
  g3.terms.push_back({0.2, pauli_y(), pauli_x()});  // m = 3, not unitary-valid
  gammas.push_back(g3);

  RngStream rng(0xC4);
  std::vector<Circuit> preps;
  preps.push_back({{hadamard(), {0}, std::nullopt, "h"}, {hadamard(), {1}, std::nullopt, "h"}});
  preps.push_back({{haar_unitary(4, rng), {0, 1}, std::nullopt, "u4"}});
  std::vector<Observable> xs;
  xs.push_back(Observable::pauli("YZ", {0, 1}));
  xs.push_back(Observable::pauli("XX", {0, 1}));

  double worst = 0.0;
  for (const LocalDecomposition& g : gammas)
    for (const Circuit& prep : preps)
      for (const Observable& x : xs)
        for (std::size_t i = 0; i < g.terms.size(); ++i)
          for (std::size_t j = 0; j < g.terms.size(); ++j) {
            double lhs = exact_conditional_difference(g, i, j, {2, 2}, prep, x);
            double rhs = cross_term_oracle(g, i, j, prep, x, {2, 2});
            double d = std::abs(lhs - rhs);
            if (d > worst) worst = d;
          }
  report(4, worst <= 1e-9,
         "conditional-difference vs cross term: max |lhs-rhs| %.2e over m=2,3 full "
         "enumeration (limit 1e-9)",
         worst);
}

// --- criterion 5: clustered simulation against the dense exponential ---

void criterion_5() {
  auto t0 = Clock::now();
  const double t = 1.0, eps = 0.05;
  Circuit prep;
  for (std::size_t w = 0; w < 4; ++w) prep.push_back({hadamard(), {w}, std::nullopt, "h"});
  Observable x = Observable::pauli("ZZ", {1, 2});

  bool phi_ok = true, closed_ok = true, reps_ok = true, time_ok = true;
  std::string tally;
  char buf[64];

  for (double eta : {0.1, 0.2, 0.4}) {
    ClusteredHamiltonian ham = tfi(eta);
    ComplexMatrix u = dense_evolution(ham, t);
    ComplexMatrix psi0 = ComplexMatrix::zero(16, 1);
    for (std::size_t k = 0; k < 16; ++k) psi0(k, 0) = 0.25;
    ComplexMatrix evolved = u * psi0;
    ComplexMatrix xd = dense_observable(x, 4);
    double oracle = (evolved.adjoint() * (xd * evolved))(0, 0).real();

    const std::size_t trials = std::size_t(std::ceil(12.0 * std::exp(8.0 * eta * t) / (eps * eps)));
    HamsimOptions opt;
    opt.r_override = 256;  // Trotter error well under eps/4 for every eta here

    int hits = 0;
    for (int rep = 0; rep < 20; ++rep) {
      RngStream rng(7000 + std::uint64_t(rep));
      HamsimEstimate e = hamsim_estimate(ham, prep, x, t, eps, trials, rng, opt);
      if (std::abs(e.est.mean - oracle) <= eps) ++hits;
      if (e.est.one_norm > std::exp(4.0 * eta * t) + 1e-12) phi_ok = false;
    }
    if (hits < 18) reps_ok = false;
    std::snprintf(buf, sizeof buf, "%seta=%.1f %d/20", tally.empty() ? "" : ", ", eta, hits);
    tally += buf;

    for (std::size_t r : {std::size_t(1), std::size_t(2)}) {
      HamsimOptions ro;
      ro.r_override = r;
      HamsimPlan plan = make_plan(ham, t, eps, ro);
      double expanded = magnitude(expanded_plan_decomposition(plan));
      if (std::abs(plan.phi - expanded) > 1e-12 * std::max(1.0, expanded)) closed_ok = false;
    }
  }
  double dt = seconds_since(t0);
  time_ok = dt <= 300.0;
  report(5, phi_ok && closed_ok && reps_ok && time_ok,
         "within-eps hits %s (need 18/20), phi<=e^{4 eta t} %s, closed-vs-expanded phi %s, "
         "%.0f s (limit 300)",
         tally.c_str(), phi_ok ? "yes" : "NO", closed_ok ? "1e-12" : "VIOLATED", dt);
}

// --- criterion 6: sampler laws at one million draws ---

void criterion_6() {
  bool ok = true;
  double worst_tv = 0.0, worst_rej = 0.0;
  const std::size_t kDraws = 1000000;

  // gate-cut setting sampler at m = 2 and m = 3
  std::vector<LocalDecomposition> gammas;
  gammas.push_back(pauli_decomposition(zz_matrix(M_PI / 8.0), {2, 2}));
  LocalDecomposition g3;
  g3.shape = {2, 2};
  g3.terms.push_back({0.5, pauli_i(), pauli_i()});
  g3.terms.push_back({0.3, pauli_x(), pauli_z()});
  g3.terms.push_back({0.2, pauli_y(), pauli_x()});
  gammas.push_back(g3);

  std::uint64_t seed = 600;
  for (const LocalDecomposition& g : gammas) {
    const std::size_t m = g.terms.size();
    std::vector<double> want = spacecut_distribution(g);
    std::vector<std::size_t> got(want.size(), 0);
    RngStream rng(seed++);
    std::size_t attempts_total = 0;
    for (std::size_t k = 0; k < kDraws; ++k) {
      std::size_t attempts = 0;
      SettingSample s = sample_setting(g, rng, attempts);
      attempts_total += attempts;
      got[(std::size_t(s.i) * m + std::size_t(s.j)) * 2 + std::size_t(s.g)]++;
    }
    double tv = 0.0;
    for (std::size_t c = 0; c < want.size(); ++c)
      tv += std::abs(want[c] - double(got[c]) / double(kDraws));
    tv /= 2.0;
    if (tv > worst_tv) worst_tv = tv;
    double rej = 1.0 - double(kDraws) / double(attempts_total);
    double rej_gap = std::abs(rej - spacecut_rejection_rate(g));
    if (rej_gap > worst_rej) worst_rej = rej_gap;
  }

  // plan sampler, r = 1 with a two-term boundary
  std::vector<PauliTerm> terms = {{-0.5, {{0, 'X'}}},
                                  {-0.5, {{3, 'X'}}},
                                  {0.3, {{1, 'Z'}, {2, 'Z'}}},
                                  {0.2, {{1, 'X'}, {2, 'X'}}}};
  ClusteredHamiltonian ham = classify(terms, 4, {{0, 1}, {2, 3}});
  HamsimOptions opt;
  opt.r_override = 1;
  HamsimPlan plan = make_plan(ham, 1.0, 0.05, opt);
  std::vector<double> want = plan_distribution(plan);
  std::vector<std::size_t> got(want.size(), 0);
  RngStream rng(777);
  std::size_t attempts_total = 0;
  for (std::size_t k = 0; k < kDraws; ++k) {
    std::size_t attempts = 0;
    PlanSetting s = sample_plan_setting(plan, rng, attempts);
    attempts_total += attempts;
    std::size_t xb = 0, yb = 0;
    for (std::size_t b = 0; b < s.x.size(); ++b) {
      xb |= std::size_t(s.x[b]) << b;
      yb |= std::size_t(s.y[b]) << b;
    }
    got[(xb * 4 + yb) * 2 + std::size_t(s.g)]++;
  }
  double tv = 0.0;
  for (std::size_t c = 0; c < want.size(); ++c)
    tv += std::abs(want[c] - double(got[c]) / double(kDraws));
  tv /= 2.0;
  if (tv > worst_tv) worst_tv = tv;
  double rej_gap =
      std::abs(1.0 - double(kDraws) / double(attempts_total) - plan_rejection_rate(plan));
  if (rej_gap > worst_rej) worst_rej = rej_gap;

  ok = worst_tv <= 0.005 && worst_rej <= 0.005;
  report(6, ok,
         "PMFs at 1e6 draws: worst TV %.4f (limit 0.005), worst rejection-rate gap %.4f "
         "(limit 0.005)",
         worst_tv, worst_rej);
}

// --- criterion 7: wire-cut identity, analytic and sampled ---

void criterion_7() {
  double worst_analytic = 0.0;
  for (std::size_t d : {std::size_t(2), std::size_t(4), std::size_t(8)}) {
    ComplexMatrix resid = choi_m0_analytic(d) * Complex(double(d), 0.0);
    resid -= choi_m1_analytic(d) * Complex(double(d - 1), 0.0);
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) resid(r * d + r, c * d + c) -= 1.0 / double(d);
    double f = frob_norm(resid);
    if (f > worst_analytic) worst_analytic = f;
  }

  // Monte Carlo Chois on one cut qubit at 1e6 shots
  auto mc = [](bool m0, std::uint64_t seed) {
    RngStream rng(seed);
    ComplexMatrix acc = ComplexMatrix::zero(4, 4);
    const std::size_t shots = 1000000;
    for (std::size_t k = 0; k < shots; ++k) {
      std::vector<Complex> amps = {Complex(1.0 / std::sqrt(2.0), 0.0), Complex(0.0, 0.0),
                                   Complex(0.0, 0.0), Complex(1.0 / std::sqrt(2.0), 0.0)};
      StateVector st = StateVector::from_amplitudes(amps);
      if (m0)
        (void)apply_M0(st, {0}, rng);
      else
        (void)apply_M1(st, {0}, rng);
      acc += density_matrix(st);
    }
    return acc * Complex(1e-6, 0.0);
  };
  double mc0 = frob_diff(mc(true, 701), choi_m0_analytic(2));
  double mc1 = frob_diff(mc(false, 702), choi_m1_analytic(2));

  report(7, worst_analytic <= 1e-12 && mc0 <= 0.02 && mc1 <= 0.02,
         "identity-channel residual max %.2e (limit 1e-12); MC Chois at 1e6 shots off by "
         "%.4f / %.4f (limit 0.02)",
         worst_analytic, mc0, mc1);
}

// --- criterion 8: variance growth with the cut dimension ---

void criterion_8() {
  std::vector<double> log_d, log_var;
  bool caps_ok = true;
  double worst_cap_ratio = 0.0;
  const std::size_t kTrials = 300000;

  for (std::size_t n = 1; n <= 4; ++n) {
    const std::size_t d = std::size_t(1) << n;
    const double cap = double(2 * d - 1) * double(2 * d - 1);
    std::vector<std::size_t> cut(n);
    for (std::size_t k = 0; k < n; ++k) cut[k] = k;
    Circuit prep = {{hadamard(), {0}, std::nullopt, "h"}};

    // rank-1 observable: projector onto |0...0> of the cut register
    ComplexMatrix e0 = ComplexMatrix::zero(d, 1);
    e0(0, 0) = 1.0;
    Observable x1 = Observable::projector(e0, cut);
    RngStream rng(800 + n);
    TimecutEstimate est = timecut_estimate(prep, n, cut, x1, kTrials, rng);
    double popvar = est.empirical_variance * double(est.trials - 1) / double(est.trials);
    log_d.push_back(std::log(double(d)));
    log_var.push_back(std::log(popvar));
    double ratio = popvar / cap;
    if (ratio > worst_cap_ratio) worst_cap_ratio = ratio;
    if (popvar > cap + 1e-9) caps_ok = false;

    // full-rank observable: identity on the cut register
    Observable xf = Observable::dense(ComplexMatrix::identity(d), cut);
    RngStream rng2(900 + n);
    TimecutEstimate ef = timecut_estimate(prep, n, cut, xf, 50000, rng2);
    double popvar_f = ef.empirical_variance * double(ef.trials - 1) / double(ef.trials);
    if (popvar_f > cap + 1e-9) caps_ok = false;
    double ratio_f = popvar_f / cap;
    if (ratio_f > worst_cap_ratio) worst_cap_ratio = ratio_f;
  }

  // least-squares slope of log(var) against log(d)
  double xm = 0.0, ym = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    xm += log_d[k];
    ym += log_var[k];
  }
  xm /= 4.0;
  ym /= 4.0;
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    num += (log_d[k] - xm) * (log_var[k] - ym);
    den += (log_d[k] - xm) * (log_d[k] - xm);
  }
  double slope = num / den;

  report(8, slope >= 0.8 && slope <= 1.2 && caps_ok,
         "rank-1 variance power law: slope %.3f over d_A in {2,4,8,16} (band [0.8, 1.2]); "
         "variance caps respected (max var/cap %.3f)",
         slope, worst_cap_ratio);
}

// --- criterion 9: optimal separable pair construction ---

void criterion_9() {
  RngStream rng(0xC9);

  // Bell pair: analytic route and sampled route
  ComplexMatrix bell = ComplexMatrix::zero(4, 1);
  bell(0, 0) = 1.0 / std::sqrt(2.0);
  bell(3, 0) = 1.0 / std::sqrt(2.0);
  SeparablePair bp = optimal_separable_pair(bell, {2, 2}, rng);
  double analytic = frob_diff(sigma_plus_phase_moments(bell, {2, 2}), bp.sigma_plus_exact);

  auto sampled_gap = [&](const SeparablePair& pair, std::size_t dim) {
    ComplexMatrix acc = ComplexMatrix::zero(dim, dim);
    const std::size_t kSamples = 100000;
    for (std::size_t k = 0; k < kSamples; ++k) {
      auto [s, t] = pair.sample_product();
      ComplexMatrix prod = kron(s, t);
      acc += prod * prod.adjoint();
    }
    acc = acc * Complex(1.0 / double(kSamples), 0.0);
    return frob_diff(acc, pair.sigma_plus_exact);
  };
  double bell_gap = sampled_gap(bp, 4);

  // random pure state on a pair of 3-level systems
  ComplexMatrix psi9 = ComplexMatrix::zero(9, 1);
  double nrm = 0.0;
  for (std::size_t k = 0; k < 9; ++k) {
    psi9(k, 0) = Complex(rng.normal(), rng.normal());
    nrm += std::norm(psi9(k, 0));
  }
  psi9 = psi9 * Complex(1.0 / std::sqrt(nrm), 0.0);
  SeparablePair p9 = optimal_separable_pair(psi9, {3, 3}, rng);
  double qutrit_gap = sampled_gap(p9, 9);
  double qutrit_analytic = frob_diff(sigma_plus_phase_moments(psi9, {3, 3}), p9.sigma_plus_exact);

  report(9, analytic <= 1e-9 && bell_gap <= 0.01 && qutrit_gap <= 0.01 && qutrit_analytic <= 1e-9,
         "sigma_plus: analytic gap %.1e (limit 1e-9); sampled mean at 1e5 draws off by "
         "%.4f (Bell) / %.4f (3-level) (limit 0.01)",
         std::max(analytic, qutrit_analytic), bell_gap, qutrit_gap);
}

// --- criterion 10: property suites ---

void criterion_10() {
  RngStream rng(0xC10);
  bool ok = true;
  std::string why;

  // submultiplicativity over 500 certified random pairs, strict when both
  // factors are entangling
  int pairs = 0, strict_checked = 0, attempts = 0;
  double worst_excess = -1e300;
  while (pairs < 500 && attempts < 2000) {
    ++attempts;
    ComplexMatrix u1 = haar_unitary(4, rng), u2 = haar_unitary(4, rng);
    ExtentResult e1 = product_extent_schmidt(u1, {2, 2});
    ExtentResult e2 = product_extent_schmidt(u2, {2, 2});
    if (!e1.certified || !e2.certified || !e1.certificate || !e2.certificate) continue;
    LocalDecomposition gp = product(*e1.certificate, *e2.certificate);
    ComplexMatrix u12 = u1 * u2;
    if (validity_residual(gp, u12) > 1e-8) {
      ok = false;
      why = "product decomposition invalid";
    }
    double phi_p = magnitude(gp);
    double bound = e1.value * e2.value;
    if (phi_p - bound > worst_excess) worst_excess = phi_p - bound;
    if (phi_p > bound + 1e-8) {
      ok = false;
      why = "submultiplicativity violated";
    }
    if (e1.value > 1.0 + 1e-6 && e2.value > 1.0 + 1e-6) {
      ++strict_checked;
      if (!(phi_p < bound - 1e-9)) {
        ok = false;
        why = "strictness violated";
      }
    }
    ExtentResult ep = product_extent_schmidt(u12, {2, 2});
    if (ep.certified && ep.value > phi_p + 1e-8) {
      ok = false;
      why = "composed extent above its certificate";
    }
    if (pairs % 25 == 0) generated_cuts.emplace_back(gp, u12);
    ++pairs;
  }
  if (pairs < 500) {
    ok = false;
    why = "not enough certified pairs";
  }

  // local-unitary invariance of the robustness measure
  double worst_lu = 0.0;
  for (int k = 0; k < 20; ++k) {
    ComplexMatrix u = haar_unitary(4, rng);
    ComplexMatrix left = kron(haar_unitary(2, rng), haar_unitary(2, rng));
    ComplexMatrix right = kron(haar_unitary(2, rng), haar_unitary(2, rng));
    double gap = std::abs(choi_robustness(left * u * right, {2, 2}) -
                          choi_robustness(u, {2, 2}));
    if (gap > worst_lu) worst_lu = gap;
  }
  if (worst_lu > 1e-8) {
    ok = false;
    why = "local-unitary invariance broken";
  }

  // robustness lower bound audited on every cut generated above
  std::size_t audited = 0;
  for (const auto& [gamma, target] : generated_cuts) {
    OracleReport r = robustness_inequality_audit(gamma, target);
    if (!r.pass) {
      ok = false;
      why = "robustness audit failed on " + std::to_string(audited);
    }
    ++audited;
  }

  // byte-identical reruns of both estimators
  {
    LocalDecomposition g = pauli_decomposition(zz_matrix(M_PI / 8.0), {2, 2});
    Circuit prep = {{hadamard(), {0}, std::nullopt, "h"}};
    Observable x = Observable::pauli("X", {0});
    RngStream ra(424242), rb(424242);
    CutEstimate ea = estimate(g, {2, 2}, prep, x, 20000, ra);
    CutEstimate eb = estimate(g, {2, 2}, prep, x, 20000, rb);
    EstimateOptions threaded;
    threaded.threads = 4;
    RngStream rc(424242);
    CutEstimate ec = estimate(g, {2, 2}, prep, x, 20000, rc, threaded);
    if (ea.mean != eb.mean || ea.empirical_variance != eb.empirical_variance ||
        ea.mean != ec.mean || ea.empirical_variance != ec.empirical_variance) {
      ok = false;
      why = "estimate rerun not byte-identical";
    }
    ClusteredHamiltonian ham = tfi(0.2);
    Observable zz = Observable::pauli("ZZ", {1, 2});
    Circuit hp;
    for (std::size_t w = 0; w < 4; ++w) hp.push_back({hadamard(), {w}, std::nullopt, "h"});
    HamsimOptions opt;
    opt.r_override = 8;
    RngStream h1(11), h2(11);
    HamsimEstimate ha = hamsim_estimate(ham, hp, zz, 1.0, 0.05, 20000, h1, opt);
    HamsimEstimate hb = hamsim_estimate(ham, hp, zz, 1.0, 0.05, 20000, h2, opt);
    if (ha.est.mean != hb.est.mean || ha.est.empirical_variance != hb.est.empirical_variance) {
      ok = false;
      why = "hamsim rerun not byte-identical";
    }
  }

  // norm preservation through assembled cut circuits
  {
    const auto& [g3, target3] = generated_cuts[5];  // the transversal cut from criterion 1
    (void)target3;
    RngStream nr(31);
    double worst_norm = 0.0;
    for (int k = 0; k < 50; ++k) {
      SettingSample s = sample_setting(g3, nr);
      DoubleHadamardCircuit c = build_circuit(g3, s, g3.shape);
      StateVector st(c.layout.total());
      for (std::size_t w = 0; w < c.layout.total(); ++w)
        if (nr.fair_bit()) apply_matrix_in_place(st, hadamard(), {w});
      apply_circuit_in_place(st, c.gates);
      double gap = std::abs(st.norm() - 1.0);
      if (gap > worst_norm) worst_norm = gap;
    }
    if (worst_norm > 1e-12) {
      ok = false;
      why = "assembled circuit broke normalization";
    }
  }

  // Born-rule frequencies
  {
    std::vector<Complex> amps = {Complex(std::sqrt(0.17), 0.0), Complex(0.0, std::sqrt(0.83))};
    RngStream br(51);
    const std::size_t shots = 100000;
    std::size_t ones = 0;
    for (std::size_t k = 0; k < shots; ++k) {
      StateVector st = StateVector::from_amplitudes(amps);
      ones += measure_in_place(st, {0}, br);
    }
    double expect1 = 0.83 * double(shots);
    double expect0 = 0.17 * double(shots);
    double chi2 = (double(ones) - expect1) * (double(ones) - expect1) / expect1 +
                  (double(shots - ones) - expect0) * (double(shots - ones) - expect0) / expect0;
    if (chi2 > 10.83) {  // 1 dof, p = 0.001
      ok = false;
      why = "Born-rule chi-square too large";
    }
  }

  report(10, ok,
         "submultiplicativity %d/500 pairs (worst excess %.1e, strict on %d), LU invariance "
         "%.1e, %zu cuts audited, reruns byte-identical, norms exact, Born chi2 ok%s%s",
         pairs, worst_excess, strict_checked, worst_lu, generated_cuts.size(),
         why.empty() ? "" : " -- ", why.c_str());
}

}  // namespace

int main() {
  auto t0 = Clock::now();
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  std::printf("acceptance: %d/10 criteria passed in %.0f s\n", 10 - failures,
              seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
