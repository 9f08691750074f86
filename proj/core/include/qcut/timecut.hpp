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
// Time-like wire cuts: the identity channel on a d-dimensional register is
// written as d*M0 - (d-1)*M1 with two physically implementable
// measure-and-prepare channels, giving a quasiprobability protocol with
// 1-norm 2d - 1.

#pragma once

#include <cstdint>
#include <vector>

#include "qcut/design.hpp"
#include "qcut/matrix.hpp"
#include "qcut/montecarlo.hpp"
#include "qcut/rng.hpp"
#include "qcut/statevector.hpp"

namespace qcut {

// One measure-and-prepare branch of the wire-cut decomposition, acting on a
// register of n qubits (d = 2^n).
struct MeasureAndPrepare {
  enum class Kind { kM0, kM1 };
  Kind kind = Kind::kM0;
  std::size_t n = 1;

  // Applies the channel to `wires` of `state` in place and returns the
  // classical measurement record.
  std::uint64_t apply(StateVector& state, const std::vector<std::size_t>& wires,
                      RngStream& rng) const;
};

// M0: conjugate the register by a random diagonal-design frame, measure in
// the Hadamard basis, re-prepare the measured frame state. Sends |0><0| to
// the maximally mixed state. Returns the measured bit pattern.
std::uint64_t apply_M0(StateVector& state, const std::vector<std::size_t>& cut_wires,
                       RngStream& rng);

// M1: measure the register, re-prepare a uniformly random *different* basis
// state. Requires d >= 2. Returns the measured outcome k.
std::uint64_t apply_M1(StateVector& state, const std::vector<std::size_t>& cut_wires,
                       RngStream& rng);

struct TimecutEstimate {
  double mean = 0.0;
  double empirical_variance = 0.0;
  std::size_t trials = 0;
  double one_norm = 0.0;  // 2 d_A - 1
  std::size_t dim_a = 0;  // cut register dimension
};

struct TimecutOptions {
  std::size_t threads = 1;
};

// Monte Carlo estimate of Tr(X rho) where rho is prepared by `rho_prep` on
// `n_qubits` wires and the identity on `cut_wires` is replaced by the
// sampled wire-cut decomposition. Each trial draws branch z (z = 0 with
// probability d/(2d-1)), applies M0 or M1, measures X, and scores
// (2d-1) * (-1)^z * y.
TimecutEstimate timecut_estimate(const Circuit& rho_prep, std::size_t n_qubits,
                                 const std::vector<std::size_t>& cut_wires, const Observable& x,
                                 std::size_t trials, RngStream& rng,
                                 const TimecutOptions& options = {});

// Exact Choi matrices of the two branches on a d-dimensional register,
// indexed (reference * d + output).
ComplexMatrix choi_m0_analytic(std::size_t d);
ComplexMatrix choi_m1_analytic(std::size_t d);

// Max-abs residual of d*J0 - (d-1)*J1 against the identity-channel Choi
// matrix, evaluated from the analytic forms. Requires d <= 16.
double qpd_identity_check(std::size_t d);

// Variance envelope (2 d_A - 1) * min(2 * ||Tr_A(X^2)|| + 1, 2 d_A - 1) for
// an observable X on the cut register (A) tensored with the rest (B).
double variance_bound_check(const ComplexMatrix& x, const BipartiteShape& shape);

}  // namespace qcut
