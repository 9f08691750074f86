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

#include <array>
#include <cstdint>
#include <vector>

#include "qcut/rng.hpp"
#include "qcut/statevector.hpp"

namespace qcut {

// Phase-random circuit: one 4-phase diagonal gate per unordered wire pair
// plus one phase per wire. With all phases uniform in [0, 2pi) this is an
// exact diagonal 2-design.
struct DiagonalDesignCircuit {
  std::size_t n = 0;
  std::vector<std::array<double, 4>> pair_phases;  // pairs (p, q), p < q, lex order
  std::vector<double> single_phases;

  // Total phase theta(x) accumulated over all gates for basis state x.
  double phase(std::uint64_t bits) const;
};

DiagonalDesignCircuit sample_diagonal_design(std::size_t n, RngStream& rng);

// Applies the design to `wires` of a larger register (bit m of the design's
// own index space lives on wires[m]).
void apply_diagonal_design(StateVector& state, const DiagonalDesignCircuit& design,
                           const std::vector<std::size_t>& wires);

// The same circuit as explicit diagonal gates, for dumps and cross-checks.
Circuit diagonal_design_gates(const DiagonalDesignCircuit& design,
                              const std::vector<std::size_t>& wires);

}  // namespace qcut
