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

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "qcut/matrix.hpp"
#include "qcut/rng.hpp"

namespace qcut {

// One term (c, V (x) W) of a local decomposition; c > 0, phases live in V.
struct LocalTerm {
  double c = 0.0;
  ComplexMatrix v;
  ComplexMatrix w;
};

// U = sum_i c_i V_i (x) W_i over the A|B split given by `shape`.
struct LocalDecomposition {
  std::vector<LocalTerm> terms;
  BipartiteShape shape;
};

// phi = 2 ||c||_1^2 - ||c||_2^2; the 1-norm of the double-Hadamard-test cut.
double magnitude(const LocalDecomposition& g);

// Termwise composition: valid for U*V when the inputs are valid for U and V.
LocalDecomposition product(const LocalDecomposition& g1, const LocalDecomposition& g2);

// Side-by-side combination on (A1 A2 | B1 B2): valid for U1 (x) U2 when the
// inputs are valid for U1 and U2 on their own splits.
LocalDecomposition tensor_combine(const LocalDecomposition& g1, const LocalDecomposition& g2);

// sum_i c_i V_i (x) W_i as a dense matrix.
ComplexMatrix decomposition_sum(const LocalDecomposition& g);

// ||decomposition_sum(g) - u||_F.
double validity_residual(const LocalDecomposition& g, const ComplexMatrix& u);

// Expansion of u in the Pauli-string product basis; qubit dims only. Terms
// with |coefficient| < 1e-12 are pruned; phases are folded into the A side.
LocalDecomposition pauli_decomposition(const ComplexMatrix& u, const BipartiteShape& shape);

// u = sum_j lambda_j A_j (x) B_j with Tr(A_j^dag A_k) = d_A delta_jk (same
// for B with d_B), coefficients positive descending, sum lambda^2 = 1.
struct SchmidtDecomposition {
  std::vector<double> coefficients;
  std::vector<ComplexMatrix> ops_a;
  std::vector<ComplexMatrix> ops_b;
  std::vector<bool> unitary_flags;  // both sides unitary within 1e-6 after rescale
};

SchmidtDecomposition operator_schmidt(const ComplexMatrix& u, const BipartiteShape& shape);

// 2 (d_A d_B)^{-1} ||(UF)^Gamma||_1^2 - 1 when d_A = d_B; the equivalent
// Schmidt-coefficient form 2 (sum lambda)^2 - 1 otherwise.
double choi_robustness(const ComplexMatrix& u, const BipartiteShape& shape);

struct ExtentResult {
  double value = 1.0;
  bool certified = false;  // true iff value is exactly the product extent
  std::optional<LocalDecomposition> certificate;
};

// Certified product extent where a unitary operator Schmidt basis is found
// (directly, or via the canonical two-qubit construction); otherwise the best
// known upper bound, flagged non-optimal. A failed certificate does not prove
// the bound is loose: degenerate Schmidt coefficients make the basis
// ambiguous and only some bases are unitary.
ExtentResult product_extent_schmidt(const ComplexMatrix& u, const BipartiteShape& shape);

// (choi_robustness, extent upper bound); throws if the sandwich inverts.
std::pair<double, double> sandwich_bounds(const ComplexMatrix& u, const BipartiteShape& shape);

// Robustness of entanglement of a pure state: (sum of Schmidt coeffs)^2 - 1.
double pure_robustness(const ComplexMatrix& psi_column, const BipartiteShape& shape);

// Choi vector of a unitary: phi[k*d + m] = U(m, k)/sqrt(d), a pure state on
// (reference (x) output).
ComplexMatrix choi_vector(const ComplexMatrix& u);

// Same Choi vector with indices regrouped to (A_ref A_out)(B_ref B_out), the
// bipartition a space-like cut acts across; robustness of this state lower
// bounds every cut 1-norm via 1 + 2R.
ComplexMatrix choi_vector_grouped(const ComplexMatrix& u, const BipartiteShape& shape);

// The optimal separable pair witnessing R(psi): sigma_minus explicit,
// sigma_plus realized as the mean of random product states built from
// Schmidt data and diagonal-design phases.
struct SeparablePair {
  ComplexMatrix sigma_minus;
  ComplexMatrix sigma_plus_exact;  // (psi psi^dag + R sigma_minus)/(1 + R)
  double R = 0.0;
  // Draws (|s>, |t>) columns; E[|s><s| (x) |t><t|] = sigma_plus_exact.
  std::function<std::pair<ComplexMatrix, ComplexMatrix>()> sample_product;
};

SeparablePair optimal_separable_pair(const ComplexMatrix& psi_column, const BipartiteShape& shape,
                                     RngStream& rng);

// Named gates used around the test corpus and the CLI.
ComplexMatrix cnot_matrix();
ComplexMatrix swap_matrix();
ComplexMatrix cz_matrix();
ComplexMatrix zz_matrix(double theta);  // exp(-i theta Z (x) Z)

// 2-term decomposition {(|cos theta|, 1 (x) 1), (|sin theta|, -i sgn Z (x) Z)}
// of zz_matrix(theta), pruned when a coefficient vanishes.
LocalDecomposition zz_decomposition(double theta);

}  // namespace qcut
