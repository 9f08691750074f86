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
#include <doctest.h>

#include <cmath>

#include "qcut/matrix.hpp"
#include "qcut/rng.hpp"
#include "qcut/svd.hpp"

using namespace qcut;

namespace {

ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, RngStream& rng) {
  ComplexMatrix m = ComplexMatrix::zero(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = Complex(rng.normal(), rng.normal());
  return m;
}

ComplexMatrix random_unitary(std::size_t n, RngStream& rng) {
  return svd(random_matrix(n, n, rng)).u;
}

}  // namespace

TEST_CASE("pauli algebra") {
  CHECK(frob_dist(pauli_x() * pauli_x(), ComplexMatrix::identity(2)) < 1e-15);
  CHECK(frob_dist(pauli_y() * pauli_y(), ComplexMatrix::identity(2)) < 1e-15);
  CHECK(frob_dist(pauli_z() * pauli_z(), ComplexMatrix::identity(2)) < 1e-15);
  // XY = iZ
  CHECK(frob_dist(pauli_x() * pauli_y(), pauli_z() * Complex(0.0, 1.0)) < 1e-15);
  // HZH = X
  CHECK(frob_dist(hadamard() * pauli_z() * hadamard(), pauli_x()) < 1e-15);
  // S^2 = Z
  CHECK(frob_dist(phase_s() * phase_s(), pauli_z()) < 1e-15);
}

TEST_CASE("pauli_string_matrix puts wire 0 rightmost in the kron") {
  const ComplexMatrix zx = pauli_string_matrix({'Z', 'X'});
  CHECK(frob_dist(zx, kron(pauli_x(), pauli_z())) < 1e-15);
  CHECK(zx.rows() == 4);
}

TEST_CASE("kron dimensions and mixed-product identity") {
  RngStream rng(11);
  const ComplexMatrix a = random_matrix(2, 3, rng);
  const ComplexMatrix b = random_matrix(4, 2, rng);
  const ComplexMatrix c = random_matrix(3, 2, rng);
  const ComplexMatrix d = random_matrix(2, 5, rng);
  CHECK(kron(a, b).rows() == 8);
  CHECK(kron(a, b).cols() == 6);
  // (A (x) B)(C (x) D) = AC (x) BD
  CHECK(frob_dist(kron(a, b) * kron(c, d), kron(a * c, b * d)) < 1e-12);
}

TEST_CASE("partial trace of a kron factors") {
  RngStream rng(3);
  ComplexMatrix a = random_matrix(3, 3, rng);
  ComplexMatrix b = random_matrix(4, 4, rng);
  const Complex tra = a.trace();
  const Complex trb = b.trace();
  const ComplexMatrix ab = kron(a, b);
  CHECK(frob_dist(partial_trace(ab, {3, 4}, Subsystem::A), a * trb) < 1e-12);
  CHECK(frob_dist(partial_trace(ab, {3, 4}, Subsystem::B), b * tra) < 1e-12);
}

TEST_CASE("partial transpose is an involution and preserves the diagonal") {
  RngStream rng(5);
  const ComplexMatrix m = random_matrix(6, 6, rng);
  const BipartiteShape shape{2, 3};
  const ComplexMatrix pt = partial_transpose(m, shape);
  CHECK(frob_dist(partial_transpose(pt, shape), m) < 1e-14);
  for (std::size_t i = 0; i < 6; ++i) CHECK(std::abs(pt(i, i) - m(i, i)) < 1e-15);
}

TEST_CASE("trace norm of a unitary is its dimension") {
  RngStream rng(7);
  const ComplexMatrix u = random_unitary(5, rng);
  CHECK(trace_norm(u) == doctest::Approx(5.0).epsilon(1e-10));
  CHECK(op_norm(u) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("norm ordering: trace >= frobenius >= operator") {
  RngStream rng(9);
  const ComplexMatrix m = random_matrix(4, 4, rng);
  const double frob = frob_dist(m, ComplexMatrix::zero(4, 4));
  CHECK(trace_norm(m) >= frob - 1e-12);
  CHECK(frob >= op_norm(m) - 1e-12);
}

TEST_CASE("permutation operator swaps tensor slots") {
  RngStream rng(13);
  const ComplexMatrix a = random_matrix(2, 2, rng);
  const ComplexMatrix b = random_matrix(3, 3, rng);
  const ComplexMatrix p = permutation_operator({1, 0}, {2, 3});
  CHECK(frob_dist(p * kron(a, b) * p.adjoint(), kron(b, a)) < 1e-12);
}

TEST_CASE("svd reconstructs and orders singular values") {
  RngStream rng(17);
  for (int it = 0; it < 25; ++it) {
    const std::size_t rows = 1 + rng.uniform_index(6);
    const std::size_t cols = 1 + rng.uniform_index(6);
    const ComplexMatrix m = random_matrix(rows, cols, rng);
    const SvdResult s = svd(m);
    ComplexMatrix rec = ComplexMatrix::zero(rows, cols);
    for (std::size_t k = 0; k < s.singular_values.size(); ++k)
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
          rec(r, c) += s.u(r, k) * s.singular_values[k] * std::conj(s.v(c, k));
    CHECK(frob_dist(rec, m) < 1e-10);
    for (std::size_t k = 0; k + 1 < s.singular_values.size(); ++k)
      CHECK(s.singular_values[k] >= s.singular_values[k + 1] - 1e-12);
    CHECK(s.singular_values.back() >= -1e-12);
  }
}

TEST_CASE("svd of a unitary gives unit singular values") {
  RngStream rng(19);
  const ComplexMatrix u = random_unitary(4, rng);
  const SvdResult s = svd(u);
  for (double v : s.singular_values) CHECK(v == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("eigh diagonalizes hermitian matrices") {
  RngStream rng(23);
  for (int it = 0; it < 10; ++it) {
    const std::size_t n = 2 + rng.uniform_index(5);
    ComplexMatrix m = random_matrix(n, n, rng);
    m = (m + m.adjoint()) * Complex(0.5, 0.0);
    const EighResult e = eigh(m);
    ComplexMatrix rec = ComplexMatrix::zero(n, n);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
          rec(r, c) += e.vectors(r, k) * e.values[k] * std::conj(e.vectors(c, k));
    CHECK(frob_dist(rec, m) < 1e-10);
    CHECK(e.vectors.is_unitary(1e-10));
    for (std::size_t k = 0; k + 1 < n; ++k) CHECK(e.values[k] <= e.values[k + 1] + 1e-12);
  }
}

TEST_CASE("svd is deterministic") {
  RngStream rng(29);
  const ComplexMatrix m = random_matrix(5, 4, rng);
  const SvdResult a = svd(m);
  const SvdResult b = svd(m);
  CHECK(frob_dist(a.u, b.u) == 0.0);
  CHECK(frob_dist(a.v, b.v) == 0.0);
}
