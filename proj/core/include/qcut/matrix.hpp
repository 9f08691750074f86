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

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace qcut {

using Complex = std::complex<double>;

// Bipartite index convention used throughout: the joint basis index of
// H_A (x) H_B is i_A * dim_b + i_B, i.e. the A slot is the major index and
// kron(opA, opB) acts on the joint space.
struct BipartiteShape {
  std::size_t dim_a = 1;
  std::size_t dim_b = 1;

  std::size_t total() const { return dim_a * dim_b; }
  bool operator==(const BipartiteShape&) const = default;
};

// Dense row-major complex matrix. The universal carrier for unitaries,
// states, observables and Choi matrices at desk scale (dim <= ~4096).
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}
  // Row-major literal, e.g. ComplexMatrix(2, 2, {1, 0, 0, 1}).
  ComplexMatrix(std::size_t rows, std::size_t cols, std::initializer_list<Complex> entries);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix zero(std::size_t rows, std::size_t cols);
  // d x 1 column holding a state vector.
  static ComplexMatrix column(const std::vector<Complex>& v);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Complex* data() { return data_.data(); }
  const Complex* data() const { return data_.data(); }

  ComplexMatrix operator+(const ComplexMatrix& other) const;
  ComplexMatrix operator-(const ComplexMatrix& other) const;
  ComplexMatrix operator*(const ComplexMatrix& other) const;
  ComplexMatrix operator*(Complex scalar) const;
  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scalar);

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conjugate() const;

  Complex trace() const;
  double frobenius_norm() const;
  double max_abs() const;
  bool all_finite() const;

  bool is_hermitian(double tol = 1e-10) const;
  // ||U^dag U - I||_F <= tol.
  bool is_unitary(double tol = 1e-10) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

inline ComplexMatrix operator*(Complex scalar, const ComplexMatrix& m) { return m * scalar; }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Transpose of the A slot: |i><j| (x) |k><l|  ->  |j><i| (x) |k><l|.
// An involution; preserves singular values up to the full transpose.
ComplexMatrix partial_transpose(const ComplexMatrix& m, const BipartiteShape& shape);

enum class Subsystem { A, B };

ComplexMatrix partial_trace(const ComplexMatrix& m, const BipartiteShape& shape, Subsystem keep);

// Schatten norms via the in-repo SVD (see svd.hpp).
double trace_norm(const ComplexMatrix& m);
double op_norm(const ComplexMatrix& m);
double frob_dist(const ComplexMatrix& a, const ComplexMatrix& b);

// F_pi on H_{d_0} (x) ... (x) H_{d_{k-1}}: permutes tensor slots so that the
// output's slot s carries the input's slot perm[s].
// permutation_operator({1,0},{d,d}) is the swap F with F|ij> = |ji>.
ComplexMatrix permutation_operator(const std::vector<std::size_t>& perm,
                                   const std::vector<std::size_t>& dims);

// Single-qubit constants.
const ComplexMatrix& pauli_i();
const ComplexMatrix& pauli_x();
const ComplexMatrix& pauli_y();
const ComplexMatrix& pauli_z();
const ComplexMatrix& hadamard();
const ComplexMatrix& phase_s();

// Pauli string on k wires, wire 0 of the list = least significant bit of the
// matrix index. letters[i] in {'I','X','Y','Z'}.
ComplexMatrix pauli_string_matrix(const std::vector<char>& letters);

}  // namespace qcut
