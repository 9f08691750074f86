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

#include "qcut/matrix.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

#include "qcut/errors.hpp"
#include "qcut/svd.hpp"

namespace qcut {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols,
                             std::initializer_list<Complex> entries)
    : rows_(rows), cols_(cols), data_(entries) {
  if (data_.size() != rows * cols) {
    throw std::invalid_argument("matrix literal size mismatch");
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::zero(std::size_t rows, std::size_t cols) {
  return ComplexMatrix(rows, cols);
}

ComplexMatrix ComplexMatrix::column(const std::vector<Complex>& v) {
  ComplexMatrix m(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
  return m;
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix& other) const {
  ComplexMatrix out = *this;
  out += other;
  return out;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& other) const {
  ComplexMatrix out = *this;
  out -= other;
  return out;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  assert(rows_ == other.rows_ && cols_ == other.cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  assert(rows_ == other.rows_ && cols_ == other.cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scalar) {
  for (auto& x : data_) x *= scalar;
  return *this;
}

ComplexMatrix ComplexMatrix::operator*(Complex scalar) const {
  ComplexMatrix out = *this;
  out *= scalar;
  return out;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& other) const {
  assert(cols_ == other.rows_);
  ComplexMatrix out(rows_, other.cols_);
  // ikj order: stream over contiguous rows of both operands.
  for (std::size_t i = 0; i < rows_; ++i) {
    const Complex* arow = data_.data() + i * cols_;
    Complex* orow = out.data() + i * other.cols_;
    for (std::size_t k = 0; k < cols_; ++k) {
      const Complex aik = arow[k];
      if (aik == Complex(0.0, 0.0)) continue;
      const Complex* brow = other.data() + k * other.cols_;
      for (std::size_t j = 0; j < other.cols_; ++j) orow[j] += aik * brow[j];
    }
  }
  return out;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

ComplexMatrix ComplexMatrix::conjugate() const {
  ComplexMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = std::conj(out.data_[i]);
  return out;
}

Complex ComplexMatrix::trace() const {
  assert(rows_ == cols_);
  Complex t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& x : data_) s += std::norm(x);
  return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& x : data_) m = std::max(m, std::abs(x));
  return m;
}

bool ComplexMatrix::all_finite() const {
  for (const auto& x : data_) {
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
  }
  return true;
}

bool ComplexMatrix::is_hermitian(double tol) const {
  if (rows_ != cols_) return false;
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = r; c < cols_; ++c)
      if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > tol) return false;
  return true;
}

bool ComplexMatrix::is_unitary(double tol) const {
  if (rows_ != cols_) return false;
  ComplexMatrix g = adjoint() * (*this);
  for (std::size_t i = 0; i < rows_; ++i) g(i, i) -= 1.0;
  return g.frobenius_norm() <= tol;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t ra = 0; ra < a.rows(); ++ra)
    for (std::size_t ca = 0; ca < a.cols(); ++ca) {
      const Complex aval = a(ra, ca);
      if (aval == Complex(0.0, 0.0)) continue;
      for (std::size_t rb = 0; rb < b.rows(); ++rb)
        for (std::size_t cb = 0; cb < b.cols(); ++cb)
          out(ra * b.rows() + rb, ca * b.cols() + cb) = aval * b(rb, cb);
    }
  return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, const BipartiteShape& shape) {
  const std::size_t da = shape.dim_a, db = shape.dim_b;
  if (m.rows() != da * db || m.cols() != da * db) {
    throw std::invalid_argument("partial_transpose: shape mismatch");
  }
  ComplexMatrix out(da * db, da * db);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < da; ++j)
      for (std::size_t k = 0; k < db; ++k)
        for (std::size_t l = 0; l < db; ++l)
          out(j * db + k, i * db + l) = m(i * db + k, j * db + l);
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const BipartiteShape& shape, Subsystem keep) {
  const std::size_t da = shape.dim_a, db = shape.dim_b;
  if (m.rows() != da * db || m.cols() != da * db) {
    throw std::invalid_argument("partial_trace: shape mismatch");
  }
  if (keep == Subsystem::A) {
    ComplexMatrix out(da, da);
    for (std::size_t i = 0; i < da; ++i)
      for (std::size_t j = 0; j < da; ++j) {
        Complex s = 0.0;
        for (std::size_t k = 0; k < db; ++k) s += m(i * db + k, j * db + k);
        out(i, j) = s;
      }
    return out;
  }
  ComplexMatrix out(db, db);
  for (std::size_t k = 0; k < db; ++k)
    for (std::size_t l = 0; l < db; ++l) {
      Complex s = 0.0;
      for (std::size_t i = 0; i < da; ++i) s += m(i * db + k, i * db + l);
      out(k, l) = s;
    }
  return out;
}

double trace_norm(const ComplexMatrix& m) {
  SvdResult r = svd(m);
  double s = 0.0;
  for (double sv : r.singular_values) s += sv;
  return s;
}

double op_norm(const ComplexMatrix& m) {
  SvdResult r = svd(m);
  return r.singular_values.empty() ? 0.0 : r.singular_values.front();
}

double frob_dist(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).frobenius_norm();
}

ComplexMatrix permutation_operator(const std::vector<std::size_t>& perm,
                                   const std::vector<std::size_t>& dims) {
  if (perm.size() != dims.size()) {
    throw std::invalid_argument("permutation_operator: perm/dims length mismatch");
  }
  const std::size_t k = dims.size();
  std::vector<bool> seen(k, false);
  for (std::size_t p : perm) {
    if (p >= k || seen[p]) throw std::invalid_argument("permutation_operator: not a permutation");
    seen[p] = true;
  }
  std::size_t total = 1;
  for (std::size_t d : dims) total *= d;

  // Strides with slot 0 as the major index.
  std::vector<std::size_t> in_stride(k, 1), out_stride(k, 1);
  for (std::size_t s = k; s-- > 1;) in_stride[s - 1] = in_stride[s] * dims[s];
  for (std::size_t s = k; s-- > 1;) out_stride[s - 1] = out_stride[s] * dims[perm[s]];

  ComplexMatrix out(total, total);
  std::vector<std::size_t> digits(k);
  for (std::size_t x = 0; x < total; ++x) {
    std::size_t rem = x;
    for (std::size_t s = 0; s < k; ++s) {
      digits[s] = rem / in_stride[s];
      rem %= in_stride[s];
    }
    std::size_t y = 0;
    for (std::size_t s = 0; s < k; ++s) y += digits[perm[s]] * out_stride[s];
    out(y, x) = 1.0;
  }
  return out;
}

namespace {
const Complex kI(0.0, 1.0);
}  // namespace

const ComplexMatrix& pauli_i() {
  static const ComplexMatrix m(2, 2, {1, 0, 0, 1});
  return m;
}

const ComplexMatrix& pauli_x() {
  static const ComplexMatrix m(2, 2, {0, 1, 1, 0});
  return m;
}

const ComplexMatrix& pauli_y() {
  static const ComplexMatrix m(2, 2, {0, -kI, kI, 0});
  return m;
}

const ComplexMatrix& pauli_z() {
  static const ComplexMatrix m(2, 2, {1, 0, 0, -1});
  return m;
}

const ComplexMatrix& hadamard() {
  static const ComplexMatrix m = [] {
    const double s = 1.0 / std::sqrt(2.0);
    return ComplexMatrix(2, 2, {s, s, s, -s});
  }();
  return m;
}

const ComplexMatrix& phase_s() {
  static const ComplexMatrix m(2, 2, {1, 0, 0, kI});
  return m;
}

ComplexMatrix pauli_string_matrix(const std::vector<char>& letters) {
  auto single = [](char c) -> const ComplexMatrix& {
    switch (c) {
      case 'I': return pauli_i();
      case 'X': return pauli_x();
      case 'Y': return pauli_y();
      case 'Z': return pauli_z();
      default: throw ConfigError(std::string("unknown Pauli letter '") + c + "'");
    }
  };
  if (letters.empty()) throw ConfigError("empty Pauli string");
  // Wire 0 is the least significant bit, so it sits rightmost in the kron.
  ComplexMatrix m = single(letters[0]);
  for (std::size_t w = 1; w < letters.size(); ++w) m = kron(single(letters[w]), m);
  return m;
}

}  // namespace qcut
