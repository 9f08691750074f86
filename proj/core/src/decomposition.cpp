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

#include "qcut/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "qcut/design.hpp"
#include "qcut/errors.hpp"
#include "qcut/svd.hpp"

namespace qcut {

namespace {

constexpr double kPruneTol = 1e-12;

void check_shape(const ComplexMatrix& u, const BipartiteShape& shape) {
  if (shape.dim_a == 0 || shape.dim_b == 0 || u.rows() != shape.total() ||
      u.cols() != shape.total()) {
    throw std::invalid_argument("bipartite shape does not match matrix dimension");
  }
}

bool is_power_of_two(std::size_t d) { return d != 0 && (d & (d - 1)) == 0; }

std::size_t log2_exact(std::size_t d) {
  std::size_t n = 0;
  while ((std::size_t(1) << n) < d) ++n;
  return n;
}

}  // namespace

double magnitude(const LocalDecomposition& g) {
  double l1 = 0.0, l2sq = 0.0;
  for (const auto& t : g.terms) {
    l1 += t.c;
    l2sq += t.c * t.c;
  }
  return 2.0 * l1 * l1 - l2sq;
}

LocalDecomposition product(const LocalDecomposition& g1, const LocalDecomposition& g2) {
  if (!(g1.shape == g2.shape)) throw std::invalid_argument("product: shape mismatch");
  LocalDecomposition out;
  out.shape = g1.shape;
  out.terms.reserve(g1.terms.size() * g2.terms.size());
  for (const auto& t1 : g1.terms) {
    for (const auto& t2 : g2.terms) {
      out.terms.push_back({t1.c * t2.c, t1.v * t2.v, t1.w * t2.w});
    }
  }
  return out;
}

LocalDecomposition tensor_combine(const LocalDecomposition& g1, const LocalDecomposition& g2) {
  LocalDecomposition out;
  out.shape = {g1.shape.dim_a * g2.shape.dim_a, g1.shape.dim_b * g2.shape.dim_b};
  out.terms.reserve(g1.terms.size() * g2.terms.size());
  for (const auto& t1 : g1.terms) {
    for (const auto& t2 : g2.terms) {
      out.terms.push_back({t1.c * t2.c, kron(t1.v, t2.v), kron(t1.w, t2.w)});
    }
  }
  return out;
}

ComplexMatrix decomposition_sum(const LocalDecomposition& g) {
  ComplexMatrix sum(g.shape.total(), g.shape.total());
  for (const auto& t : g.terms) sum += kron(t.v, t.w) * Complex(t.c);
  return sum;
}

double validity_residual(const LocalDecomposition& g, const ComplexMatrix& u) {
  return frob_dist(decomposition_sum(g), u);
}

namespace {

// Pauli string as a generalized permutation: column c holds val[c] at
// row[c]. Cheap to build and to trace against a dense matrix.
struct SparsePauli {
  std::vector<std::size_t> row;
  std::vector<Complex> val;
};

SparsePauli sparse_pauli(std::size_t n_qubits, std::size_t code) {
  // code: 2 bits per wire, 0=I 1=X 2=Y 3=Z, wire 0 in the low bits.
  const std::size_t dim = std::size_t(1) << n_qubits;
  SparsePauli p;
  p.row.resize(dim);
  p.val.assign(dim, Complex(1.0));
  for (std::size_t c = 0; c < dim; ++c) {
    std::size_t r = c;
    Complex v = 1.0;
    for (std::size_t w = 0; w < n_qubits; ++w) {
      const std::size_t letter = (code >> (2 * w)) & 3;
      const int bit = (c >> w) & 1;
      switch (letter) {
        case 1:  // X
          r ^= std::size_t(1) << w;
          break;
        case 2:  // Y: |0>->i|1>, |1>->-i|0>
          r ^= std::size_t(1) << w;
          v *= bit ? Complex(0.0, -1.0) : Complex(0.0, 1.0);
          break;
        case 3:  // Z
          if (bit) v = -v;
          break;
        default:
          break;
      }
    }
    p.row[c] = r;
    p.val[c] = v;
  }
  return p;
}

ComplexMatrix dense_from_sparse(const SparsePauli& p) {
  ComplexMatrix m(p.row.size(), p.row.size());
  for (std::size_t c = 0; c < p.row.size(); ++c) m(p.row[c], c) = p.val[c];
  return m;
}

}  // namespace

LocalDecomposition pauli_decomposition(const ComplexMatrix& u, const BipartiteShape& shape) {
  check_shape(u, shape);
  if (!is_power_of_two(shape.dim_a) || !is_power_of_two(shape.dim_b)) {
    throw std::invalid_argument("pauli_decomposition: qubit dimensions required");
  }
  if (!u.is_unitary(1e-8)) throw std::invalid_argument("pauli_decomposition: input not unitary");
  const std::size_t na = log2_exact(shape.dim_a), nb = log2_exact(shape.dim_b);
  const std::size_t da = shape.dim_a, db = shape.dim_b;

  LocalDecomposition out;
  out.shape = shape;
  for (std::size_t code_a = 0; code_a < (std::size_t(1) << (2 * na)); ++code_a) {
    const SparsePauli pa = sparse_pauli(na, code_a);
    for (std::size_t code_b = 0; code_b < (std::size_t(1) << (2 * nb)); ++code_b) {
      const SparsePauli pb = sparse_pauli(nb, code_b);
      // alpha = Tr((P (x) Q)^dag U) / (dA dB); joint row (ca*db + cb).
      Complex alpha = 0.0;
      for (std::size_t ca = 0; ca < da; ++ca)
        for (std::size_t cb = 0; cb < db; ++cb)
          alpha += std::conj(pa.val[ca] * pb.val[cb]) *
                   u(pa.row[ca] * db + pb.row[cb], ca * db + cb);
      alpha /= double(da * db);
      const double mag = std::abs(alpha);
      if (mag < kPruneTol) continue;
      // Phase folded into the A-side operator so the coefficient is positive.
      ComplexMatrix v = dense_from_sparse(pa) * (alpha / mag);
      out.terms.push_back({mag, std::move(v), dense_from_sparse(pb)});
    }
  }
  return out;
}

namespace {

// Realignment: R[(a1 a2), (b1 b2)] = U[(a1 b1), (a2 b2)]. Its singular
// values are sqrt(dA dB) times the operator Schmidt coefficients.
ComplexMatrix reshuffle(const ComplexMatrix& u, const BipartiteShape& shape) {
  const std::size_t da = shape.dim_a, db = shape.dim_b;
  ComplexMatrix r(da * da, db * db);
  for (std::size_t a1 = 0; a1 < da; ++a1)
    for (std::size_t a2 = 0; a2 < da; ++a2)
      for (std::size_t b1 = 0; b1 < db; ++b1)
        for (std::size_t b2 = 0; b2 < db; ++b2)
          r(a1 * da + a2, b1 * db + b2) = u(a1 * db + b1, a2 * db + b2);
  return r;
}

bool unitary_within(const ComplexMatrix& m, double tol) {
  ComplexMatrix g = m.adjoint() * m;
  for (std::size_t i = 0; i < g.rows(); ++i) g(i, i) -= 1.0;
  return g.frobenius_norm() <= tol;
}

}  // namespace

SchmidtDecomposition operator_schmidt(const ComplexMatrix& u, const BipartiteShape& shape) {
  check_shape(u, shape);
  const std::size_t da = shape.dim_a, db = shape.dim_b;
  const SvdResult sv = svd(reshuffle(u, shape));
  const double scale = std::sqrt(double(da * db));

  SchmidtDecomposition out;
  for (std::size_t j = 0; j < sv.singular_values.size(); ++j) {
    const double lambda = sv.singular_values[j] / scale;
    if (lambda < kPruneTol) break;
    ComplexMatrix a(da, da), b(db, db);
    const double sa = std::sqrt(double(da)), sb = std::sqrt(double(db));
    for (std::size_t a1 = 0; a1 < da; ++a1)
      for (std::size_t a2 = 0; a2 < da; ++a2) a(a1, a2) = sv.u(a1 * da + a2, j) * sa;
    for (std::size_t b1 = 0; b1 < db; ++b1)
      for (std::size_t b2 = 0; b2 < db; ++b2) b(b1, b2) = std::conj(sv.v(b1 * db + b2, j)) * sb;
    out.coefficients.push_back(lambda);
    out.unitary_flags.push_back(unitary_within(a, 1e-6) && unitary_within(b, 1e-6));
    out.ops_a.push_back(std::move(a));
    out.ops_b.push_back(std::move(b));
  }
  return out;
}

double choi_robustness(const ComplexMatrix& u, const BipartiteShape& shape) {
  check_shape(u, shape);
  if (shape.dim_a == shape.dim_b) {
    const ComplexMatrix f = permutation_operator({1, 0}, {shape.dim_a, shape.dim_b});
    const double t = trace_norm(partial_transpose(u * f, shape));
    return 2.0 * t * t / double(shape.total()) - 1.0;
  }
  const SvdResult sv = svd(reshuffle(u, shape));
  double sum = 0.0;
  for (double s : sv.singular_values) sum += s;
  sum /= std::sqrt(double(shape.total()));
  return 2.0 * sum * sum - 1.0;
}

namespace {

Complex determinant(ComplexMatrix m) {
  const std::size_t n = m.rows();
  Complex det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(m(r, col)) > std::abs(m(pivot, col))) pivot = r;
    if (m(pivot, col) == Complex(0.0)) return 0.0;
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(m(pivot, c), m(col, c));
      det = -det;
    }
    det *= m(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const Complex f = m(r, col) / m(col, col);
      for (std::size_t c = col; c < n; ++c) m(r, c) -= f * m(col, c);
    }
  }
  return det;
}

// Basis in which SU(2) (x) SU(2) acts as SO(4); columns are the magic Bell
// states in computational order 00, 01, 10, 11.
const ComplexMatrix& magic_basis() {
  static const ComplexMatrix m = [] {
    const double s = 1.0 / std::sqrt(2.0);
    const Complex i(0.0, 1.0);
    ComplexMatrix out(4, 4);
    out(0, 0) = s;
    out(3, 0) = s;
    out(0, 1) = s * i;
    out(3, 1) = -s * i;
    out(1, 2) = s * i;
    out(2, 2) = s * i;
    out(1, 3) = s;
    out(2, 3) = -s;
    return out;
  }();
  return m;
}

double max_offdiag(const ComplexMatrix& m) {
  double worst = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (r != c) worst = std::max(worst, std::abs(m(r, c)));
  return worst;
}

double max_imag(const ComplexMatrix& m) {
  double worst = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) worst = std::max(worst, std::abs(m(r, c).imag()));
  return worst;
}

// Splits an exact product unitary L = A (x) B into unitary factors.
bool split_product_unitary(const ComplexMatrix& l, ComplexMatrix& a, ComplexMatrix& b) {
  SchmidtDecomposition sd = operator_schmidt(l, {2, 2});
  if (sd.coefficients.empty() || std::abs(sd.coefficients[0] - 1.0) > 1e-8) return false;
  if (!sd.unitary_flags[0]) return false;
  a = sd.ops_a[0];
  b = sd.ops_b[0];
  return true;
}

// Canonical-form construction for two-qubit unitaries: in the magic basis,
// U/gamma = K D^{1/2} P^T with K, P real orthogonal and D unitary diagonal.
// The middle factor expands in {sigma_alpha (x) sigma_alpha}, giving an
// operator Schmidt basis made of unitaries, which certifies the extent even
// when plain SVD returns a non-unitary basis of a degenerate subspace.
std::optional<LocalDecomposition> canonical_two_qubit(const ComplexMatrix& u) {
  const Complex det = determinant(u);
  if (std::abs(std::abs(det) - 1.0) > 1e-8) return std::nullopt;
  const Complex gamma = std::pow(det, 0.25);

  const ComplexMatrix& m = magic_basis();
  const ComplexMatrix ubar = m.adjoint() * (u * (Complex(1.0) / gamma)) * m;
  const ComplexMatrix s = ubar.transpose() * ubar;  // unitary symmetric

  ComplexMatrix x(4, 4), y(4, 4);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) {
      x(r, c) = 0.5 * (s(r, c).real() + s(c, r).real());
      y(r, c) = 0.5 * (s(r, c).imag() + s(c, r).imag());
    }

  // X and Y commute; a random real combination is generically non-degenerate
  // wherever the pair (x_j, y_j) spectra differ, so its eigenvectors jointly
  // diagonalize. Try a few weights, keep the best.
  ComplexMatrix p;
  double best_score = 1e300;
  for (const double w : {0.7548776662466927, -0.3247179572447460, 1.9318516525781366}) {
    const EighResult e = eigh(x + y * Complex(w));
    const ComplexMatrix cand = e.vectors;
    const double score = std::max(max_offdiag(cand.adjoint() * x * cand),
                                  max_offdiag(cand.adjoint() * y * cand));
    if (score < best_score) {
      best_score = score;
      p = cand;
    }
  }
  if (best_score > 1e-8 || max_imag(p) > 1e-10) return std::nullopt;

  if (determinant(p).real() < 0.0) {
    for (std::size_t r = 0; r < 4; ++r) p(r, 0) = -p(r, 0);
  }

  ComplexMatrix d = p.transpose() * s * p;
  std::array<double, 4> phi;
  for (std::size_t j = 0; j < 4; ++j) phi[j] = 0.5 * std::arg(d(j, j));

  auto build_k = [&](const std::array<double, 4>& angles) {
    ComplexMatrix k = ubar * p;
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c) k(r, c) *= std::polar(1.0, -angles[c]);
    return k;
  };
  ComplexMatrix k = build_k(phi);
  if (determinant(k).real() < 0.0) {
    phi[0] += M_PI;  // flips det(K); K D^{1/2} P^T is unchanged
    k = build_k(phi);
  }
  if (max_imag(k) > 1e-7) return std::nullopt;

  ComplexMatrix dsqrt(4, 4);
  for (std::size_t j = 0; j < 4; ++j) dsqrt(j, j) = std::polar(1.0, phi[j]);

  const ComplexMatrix l1 = m * k * m.adjoint();
  const ComplexMatrix core = m * dsqrt * m.adjoint();
  const ComplexMatrix l2 = m * p.transpose() * m.adjoint();

  ComplexMatrix a1, b1, a2, b2;
  if (!split_product_unitary(l1, a1, b1) || !split_product_unitary(l2, a2, b2)) {
    return std::nullopt;
  }

  const ComplexMatrix* sigmas[4] = {&pauli_i(), &pauli_x(), &pauli_y(), &pauli_z()};
  LocalDecomposition out;
  out.shape = {2, 2};
  for (const ComplexMatrix* sigma : sigmas) {
    const Complex c_alpha = (kron(*sigma, *sigma) * core).trace() / 4.0;
    const double mag = std::abs(c_alpha);
    if (mag < kPruneTol) continue;
    const Complex phase = gamma * (c_alpha / mag);
    out.terms.push_back({mag, (a1 * *sigma * a2) * phase, b1 * *sigma * b2});
  }

  if (validity_residual(out, u) > 1e-8) return std::nullopt;
  for (const auto& t : out.terms) {
    if (!unitary_within(t.v, 1e-10) || !unitary_within(t.w, 1e-10)) return std::nullopt;
  }
  return out;
}

// Nearest unitary in Frobenius norm (polar factor).
ComplexMatrix polar_unitary(const ComplexMatrix& a) {
  const SvdResult sv = svd(a);
  return sv.u * sv.v.adjoint();
}

}  // namespace

ExtentResult product_extent_schmidt(const ComplexMatrix& u, const BipartiteShape& shape) {
  check_shape(u, shape);
  const SchmidtDecomposition sd = operator_schmidt(u, shape);
  double lambda_sum = 0.0, lambda_sq = 0.0;
  bool all_unitary = true;
  for (std::size_t j = 0; j < sd.coefficients.size(); ++j) {
    lambda_sum += sd.coefficients[j];
    lambda_sq += sd.coefficients[j] * sd.coefficients[j];
    all_unitary = all_unitary && sd.unitary_flags[j];
  }

  if (all_unitary) {
    LocalDecomposition cert;
    cert.shape = shape;
    for (std::size_t j = 0; j < sd.coefficients.size(); ++j) {
      cert.terms.push_back(
          {sd.coefficients[j], polar_unitary(sd.ops_a[j]), polar_unitary(sd.ops_b[j])});
    }
    if (validity_residual(cert, u) <= 1e-8) {
      return {2.0 * lambda_sum * lambda_sum - 1.0, true, std::move(cert)};
    }
  }

  if (shape.dim_a == 2 && shape.dim_b == 2) {
    if (auto cert = canonical_two_qubit(u)) {
      double l1 = 0.0;
      for (const auto& t : cert->terms) l1 += t.c;
      return {2.0 * l1 * l1 - 1.0, true, std::move(*cert)};
    }
  }

  // No unitary Schmidt basis found: report the best upper bound we can
  // certify as an upper bound, with a valid (non-optimal) certificate when
  // the dimensions admit a Pauli expansion.
  const double schmidt_bound = 2.0 * lambda_sum * lambda_sum - lambda_sq;
  ExtentResult res;
  res.certified = false;
  res.value = schmidt_bound;
  if (is_power_of_two(shape.dim_a) && is_power_of_two(shape.dim_b)) {
    LocalDecomposition pauli = pauli_decomposition(u, shape);
    const double pauli_phi = magnitude(pauli);
    if (pauli_phi < res.value) res.value = pauli_phi;
    res.certificate = std::move(pauli);
  }
  return res;
}

std::pair<double, double> sandwich_bounds(const ComplexMatrix& u, const BipartiteShape& shape) {
  const double low = choi_robustness(u, shape);
  const double high = product_extent_schmidt(u, shape).value;
  const double cap = 2.0 * double(shape.dim_a * shape.dim_a * shape.dim_b * shape.dim_b) - 1.0;
  if (low > high + 1e-8 || high > cap + 1e-8) {
    throw NumericalError("sandwich_bounds: robustness/extent ordering violated");
  }
  return {low, high};
}

double pure_robustness(const ComplexMatrix& psi_column, const BipartiteShape& shape) {
  if (psi_column.cols() != 1 || psi_column.rows() != shape.total()) {
    throw std::invalid_argument("pure_robustness: column of dim dA*dB required");
  }
  if (std::abs(psi_column.frobenius_norm() - 1.0) > 1e-8) {
    throw std::invalid_argument("pure_robustness: state must be normalized");
  }
  ComplexMatrix t(shape.dim_a, shape.dim_b);
  for (std::size_t a = 0; a < shape.dim_a; ++a)
    for (std::size_t b = 0; b < shape.dim_b; ++b) t(a, b) = psi_column(a * shape.dim_b + b, 0);
  const SvdResult sv = svd(t);
  double sum = 0.0;
  for (double s : sv.singular_values) sum += s;
  return sum * sum - 1.0;
}

ComplexMatrix choi_vector(const ComplexMatrix& u) {
  const std::size_t d = u.rows();
  ComplexMatrix phi(d * d, 1);
  const double inv = 1.0 / std::sqrt(double(d));
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t m = 0; m < d; ++m) phi(k * d + m, 0) = u(m, k) * inv;
  return phi;
}

ComplexMatrix choi_vector_grouped(const ComplexMatrix& u, const BipartiteShape& shape) {
  check_shape(u, shape);
  const std::size_t da = shape.dim_a, db = shape.dim_b, d = da * db;
  const ComplexMatrix flat = choi_vector(u);
  ComplexMatrix grouped(d * d, 1);
  for (std::size_t ka = 0; ka < da; ++ka)
    for (std::size_t kb = 0; kb < db; ++kb)
      for (std::size_t ma = 0; ma < da; ++ma)
        for (std::size_t mb = 0; mb < db; ++mb) {
          const std::size_t src = (ka * db + kb) * d + (ma * db + mb);
          const std::size_t dst = (ka * da + ma) * (db * db) + (kb * db + mb);
          grouped(dst, 0) = flat(src, 0);
        }
  return grouped;
}

SeparablePair optimal_separable_pair(const ComplexMatrix& psi_column, const BipartiteShape& shape,
                                     RngStream& rng) {
  if (psi_column.cols() != 1 || psi_column.rows() != shape.total()) {
    throw std::invalid_argument("optimal_separable_pair: column of dim dA*dB required");
  }
  const std::size_t da = shape.dim_a, db = shape.dim_b;
  ComplexMatrix t(da, db);
  for (std::size_t a = 0; a < da; ++a)
    for (std::size_t b = 0; b < db; ++b) t(a, b) = psi_column(a * db + b, 0);
  const SvdResult sv = svd(t);

  std::vector<double> lambda;
  for (double s : sv.singular_values) {
    if (s > kPruneTol) lambda.push_back(s);
  }
  const std::size_t rank = lambda.size();
  if (rank < 2) throw std::invalid_argument("optimal_separable_pair: Schmidt rank must be >= 2");

  double lsum = 0.0;
  for (double l : lambda) lsum += l;
  const double big_r = lsum * lsum - 1.0;

  // Schmidt vectors: psi = sum_j lambda_j a_j (x) b_j with b_j = conj(v_j).
  std::vector<std::vector<Complex>> avec(rank, std::vector<Complex>(da));
  std::vector<std::vector<Complex>> bvec(rank, std::vector<Complex>(db));
  for (std::size_t j = 0; j < rank; ++j) {
    for (std::size_t a = 0; a < da; ++a) avec[j][a] = sv.u(a, j);
    for (std::size_t b = 0; b < db; ++b) bvec[j][b] = std::conj(sv.v(b, j));
  }

  SeparablePair out;
  out.R = big_r;
  out.sigma_minus = ComplexMatrix(da * db, da * db);
  for (std::size_t k = 0; k < rank; ++k)
    for (std::size_t l = 0; l < rank; ++l) {
      if (k == l) continue;
      const double wgt = lambda[k] * lambda[l] / big_r;
      for (std::size_t a1 = 0; a1 < da; ++a1)
        for (std::size_t a2 = 0; a2 < da; ++a2)
          for (std::size_t b1 = 0; b1 < db; ++b1)
            for (std::size_t b2 = 0; b2 < db; ++b2)
              out.sigma_minus(a1 * db + b1, a2 * db + b2) +=
                  wgt * avec[k][a1] * std::conj(avec[k][a2]) * bvec[l][b1] *
                  std::conj(bvec[l][b2]);
    }

  out.sigma_plus_exact = ComplexMatrix(da * db, da * db);
  for (std::size_t r = 0; r < da * db; ++r)
    for (std::size_t c = 0; c < da * db; ++c)
      out.sigma_plus_exact(r, c) =
          (psi_column(r, 0) * std::conj(psi_column(c, 0)) + big_r * out.sigma_minus(r, c)) /
          (1.0 + big_r);

  std::size_t design_qubits = 1;
  while ((std::size_t(1) << design_qubits) < rank) ++design_qubits;

  auto stream = std::make_shared<RngStream>(rng.raw(), 0);
  const double norm_factor = std::pow(1.0 + big_r, -0.25);
  out.sample_product = [=]() {
    const DiagonalDesignCircuit design = sample_diagonal_design(design_qubits, *stream);
    ComplexMatrix s_col(da, 1), t_col(db, 1);
    for (std::size_t j = 0; j < rank; ++j) {
      const double theta = design.phase(j);
      const Complex cs = norm_factor * std::sqrt(lambda[j]) * std::polar(1.0, -theta);
      const Complex ct = norm_factor * std::sqrt(lambda[j]) * std::polar(1.0, theta);
      for (std::size_t a = 0; a < da; ++a) s_col(a, 0) += cs * avec[j][a];
      for (std::size_t b = 0; b < db; ++b) t_col(b, 0) += ct * bvec[j][b];
    }
    return std::make_pair(s_col, t_col);
  };
  return out;
}

ComplexMatrix cnot_matrix() {
  return ComplexMatrix(4, 4, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0});
}

ComplexMatrix swap_matrix() { return permutation_operator({1, 0}, {2, 2}); }

ComplexMatrix cz_matrix() {
  return ComplexMatrix(4, 4, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1});
}

ComplexMatrix zz_matrix(double theta) {
  ComplexMatrix m(4, 4);
  const Complex onsite = std::polar(1.0, -theta), offsite = std::polar(1.0, theta);
  m(0, 0) = onsite;
  m(1, 1) = offsite;
  m(2, 2) = offsite;
  m(3, 3) = onsite;
  return m;
}

LocalDecomposition zz_decomposition(double theta) {
  LocalDecomposition g;
  g.shape = {2, 2};
  const double c = std::cos(theta), s = std::sin(theta);
  if (std::abs(c) >= 1e-14) {
    const Complex sign = c >= 0 ? Complex(1.0) : Complex(-1.0);
    g.terms.push_back({std::abs(c), pauli_i() * sign, pauli_i()});
  }
  if (std::abs(s) >= 1e-14) {
    // -i sin(theta) Z (x) Z with the phase on the A factor.
    const Complex phase = Complex(0.0, -1.0) * (s >= 0 ? 1.0 : -1.0);
    g.terms.push_back({std::abs(s), pauli_z() * phase, pauli_z()});
  }
  return g;
}

}  // namespace qcut
