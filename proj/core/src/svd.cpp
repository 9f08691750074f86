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

#include "qcut/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qcut/errors.hpp"

namespace qcut {

namespace {

constexpr int kMaxSweeps = 64;
constexpr double kOrthTol = 1e-14;  // relative column-orthogonality target

// Givens-like unitary acting in the (p,q) plane, chosen so that the rotated
// 2x2 Gram matrix [[alpha, gamma], [conj(gamma), beta]] becomes diagonal.
struct PlaneRotation {
  double c;
  Complex s_phase;       // s * e^{i phi}, where gamma = |gamma| e^{i phi}
  Complex s_phase_conj;  // s * e^{-i phi}
};

PlaneRotation make_rotation(double alpha, double beta, Complex gamma) {
  const double r = std::abs(gamma);
  const Complex phase = gamma / r;
  const double zeta = (beta - alpha) / (2.0 * r);
  const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = c * t;
  return {c, s * phase, s * std::conj(phase)};
}

// Thin SVD of a tall-or-square matrix via one-sided Jacobi: rotate column
// pairs until mutually orthogonal, then read off norms.
SvdResult svd_tall(const ComplexMatrix& a_in) {
  const std::size_t m = a_in.rows(), n = a_in.cols();
  ComplexMatrix a = a_in;
  ComplexMatrix v = ComplexMatrix::identity(n);

  auto col_dot = [&](const ComplexMatrix& mat, std::size_t rows, std::size_t p,
                     std::size_t q) {
    Complex acc = 0.0;
    for (std::size_t i = 0; i < rows; ++i) acc += std::conj(mat(i, p)) * mat(i, q);
    return acc;
  };

  std::vector<double> colnorm2(n);
  double frob2 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    colnorm2[j] = col_dot(a, m, j, j).real();
    frob2 += colnorm2[j];
  }
  // Rank-deficient inputs collapse columns toward zero as the sweeps
  // orthogonalize; roundoff junk in such a column never passes the relative
  // test against a unit column. Freeze numerically null columns at exact
  // zero instead (norm <= 1e-14 ||A||_F is below what double-precision
  // Jacobi can resolve anyway).
  const double dead2 = frob2 * 1e-28;
  auto deaden = [&](std::size_t j) {
    if (colnorm2[j] == 0.0 || colnorm2[j] > dead2) return;
    for (std::size_t i = 0; i < m; ++i) a(i, j) = 0.0;
    colnorm2[j] = 0.0;
  };

  bool converged = (n <= 1);
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    converged = true;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        deaden(p);
        deaden(q);
        if (colnorm2[p] == 0.0 || colnorm2[q] == 0.0) continue;
        const Complex gamma = col_dot(a, m, p, q);
        const double alpha = colnorm2[p], beta = colnorm2[q];
        if (std::abs(gamma) <= kOrthTol * std::sqrt(alpha * beta)) continue;
        converged = false;
        const PlaneRotation rot = make_rotation(alpha, beta, gamma);
        for (std::size_t i = 0; i < m; ++i) {
          const Complex ap = a(i, p), aq = a(i, q);
          a(i, p) = rot.c * ap - rot.s_phase_conj * aq;
          a(i, q) = rot.s_phase * ap + rot.c * aq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const Complex vp = v(i, p), vq = v(i, q);
          v(i, p) = rot.c * vp - rot.s_phase_conj * vq;
          v(i, q) = rot.s_phase * vp + rot.c * vq;
        }
        colnorm2[p] = col_dot(a, m, p, p).real();
        colnorm2[q] = col_dot(a, m, q, q).real();
      }
    }
  }
  if (!converged) throw NumericalError("svd: Jacobi sweeps did not converge");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return colnorm2[x] > colnorm2[y]; });

  SvdResult out;
  out.u = ComplexMatrix(m, n);
  out.v = ComplexMatrix(n, n);
  out.singular_values.resize(n);
  double sigma_max = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    sigma_max = std::max(sigma_max, std::sqrt(std::max(0.0, colnorm2[order[j]])));
  }
  const double sigma_floor = sigma_max * 1e-290;  // exact-zero columns only

  std::size_t filled = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    const double sigma = std::sqrt(std::max(0.0, colnorm2[src]));
    out.singular_values[j] = sigma;
    for (std::size_t i = 0; i < n; ++i) out.v(i, j) = v(i, src);
    if (sigma > sigma_floor && sigma > 0.0) {
      for (std::size_t i = 0; i < m; ++i) out.u(i, j) = a(i, src) / sigma;
      filled = j + 1;
    } else {
      out.singular_values[j] = 0.0;
    }
  }

  // Null columns carry no weight in the reconstruction; complete U to an
  // orthonormal frame anyway so downstream callers can rely on it.
  for (std::size_t j = filled; j < n; ++j) {
    std::vector<Complex> cand(m);
    for (std::size_t trial = 0; trial < m; ++trial) {
      std::fill(cand.begin(), cand.end(), Complex(0.0));
      cand[trial] = 1.0;
      for (std::size_t k = 0; k < j; ++k) {
        Complex proj = 0.0;
        for (std::size_t i = 0; i < m; ++i) proj += std::conj(out.u(i, k)) * cand[i];
        for (std::size_t i = 0; i < m; ++i) cand[i] -= proj * out.u(i, k);
      }
      double nrm2 = 0.0;
      for (const auto& x : cand) nrm2 += std::norm(x);
      if (nrm2 > 0.25) {
        const double inv = 1.0 / std::sqrt(nrm2);
        for (std::size_t i = 0; i < m; ++i) out.u(i, j) = cand[i] * inv;
        break;
      }
    }
  }
  return out;
}

}  // namespace

SvdResult svd(const ComplexMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return {};
  if (m.rows() >= m.cols()) return svd_tall(m);
  // m = (m^dag)^dag: swap the factor roles.
  SvdResult t = svd_tall(m.adjoint());
  return {std::move(t.v), std::move(t.singular_values), std::move(t.u)};
}

EighResult eigh(const ComplexMatrix& m_in) {
  const std::size_t n = m_in.rows();
  // Symmetrize away caller roundoff.
  ComplexMatrix b(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      b(r, c) = 0.5 * (m_in(r, c) + std::conj(m_in(c, r)));
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double scale = std::max(b.frobenius_norm(), 1e-300);
  const double tol = 1e-15 * scale;

  bool converged = (n <= 1);
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    converged = true;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex bpq = b(p, q);
        if (std::abs(bpq) <= tol) continue;
        converged = false;
        const PlaneRotation rot =
            make_rotation(b(p, p).real(), b(q, q).real(), bpq);
        // B <- J^dag B J, columns first then rows.
        for (std::size_t i = 0; i < n; ++i) {
          const Complex bip = b(i, p), biq = b(i, q);
          b(i, p) = rot.c * bip - rot.s_phase_conj * biq;
          b(i, q) = rot.s_phase * bip + rot.c * biq;
        }
        for (std::size_t j = 0; j < n; ++j) {
          const Complex bpj = b(p, j), bqj = b(q, j);
          b(p, j) = rot.c * bpj - rot.s_phase * bqj;
          b(q, j) = rot.s_phase_conj * bpj + rot.c * bqj;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const Complex vip = v(i, p), viq = v(i, q);
          v(i, p) = rot.c * vip - rot.s_phase_conj * viq;
          v(i, q) = rot.s_phase * vip + rot.c * viq;
        }
      }
    }
  }
  if (!converged) throw NumericalError("eigh: Jacobi sweeps did not converge");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return b(x, x).real() < b(y, y).real();
  });

  EighResult out;
  out.values.resize(n);
  out.vectors = ComplexMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = b(order[j], order[j]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  return out;
}

}  // namespace qcut
