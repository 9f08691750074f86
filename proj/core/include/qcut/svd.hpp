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

#include <vector>

#include "qcut/matrix.hpp"

namespace qcut {

// Thin SVD  m = u * diag(singular_values) * v^dag  with
// u: rows x k, v: cols x k, k = min(rows, cols), singular values descending.
struct SvdResult {
  ComplexMatrix u;
  std::vector<double> singular_values;
  ComplexMatrix v;
};

// One-sided Jacobi SVD. Deterministic cyclic sweeps; throws NumericalError
// if off-diagonal mass has not converged after the sweep cap.
SvdResult svd(const ComplexMatrix& m);

// Hermitian eigendecomposition  m = vectors * diag(values) * vectors^dag,
// eigenvalues ascending, vectors in columns.
struct EighResult {
  std::vector<double> values;
  ComplexMatrix vectors;
};

// Two-sided Jacobi on the Hermitian part of m (asymmetry beyond roundoff is
// the caller's bug, not detected here).
EighResult eigh(const ComplexMatrix& m);

}  // namespace qcut
