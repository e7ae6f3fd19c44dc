// SPDX-License-Identifier: Apache-2.0
//
// Copyright (C) 2026 The rsma-mlbpo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef RSMA_NUMERICS_LINALG_HPP
#define RSMA_NUMERICS_LINALG_HPP

#include <vector>

#include "rsma/numerics/cmatrix.hpp"

namespace rsma::numerics {

struct EigenDecomposition {
  std::vector<double> values;  // descending
  CMatrix vectors;             // unitary; column i pairs with values[i]
};

// Cyclic complex Jacobi. Input must be Hermitian within 1e-9 (max |A - A^H| entry).
EigenDecomposition herm_eig(const CMatrix& a);

// Left singular vector of the largest singular value, found by power iteration
// on A A^H (tolerance 1e-12, at most 1e4 iterations). The entry of largest
// magnitude is rotated to be real and positive.
std::vector<cplx> svd_dominant(const CMatrix& a);

// Hermitian PSD square root V diag(sqrt(l)) V^H. Eigenvalues in
// (-clip_tolerance, 0) are clipped to zero; more negative ones are rejected.
CMatrix hermitian_sqrt(const CMatrix& a, double clip_tolerance = 1e-9);

// Solves A X = B for Hermitian positive-definite A (Cholesky).
CMatrix solve_hpd(const CMatrix& a, const CMatrix& b);

}  // namespace rsma::numerics

#endif
