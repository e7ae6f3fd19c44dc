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

// Shared helpers for the unit tests: independent oracles and small builders.
#ifndef RSMA_TESTS_SUPPORT_HPP
#define RSMA_TESTS_SUPPORT_HPP

#include <cmath>
#include <vector>

#include "rsma/numerics/cmatrix.hpp"
#include "rsma/numerics/rng.hpp"

namespace test {

using rsma::numerics::CMatrix;
using rsma::numerics::cplx;
using rsma::numerics::RngStream;

inline CMatrix random_hermitian(RngStream& rng, std::size_t n) {
  const CMatrix g = rsma::numerics::gaussian_matrix(rng, n, n, 1.0);
  CMatrix a = g + g.adjoint();
  return a * cplx(0.5, 0.0);
}

// Largest singular value by plain power iteration on A A^H, run to a fixed
// large iteration count with no early exit.
inline double power_iteration_sigma(const CMatrix& a) {
  const CMatrix aah = a * a.adjoint();
  std::vector<cplx> v(a.rows(), cplx(1.0, 0.3));
  double lambda = 0.0;
  for (int it = 0; it < 20000; ++it) {
    std::vector<cplx> w = aah * std::span<const cplx>(v);
    const double n = rsma::numerics::norm2(w);
    for (auto& z : w) z /= n;
    v = std::move(w);
  }
  lambda = rsma::numerics::norm2(aah * std::span<const cplx>(v));
  return std::sqrt(lambda);
}

inline double rel_diff(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

}  // namespace test

#endif
