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

#ifndef RSMA_NUMERICS_QUADRATURE_HPP
#define RSMA_NUMERICS_QUADRATURE_HPP

#include <cstddef>
#include <stdexcept>

#include "rsma/numerics/cmatrix.hpp"

namespace rsma::numerics {

inline constexpr std::size_t kDefaultQuadratureNodes = 513;

// Composite Simpson rule for a real-to-complex integrand over [lo, hi] using
// `nodes` equally spaced nodes (odd, >= 3).
template <class F>
cplx simpson(F&& f, double lo, double hi, std::size_t nodes = kDefaultQuadratureNodes) {
  if (nodes < 3 || nodes % 2 == 0)
    throw std::invalid_argument("simpson: node count must be odd and >= 3");
  if (!(lo <= hi)) throw std::invalid_argument("simpson: requires lo <= hi");
  if (lo == hi) return {0.0, 0.0};
  const std::size_t intervals = nodes - 1;
  const double h = (hi - lo) / static_cast<double>(intervals);
  cplx odd{0.0, 0.0};
  cplx even{0.0, 0.0};
  for (std::size_t i = 1; i < intervals; ++i) {
    const cplx v = f(lo + h * static_cast<double>(i));
    if (i % 2 == 1)
      odd += v;
    else
      even += v;
  }
  const cplx ends = cplx(f(lo)) + cplx(f(hi));
  return (ends + 4.0 * odd + 2.0 * even) * h / 3.0;
}

}  // namespace rsma::numerics

#endif
