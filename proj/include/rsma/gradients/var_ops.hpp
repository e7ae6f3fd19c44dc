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

#ifndef RSMA_GRADIENTS_VAR_OPS_HPP
#define RSMA_GRADIENTS_VAR_OPS_HPP

// grad::Var overloads of the rate-kernel primitives, found by ADL when the
// kernel is instantiated with Var.

#include <span>

#include "rsma/gradients/tape.hpp"

namespace rsma::grad {

// |h^H p|^2 as a single node over the 2n entries of p.
Var abs2_inner(const double* h, const Var* p, std::size_t n);
// c + sum x; an empty x yields a constant leaf on anchor's tape.
Var sum_with(double c, std::span<const Var> x, const Var& anchor);
// log2(1 + signal / denom) as a single node.
Var rate_of(const Var& signal, const Var& denom);

inline Var hard_min(std::span<const Var> x) { return min_lowest(x); }
inline Var soft_min(std::span<const Var> x, double t) { return smooth_min(x, t); }

}  // namespace rsma::grad

#endif
