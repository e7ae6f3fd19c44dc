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

#ifndef RSMA_METAOPT_PRECODER_HPP
#define RSMA_METAOPT_PRECODER_HPP

#include <vector>

#include "rsma/rates/precoder.hpp"

namespace rsma::meta {

using rates::PrecoderMatrix;

// Fractions of p_t given to the warm-start columns. q_g is shared equally by
// the group-common columns (ignored in OneLayer mode, where q_c and q_p are
// renormalized to sum to 1).
struct InitSplit {
  double q_c = 0.9;
  double q_g = 0.0;
  double q_p = 0.1;

  static InitSplit one_layer() { return {0.9, 0.0, 0.1}; }
  static InitSplit hierarchical() { return {0.45, 0.45, 0.10}; }
};

struct InitOptions {
  // A zero CSIT column is rejected unless this is set, in which case the
  // affected direction falls back to the uniform vector 1/sqrt(N_t).
  bool zero_csit_fallback = false;
};

// SVD / MRT warm start at full power p_t.
PrecoderMatrix init_precoder(const rates::CMatrix& csit, const rates::StreamLayout& layout, double p_t,
                             const InitSplit& split, const InitOptions& opts = {});

// Scales P onto the ball tr(P P^H) <= p_t; identity inside it.
PrecoderMatrix project(const PrecoderMatrix& p);
// Same on a packed active view. Returns true when the scaling branch applied.
bool project_packed(std::vector<double>& x, double p_t);

}  // namespace rsma::meta

#endif
