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

#ifndef RSMA_BASELINES_BASELINES_HPP
#define RSMA_BASELINES_BASELINES_HPP

#include <vector>

#include "rsma/metaopt/mlbpo.hpp"

namespace rsma::baselines {

using meta::RunResult;
using rates::PowerSplit;
using rates::PrecoderMatrix;

struct DirectAdamConfig {
  std::size_t iterations = 2000;
  double learning_rate = 1e-2;
  rates::LossOptions loss;
  bool track_best = true;
};

// Adam descent on the packed entries of P, projected after every step.
RunResult run_direct_adam(const channel::ChannelEnsemble& ens, const PrecoderMatrix& p0,
                          const DirectAdamConfig& cfg, const rates::NoisePowers& noise = 1.0);

// Unit-norm precoder directions, one per stream column (OneLayer group
// columns stay zero).
struct FixedDirections {
  channel::StreamLayout layout;
  numerics::CMatrix columns;
};

// Global common: dominant left singular vector of the CSIT. Group common g:
// dominant eigenvector of R_g. Privates: regularized zero forcing, loading
// K/p_t, on the effective channel U_g^H h_k where U_g holds the top `rank`
// eigenvectors of R_g. In OneLayer mode only correlations[0] is used.
FixedDirections fixed_directions(const numerics::CMatrix& csit, const channel::StreamLayout& layout, double p_t,
                                 const std::vector<numerics::CMatrix>& correlations, std::size_t rank);

// q_c p_t on the common column, q_g[g] p_t on group column g and q_p p_t
// shared equally by the privates.
PrecoderMatrix compose(const FixedDirections& dirs, const PowerSplit& split, double p_t);

// Every split with fractions on multiples of `step` summing to 1, in
// lexicographic order of (q_c, q_g..., q_p). q_g is omitted in OneLayer mode.
std::vector<PowerSplit> split_lattice(const channel::StreamLayout& layout, double step);

std::size_t default_rank(std::size_t n_tx, std::size_t n_groups);

// Exhaustive search of the grid for the highest sample-average ASR. Ties go
// to the lexicographically smallest split, so the answer does not depend on
// grid order. trace holds the ASR of every grid point in grid order.
RunResult run_fixed_direction(const channel::ChannelEnsemble& ens, const channel::StreamLayout& layout, double p_t,
                              const std::vector<numerics::CMatrix>& correlations, std::size_t rank,
                              const std::vector<PowerSplit>& grid, const rates::NoisePowers& noise = 1.0);

}  // namespace rsma::baselines

#endif
