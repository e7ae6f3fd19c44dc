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

#ifndef RSMA_GRADIENTS_GRADIENTS_HPP
#define RSMA_GRADIENTS_GRADIENTS_HPP

#include <functional>
#include <span>
#include <vector>

#include "rsma/channel/scene.hpp"
#include "rsma/gradients/tape.hpp"
#include "rsma/metaopt/network.hpp"
#include "rsma/rates/rates.hpp"

namespace rsma::grad {

using channel::ChannelEnsemble;
using channel::StreamLayout;
using rates::LossOptions;
using rates::NoisePowers;
using rates::PrecoderMatrix;

// Real parametrization of the active precoder entries (see rates::pack_active).
// Structurally zero group columns of OneLayer layouts are not part of it.
struct RealView {
  StreamLayout layout;
  std::vector<double> values;

  static RealView of(const PrecoderMatrix& p);
  PrecoderMatrix to_precoder(double p_t) const;
};

struct LossGradient {
  double loss = 0.0;
  std::vector<double> grad;  // dL/dx over the packed active entries
};

// Reusable tapes and buffers; one per thread.
class Workspace {
 public:
  Tape sample_tape;
  Tape reduce_tape;
  Tape net_tape;
};

// Loss -ASR and its gradient w.r.t. the packed entries x. Mins follow
// opts.min_mode; hard mins pass the subgradient to the lowest-index minimizer.
LossGradient loss_and_gradient(const ChannelEnsemble& ens, const StreamLayout& layout, std::span<const double> x,
                               std::span<const double> noise, const LossOptions& opts, Workspace& ws);

// (dL/d re, dL/d im) per active entry.
RealView grad_wrt_precoder(const ChannelEnsemble& ens, const PrecoderMatrix& p, const NoisePowers& noise = 1.0,
                           const LossOptions& opts = {});

// Omega(x0 + G_theta(input)) recorded on `tape`; returns the output entries.
struct Composite {
  std::vector<Var> theta;
  std::vector<Var> output;  // projected precoder entries
  bool scaled = false;      // projection scaling branch taken
};
Composite record_composite(Tape& tape, const meta::MetaNetParams& net, std::span<const double> x0,
                           std::span<const double> input, double p_t);

struct ThetaGradient {
  double loss = 0.0;
  std::vector<double> grad;       // dL/dtheta
  std::vector<double> precoder;   // packed Omega(P0 + G(input))
  bool scaled = false;
};

// Gradient of L(Omega(P0 + G_theta(input))) w.r.t. theta. `input` is treated
// as a constant.
ThetaGradient grad_wrt_theta(const ChannelEnsemble& ens, const meta::MetaNetParams& net, const PrecoderMatrix& p0,
                             std::span<const double> input, std::span<const double> noise,
                             const LossOptions& opts, Workspace& ws);
// Convenience form computing input = dL/dP at P0 first.
ThetaGradient grad_wrt_theta(const ChannelEnsemble& ens, const meta::MetaNetParams& net, const PrecoderMatrix& p0,
                             const NoisePowers& noise = 1.0, const LossOptions& opts = {});

struct FiniteDiffResult {
  double max_rel_error = 0.0;
  std::size_t worst_index = 0;
  std::vector<double> fd_gradient;
};

// Central differences per coordinate, compared against `analytic`. The
// per-coordinate error is |a - f| / max(|a|, |f|, floor). The floor is the
// larger of 1e-3 times the largest gradient magnitude seen and the slope that
// round-off can resolve to 1e-4, 1e5 * eps * max(1, |f(x)|) / step. Rejects step <= 0.
FiniteDiffResult finite_diff_check(const std::function<double(std::span<const double>)>& f,
                                   std::span<const double> x, std::span<const double> analytic, double step);

}  // namespace rsma::grad

#endif
