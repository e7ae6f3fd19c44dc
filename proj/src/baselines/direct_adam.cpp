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

#include <chrono>
#include <stdexcept>

#include "rsma/baselines/baselines.hpp"
#include "rsma/gradients/gradients.hpp"

namespace rsma::baselines {

RunResult run_direct_adam(const channel::ChannelEnsemble& ens, const PrecoderMatrix& p0,
                          const DirectAdamConfig& cfg, const rates::NoisePowers& noise) {
  p0.validate();
  const auto& l = p0.layout;
  if (ens.n_tx() != l.n_tx || ens.n_users() != l.n_users || ens.m() == 0)
    throw std::invalid_argument("direct_adam: ensemble does not match the layout");
  if (!(cfg.learning_rate >= 0.0)) throw std::invalid_argument("direct_adam: learning rate must be >= 0");

  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> nz = noise.expand(l.n_users);
  std::vector<double> x = rates::pack_active(p0);
  auto asr_of = [&](std::span<const double> v) {
    const auto a = rates::average_stream_rates(ens, l, v, nz);
    return rates::reduce_objective(l, a.common, a.group, a.priv, rates::LossOptions{});
  };
  const bool hard = cfg.loss.min_mode == rates::MinMode::Hard;

  grad::Workspace ws;
  meta::AdamState adam(x.size(), {cfg.learning_rate, 0.9, 0.999, 1e-8});
  grad::LossGradient lg = grad::loss_and_gradient(ens, l, x, nz, cfg.loss, ws);
  meta::BestTracker tracker(p0, hard ? -lg.loss : asr_of(x), cfg.track_best);
  for (std::size_t i = 0; i < cfg.iterations; ++i) {
    adam.apply(x, lg.grad);
    meta::project_packed(x, p0.p_t);
    lg = grad::loss_and_gradient(ens, l, x, nz, cfg.loss, ws);
    tracker.offer(x, hard ? -lg.loss : asr_of(x));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return std::move(tracker).finish("direct_adam", ens, noise, secs);
}

}  // namespace rsma::baselines
