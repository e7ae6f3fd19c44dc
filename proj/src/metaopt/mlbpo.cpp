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

#include "rsma/metaopt/mlbpo.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "rsma/gradients/gradients.hpp"

namespace rsma::meta {

namespace {

nlohmann::json matrix_json(const PrecoderMatrix& p) {
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (const auto& z : p.columns.data()) {
    re.push_back(z.real());
    im.push_back(z.imag());
  }
  return {{"rows", p.columns.rows()}, {"cols", p.columns.cols()}, {"re", re}, {"im", im}, {"p_t", p.p_t}};
}

nlohmann::json split_json(const rates::PowerSplit& s) {
  return {{"q_c", s.q_c}, {"q_g", s.q_g}, {"q_p", s.q_p}};
}

double hard_asr(const channel::ChannelEnsemble& ens, const channel::StreamLayout& l, std::span<const double> x,
                std::span<const double> noise) {
  const auto a = rates::average_stream_rates(ens, l, x, noise);
  return rates::reduce_objective(l, a.common, a.group, a.priv, rates::LossOptions{});
}

}  // namespace

nlohmann::json to_json(const RunResult& r, bool with_timing, bool with_network) {
  nlohmann::json j = {{"method", r.method},
                      {"iterations", r.iterations},
                      {"initial_asr", r.initial_asr},
                      {"best_asr", r.best_report.asr},
                      {"last_asr", r.last_asr},
                      {"trace", r.trace},
                      {"best_trace", r.best_trace},
                      {"power_split", split_json(r.split)},
                      {"best_report", rates::to_json(r.best_report)},
                      {"best_precoder", matrix_json(r.best)}};
  if (with_timing) j["seconds"] = r.seconds;
  if (with_network && r.network) j["network"] = to_json(*r.network);
  return j;
}

void MlbpoConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
    throw std::invalid_argument("mlbpo: learning rate must be a finite value > 0");
  for (std::size_t h : hidden)
    if (h == 0) throw std::invalid_argument("mlbpo: hidden layer widths must be >= 1");
  if (loss.min_mode == rates::MinMode::Smooth && !(loss.temperature > 0.0))
    throw std::invalid_argument("mlbpo: smooth-min temperature must be > 0");
}

BestTracker::BestTracker(const PrecoderMatrix& p0, double asr0, bool enabled)
    : enabled_(enabled), p0_(p0), best_asr_(asr0) {
  r_.initial_asr = asr0;
}

void BestTracker::offer(std::span<const double> x, double asr) {
  r_.trace.push_back(asr);
  last_x_.assign(x.begin(), x.end());
  if (asr > best_asr_) {
    best_asr_ = asr;
    if (enabled_) best_x_ = last_x_;
  }
  r_.best_trace.push_back(best_asr_);
}

RunResult BestTracker::finish(std::string method, const channel::ChannelEnsemble& ens,
                              const rates::NoisePowers& noise, double seconds) && {
  r_.method = std::move(method);
  r_.iterations = r_.trace.size();
  r_.seconds = seconds;
  const auto& l = p0_.layout;
  r_.last = last_x_.empty() ? p0_ : rates::unpack_active(last_x_, l, p0_.p_t);
  r_.last_asr = r_.trace.empty() ? r_.initial_asr : r_.trace.back();
  if (!enabled_)
    r_.best = r_.last;
  else
    r_.best = best_x_.empty() ? p0_ : rates::unpack_active(best_x_, l, p0_.p_t);
  r_.best_report = rates::saf_report(ens, r_.best, noise);
  r_.split = rates::power_split(r_.best);
  return std::move(r_);
}

RunResult run_mlbpo(const channel::ChannelEnsemble& ens, const PrecoderMatrix& p0, const MlbpoConfig& cfg,
                    const rates::NoisePowers& noise) {
  cfg.validate();
  p0.validate();
  const auto& l = p0.layout;
  if (ens.n_tx() != l.n_tx || ens.n_users() != l.n_users || ens.m() == 0)
    throw std::invalid_argument("mlbpo: ensemble does not match the layout");

  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> nz = noise.expand(l.n_users);
  const std::vector<double> x0 = rates::pack_active(p0);
  grad::Workspace ws;
  // The network input never changes inside the loop.
  const grad::LossGradient g0 = grad::loss_and_gradient(ens, l, x0, nz, cfg.loss, ws);
  const double asr0 = hard_asr(ens, l, x0, nz);

  numerics::RngStream rng(cfg.seed);
  MetaNetParams net = MetaNetParams::create(x0.size(), cfg.hidden, x0.size(), rng, cfg.activation);
  AdamState adam(net.theta.size(), cfg.adam());
  BestTracker tracker(p0, asr0, cfg.track_best);

  for (std::size_t i = 0; i < cfg.iterations; ++i) {
    const grad::ThetaGradient tg = grad::grad_wrt_theta(ens, net, p0, g0.grad, nz, cfg.loss, ws);
    const double asr = cfg.loss.min_mode == rates::MinMode::Hard ? -tg.loss : hard_asr(ens, l, tg.precoder, nz);
    if (cfg.on_iterate) cfg.on_iterate(i, tg.precoder);
    tracker.offer(tg.precoder, asr);
    adam.apply(net.theta, tg.grad);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  RunResult r = std::move(tracker).finish("mlbpo", ens, noise, secs);
  r.network = std::move(net);
  return r;
}

RunResult run_mlbpo(const channel::ChannelEnsemble& ens, const channel::StreamLayout& layout, double p_t,
                    const MlbpoConfig& cfg, const rates::NoisePowers& noise, const InitSplit& split,
                    const InitOptions& init) {
  return run_mlbpo(ens, init_precoder(ens.csit, layout, p_t, split, init), cfg, noise);
}

}  // namespace rsma::meta
