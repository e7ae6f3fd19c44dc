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

#include "rsma/gradients/gradcheck.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "rsma/rates/kernel.hpp"

namespace rsma::grad {

namespace {

constexpr double kKinkMargin = 1e-4;

std::size_t pick(numerics::RngStream& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.next_u64() % (hi - lo + 1));
}

// Smallest gap between the minimum and the runner-up of each min-reduction.
double min_gap(const StreamLayout& l, const rates::StreamAverages& a) {
  auto gap = [](std::vector<double> v) {
    if (v.size() < 2) return std::numeric_limits<double>::infinity();
    std::sort(v.begin(), v.end());
    return v[1] - v[0];
  };
  double g = gap(a.common);
  if (l.hierarchical())
    for (std::size_t grp = 0; grp < l.n_groups; ++grp) {
      std::vector<double> m;
      for (std::size_t k : l.members(grp)) m.push_back(a.group[k]);
      g = std::min(g, gap(m));
    }
  return g;
}

// Smallest |pre-activation| over hidden units.
double relu_margin(const meta::MetaNetParams& net, std::span<const double> x) {
  double margin = std::numeric_limits<double>::infinity();
  std::vector<double> cur(x.begin(), x.end()), next;
  for (std::size_t l = 0; l + 1 < net.layers(); ++l) {
    const std::size_t rows = net.dims[l + 1], cols = net.dims[l];
    const double* w = net.theta.data() + net.weight_offset(l);
    const double* b = net.theta.data() + net.bias_offset(l);
    next.assign(rows, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
      double acc = b[i];
      for (std::size_t j = 0; j < cols; ++j) acc += w[i * cols + j] * cur[j];
      margin = std::min(margin, std::abs(acc));
      next[i] = meta::activate(net.activation, acc);
    }
    cur.swap(next);
  }
  return margin;
}

ChannelEnsemble random_ensemble(numerics::RngStream& rng, const StreamLayout& l, std::size_t m) {
  ChannelEnsemble ens;
  ens.csit = numerics::gaussian_matrix(rng, l.n_tx, l.n_users, 0.7);
  for (std::size_t i = 0; i < m; ++i)
    ens.realizations.push_back(ens.csit + numerics::gaussian_matrix(rng, l.n_tx, l.n_users, 0.3));
  return ens;
}

}  // namespace

GradcheckSummary run_gradcheck(const GradcheckOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  GradcheckSummary summary;
  numerics::RngStream rng(opts.seed);
  Workspace ws;
  const LossOptions loss_opts;

  while (summary.instances.size() < opts.instances) {
    GradcheckInstance inst;
    inst.n_tx = pick(rng, 1, opts.max_tx);
    inst.n_users = pick(rng, 1, opts.max_users);
    inst.n_groups = pick(rng, 1, std::min(opts.max_groups, inst.n_users));
    inst.m = pick(rng, 1, opts.max_m);
    inst.mode = rng.uniform() < 0.5 ? channel::StreamMode::OneLayer : channel::StreamMode::Hierarchical;
    const StreamLayout layout = StreamLayout::equal_groups(inst.n_tx, inst.n_users, inst.n_groups, inst.mode);
    const ChannelEnsemble ens = random_ensemble(rng, layout, inst.m);
    std::vector<double> noise(inst.n_users);
    for (auto& n : noise) n = rng.uniform(0.5, 2.0);
    const double p_t = rng.uniform(1.0, 20.0);

    // Precoder gradient at a random point.
    PrecoderMatrix p = PrecoderMatrix::zeros(layout, p_t);
    for (auto& z : p.columns.data()) z = rng.complex_normal(1.0);
    p.enforce_layout();
    const std::vector<double> x = rates::pack_active(p);
    if (min_gap(layout, rates::average_stream_rates(ens, layout, x, noise)) < kKinkMargin) {
      ++summary.redraws;
      continue;
    }
    const LossGradient lg = loss_and_gradient(ens, layout, x, noise, loss_opts, ws);
    auto loss_at = [&](std::span<const double> v) {
      const auto a = rates::average_stream_rates(ens, layout, v, noise);
      return -rates::reduce_objective(layout, a.common, a.group, a.priv, loss_opts);
    };
    inst.precoder_error = finite_diff_check(loss_at, x, lg.grad, opts.precoder_step).max_rel_error;

    // Network gradient through projection and loss, with a non-zero output layer.
    const std::size_t dim = layout.real_dim();
    std::vector<std::size_t> hidden(pick(rng, 1, 2));
    for (auto& h : hidden) h = pick(rng, 2, 5);
    const auto act = rng.uniform() < 0.5 ? meta::Activation::ReLU : meta::Activation::Tanh;
    meta::MetaNetParams net = meta::MetaNetParams::zeros(dim, hidden, dim, act);
    for (auto& t : net.theta) t = rng.uniform(-0.8, 0.8);
    // Start either inside the power ball or well outside it.
    const bool want_scaled = rng.uniform() < 0.5;
    PrecoderMatrix p0 = p;
    p0.columns *= std::sqrt((want_scaled ? 0.9 : 0.3) * p_t / p.total_power());
    const std::vector<double> input = lg.grad;
    if (relu_margin(net, input) < kKinkMargin) {
      ++summary.redraws;
      continue;
    }
    Tape probe_tape;
    const Composite probe = record_composite(probe_tape, net, rates::pack_active(p0), input, p_t);
    std::vector<double> out;
    for (const Var& v : probe.output) out.push_back(v.value());
    std::vector<double> y(out.size());
    {
      const auto x0 = rates::pack_active(p0);
      const auto g = meta::mlp_forward(net, input);
      for (std::size_t i = 0; i < y.size(); ++i) y[i] = x0[i] + g[i];
    }
    const double pw = rates::ops::packed_power(y);
    if (std::abs(pw - p_t) < 1e-3 * p_t ||
        min_gap(layout, rates::average_stream_rates(ens, layout, out, noise)) < kKinkMargin) {
      ++summary.redraws;
      continue;
    }
    inst.scaled_branch = probe.scaled;
    const ThetaGradient tg = grad_wrt_theta(ens, net, p0, input, noise, loss_opts, ws);
    const std::vector<double> x0 = rates::pack_active(p0);
    auto theta_loss = [&](std::span<const double> th) {
      meta::MetaNetParams n2 = net;
      n2.theta.assign(th.begin(), th.end());
      const auto g = meta::mlp_forward(n2, input);
      std::vector<double> z(x0.size());
      for (std::size_t i = 0; i < z.size(); ++i) z[i] = x0[i] + g[i];
      const double pz = rates::ops::packed_power(z);
      if (pz > p_t) {
        const double s = std::sqrt(p_t / pz);
        for (auto& v : z) v *= s;
      }
      return loss_at(z);
    };
    inst.theta_error = finite_diff_check(theta_loss, net.theta, tg.grad, opts.theta_step).max_rel_error;

    summary.max_precoder_error = std::max(summary.max_precoder_error, inst.precoder_error);
    summary.max_theta_error = std::max(summary.max_theta_error, inst.theta_error);
    summary.instances.push_back(inst);
  }
  summary.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return summary;
}

}  // namespace rsma::grad
