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

#include "rsma/gradients/gradients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rsma/gradients/var_ops.hpp"
#include "rsma/rates/kernel.hpp"

namespace rsma::grad {

Var abs2_inner(const double* h, const Var* p, std::size_t n) {
  Tape* t = p[0].tape;
  auto& par = t->scratch_parents();
  auto& pd = t->scratch_partials();
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double hr = h[2 * i], hi = h[2 * i + 1];
    const double pr = p[2 * i].val, pi = p[2 * i + 1].val;
    re += hr * pr + hi * pi;
    im += hr * pi - hi * pr;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double hr = h[2 * i], hi = h[2 * i + 1];
    par.push_back(p[2 * i].id);
    pd.push_back(2.0 * (re * hr - im * hi));
    par.push_back(p[2 * i + 1].id);
    pd.push_back(2.0 * (re * hi + im * hr));
  }
  return t->commit_scratch(rates::ops::abs2(re, im));
}

Var sum_with(double c, std::span<const Var> x, const Var& anchor) {
  if (x.empty()) return anchor.tape->variable(c);
  return sum_with(c, x);
}

Var rate_of(const Var& signal, const Var& denom) {
  double ds, dd;
  rates::ops::rate_partials(signal.val, denom.val, ds, dd);
  return signal.tape->binary(rates::ops::rate(signal.val, denom.val), signal, ds, denom, dd);
}

RealView RealView::of(const PrecoderMatrix& p) { return {p.layout, rates::pack_active(p)}; }

PrecoderMatrix RealView::to_precoder(double p_t) const { return rates::unpack_active(values, layout, p_t); }

namespace {

template <class MinFn>
Var reduce_on_tape(const StreamLayout& l, std::span<const Var> c, std::span<const Var> g, std::span<const Var> p,
                   MinFn&& fn) {
  return rates::reduce_rates<Var>(l, c, g, p, fn);
}

}  // namespace

LossGradient loss_and_gradient(const ChannelEnsemble& ens, const StreamLayout& l, std::span<const double> x,
                               std::span<const double> noise, const LossOptions& opts, Workspace& ws) {
  // Pass 1: sample means of every stream rate.
  const rates::StreamAverages avg = rates::average_stream_rates(ens, l, x, noise);
  const std::size_t k_users = l.n_users;

  // Pass 2: adjoints of the objective w.r.t. the means.
  Tape& rt = ws.reduce_tape;
  rt.clear();
  std::vector<Var> vc, vg, vp;
  for (std::size_t k = 0; k < k_users; ++k) vc.push_back(rt.variable(avg.common[k]));
  if (l.hierarchical())
    for (std::size_t k = 0; k < k_users; ++k) vg.push_back(rt.variable(avg.group[k]));
  for (std::size_t k = 0; k < k_users; ++k) vp.push_back(rt.variable(avg.priv[k]));
  Var asr = opts.min_mode == rates::MinMode::Hard
                ? reduce_on_tape(l, vc, vg, vp, [](std::span<const Var> v) { return hard_min(v); })
                : reduce_on_tape(l, vc, vg, vp,
                                 [t = opts.temperature](std::span<const Var> v) { return soft_min(v, t); });
  const Var loss = -asr;
  rt.backward(loss);
  const double inv_m = 1.0 / static_cast<double>(ens.m());
  std::vector<double> sc(k_users), sg(k_users, 0.0), sp(k_users);
  for (std::size_t k = 0; k < k_users; ++k) {
    sc[k] = rt.adjoint(vc[k]) * inv_m;
    if (l.hierarchical()) sg[k] = rt.adjoint(vg[k]) * inv_m;
    sp[k] = rt.adjoint(vp[k]) * inv_m;
  }

  // Pass 3: per-realization backward sweeps, accumulated in sample order.
  LossGradient out;
  out.loss = loss.value();
  out.grad.assign(x.size(), 0.0);
  Tape& st = ws.sample_tape;
  rates::KernelScratch<Var> scratch;
  rates::SampleRates<Var> sr;
  std::vector<Var> xv(x.size());
  for (const auto& h : ens.realizations) {
    st.clear();
    for (std::size_t i = 0; i < x.size(); ++i) xv[i] = st.variable(x[i]);
    rates::sample_rates<Var>(l, h, xv, noise, sr, scratch);
    for (std::size_t k = 0; k < k_users; ++k) {
      if (sc[k] != 0.0) st.seed(sr.common[k], sc[k]);
      if (l.hierarchical() && sg[k] != 0.0) st.seed(sr.group[k], sg[k]);
      st.seed(sr.priv[k], sp[k]);
    }
    st.backward();
    for (std::size_t i = 0; i < x.size(); ++i) out.grad[i] += st.adjoint(xv[i]);
  }
  return out;
}

RealView grad_wrt_precoder(const ChannelEnsemble& ens, const PrecoderMatrix& p, const NoisePowers& noise,
                           const LossOptions& opts) {
  p.validate();
  Workspace ws;
  const std::vector<double> x = rates::pack_active(p);
  LossGradient lg = loss_and_gradient(ens, p.layout, x, noise.expand(p.layout.n_users), opts, ws);
  return {p.layout, std::move(lg.grad)};
}

Composite record_composite(Tape& tape, const meta::MetaNetParams& net, std::span<const double> x0,
                           std::span<const double> input, double p_t) {
  if (input.size() != net.input_dim() || x0.size() != net.output_dim())
    throw std::invalid_argument("record_composite: network dimensions do not match the precoder view");
  Composite c;
  c.theta.reserve(net.theta.size());
  for (double t : net.theta) c.theta.push_back(tape.variable(t));

  std::vector<Var> cur;
  std::vector<Var> next;
  for (std::size_t l = 0; l < net.layers(); ++l) {
    const std::size_t rows = net.dims[l + 1], cols = net.dims[l];
    const std::size_t w0 = net.weight_offset(l), b0 = net.bias_offset(l);
    const bool last = l + 1 == net.layers();
    next.clear();
    for (std::size_t i = 0; i < rows; ++i) {
      std::span<const Var> wrow(c.theta.data() + w0 + i * cols, cols);
      Var pre = l == 0 ? linear_plus(c.theta[b0 + i], wrow, input) : dot_plus(c.theta[b0 + i], wrow, cur);
      if (!last) pre = net.activation == meta::Activation::ReLU ? relu(pre) : tanh(pre);
      next.push_back(pre);
    }
    cur.swap(next);
  }

  std::vector<Var> y;
  y.reserve(x0.size());
  for (std::size_t i = 0; i < x0.size(); ++i) y.push_back(x0[i] + cur[i]);
  const Var power = squared_norm(y);
  if (power.value() > p_t) {
    const Var s = sqrt(p_t / power);
    c.scaled = true;
    c.output.reserve(y.size());
    for (const Var& v : y) c.output.push_back(v * s);
  } else {
    c.output = std::move(y);
  }
  return c;
}

ThetaGradient grad_wrt_theta(const ChannelEnsemble& ens, const meta::MetaNetParams& net, const PrecoderMatrix& p0,
                             std::span<const double> input, std::span<const double> noise,
                             const LossOptions& opts, Workspace& ws) {
  const std::vector<double> x0 = rates::pack_active(p0);
  Tape& nt = ws.net_tape;
  nt.clear();
  const Composite c = record_composite(nt, net, x0, input, p0.p_t);

  ThetaGradient out;
  out.scaled = c.scaled;
  out.precoder.reserve(c.output.size());
  for (const Var& v : c.output) out.precoder.push_back(v.value());

  const LossGradient lg = loss_and_gradient(ens, p0.layout, out.precoder, noise, opts, ws);
  out.loss = lg.loss;
  for (std::size_t i = 0; i < c.output.size(); ++i)
    if (lg.grad[i] != 0.0) nt.seed(c.output[i], lg.grad[i]);
  nt.backward();
  out.grad.resize(c.theta.size());
  for (std::size_t i = 0; i < c.theta.size(); ++i) out.grad[i] = nt.adjoint(c.theta[i]);
  return out;
}

ThetaGradient grad_wrt_theta(const ChannelEnsemble& ens, const meta::MetaNetParams& net, const PrecoderMatrix& p0,
                             const NoisePowers& noise, const LossOptions& opts) {
  Workspace ws;
  const auto nz = noise.expand(p0.layout.n_users);
  const std::vector<double> x0 = rates::pack_active(p0);
  const LossGradient g0 = loss_and_gradient(ens, p0.layout, x0, nz, opts, ws);
  return grad_wrt_theta(ens, net, p0, g0.grad, nz, opts, ws);
}

FiniteDiffResult finite_diff_check(const std::function<double(std::span<const double>)>& f,
                                   std::span<const double> x, std::span<const double> analytic, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("finite_diff_check: step must be > 0");
  if (analytic.size() != x.size()) throw std::invalid_argument("finite_diff_check: gradient length mismatch");
  FiniteDiffResult r;
  r.fd_gradient.resize(x.size());
  std::vector<double> probe(x.begin(), x.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + step;
    const double up = f(probe);
    probe[i] = x[i] - step;
    const double down = f(probe);
    probe[i] = x[i];
    r.fd_gradient[i] = (up - down) / (2.0 * step);
  }
  double scale = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    scale = std::max({scale, std::abs(analytic[i]), std::abs(r.fd_gradient[i])});
  // Round-off in a central difference is ~10 eps |f| / step; a slope must be
  // 1e4 times larger before 1e-4 relative agreement is meaningful.
  const double f0 = std::abs(f(x));
  const double resolution = 1e5 * std::numeric_limits<double>::epsilon() * std::max(1.0, f0) / step;
  const double floor = std::max({1e-3 * scale, resolution, 1e-300});
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = analytic[i], d = r.fd_gradient[i];
    const double e = std::abs(a - d) / std::max({std::abs(a), std::abs(d), floor});
    if (e > r.max_rel_error) {
      r.max_rel_error = e;
      r.worst_index = i;
    }
  }
  return r;
}

}  // namespace rsma::grad
