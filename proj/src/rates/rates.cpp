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

#include "rsma/rates/rates.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rsma/rates/kernel.hpp"

namespace rsma::rates {

PrecoderMatrix PrecoderMatrix::zeros(const StreamLayout& layout, double p_t) {
  layout.validate();
  return {layout, CMatrix(layout.n_tx, layout.n_streams()), p_t};
}

double PrecoderMatrix::column_power(std::size_t c) const {
  double s = 0.0;
  for (std::size_t r = 0; r < columns.rows(); ++r) s += std::norm(columns(r, c));
  return s;
}

void PrecoderMatrix::enforce_layout() {
  if (layout.hierarchical()) return;
  for (std::size_t g = 0; g < layout.n_groups; ++g)
    for (std::size_t r = 0; r < columns.rows(); ++r) columns(r, layout.group_col(g)) = 0.0;
}

void PrecoderMatrix::validate() const {
  layout.validate();
  if (columns.rows() != layout.n_tx || columns.cols() != layout.n_streams())
    throw std::invalid_argument("precoder: shape does not match layout (expected " +
                                std::to_string(layout.n_tx) + " x " + std::to_string(layout.n_streams()) + ")");
  if (!columns.all_finite()) throw std::invalid_argument("precoder: non-finite entries");
}

std::vector<double> pack_active(const PrecoderMatrix& p) {
  const auto cols = p.layout.active_columns();
  std::vector<double> x;
  x.reserve(2 * p.layout.n_tx * cols.size());
  for (std::size_t c : cols)
    for (std::size_t r = 0; r < p.layout.n_tx; ++r) {
      x.push_back(p.columns(r, c).real());
      x.push_back(p.columns(r, c).imag());
    }
  return x;
}

PrecoderMatrix unpack_active(std::span<const double> x, const StreamLayout& layout, double p_t) {
  PrecoderMatrix p = PrecoderMatrix::zeros(layout, p_t);
  const auto cols = layout.active_columns();
  if (x.size() != 2 * layout.n_tx * cols.size())
    throw std::invalid_argument("unpack_active: real view length does not match layout");
  std::size_t i = 0;
  for (std::size_t c : cols)
    for (std::size_t r = 0; r < layout.n_tx; ++r, i += 2) p.columns(r, c) = {x[i], x[i + 1]};
  return p;
}

double PowerSplit::total() const {
  double s = q_c;
  for (double g : q_g) s += g;
  return s + q_p;
}

PowerSplit power_split(const PrecoderMatrix& p) {
  PowerSplit s;
  s.q_c = p.column_power(0) / p.p_t;
  s.q_g.resize(p.layout.n_groups);
  for (std::size_t g = 0; g < p.layout.n_groups; ++g) s.q_g[g] = p.column_power(p.layout.group_col(g)) / p.p_t;
  for (std::size_t k = 0; k < p.layout.n_users; ++k) s.q_p += p.column_power(p.layout.private_col(k));
  s.q_p /= p.p_t;
  return s;
}

std::vector<double> NoisePowers::expand(std::size_t n_users) const {
  if (values_.size() == 1) return std::vector<double>(n_users, values_[0]);
  if (values_.size() != n_users) throw std::invalid_argument("noise: need one power per user");
  return values_;
}

namespace {

void check_noise(std::span<const double> noise) {
  for (double n : noise)
    if (!(n > 0.0)) throw std::invalid_argument("noise power must be > 0");
}

void check_channel(const CMatrix& h, const StreamLayout& l) {
  if (h.rows() != l.n_tx || h.cols() != l.n_users)
    throw std::invalid_argument("channel matrix must be N_t x K (" + std::to_string(l.n_tx) + " x " +
                                std::to_string(l.n_users) + "), got " + std::to_string(h.rows()) + " x " +
                                std::to_string(h.cols()));
}

}  // namespace

SinrTriplet sinr_triplet(std::span<const numerics::cplx> h_k, const PrecoderMatrix& p, std::size_t user,
                         double noise2) {
  if (!(noise2 > 0.0)) throw std::invalid_argument("sinr_triplet: noise power must be > 0");
  if (h_k.size() != p.layout.n_tx) throw std::invalid_argument("sinr_triplet: channel length != N_t");
  if (user >= p.layout.n_users) throw std::invalid_argument("sinr_triplet: user index out of range");
  std::vector<double> h(2 * h_k.size());
  for (std::size_t r = 0; r < h_k.size(); ++r) {
    h[2 * r] = h_k[r].real();
    h[2 * r + 1] = h_k[r].imag();
  }
  const std::vector<double> x = pack_active(p);
  KernelScratch<double> ws;
  const auto t = user_terms<double>(p.layout, h.data(), x, noise2, user, ws);
  SinrTriplet s;
  s.common = t.sig_c / t.den_c;
  s.group = p.layout.hierarchical() ? t.sig_g / t.den_g : 0.0;
  s.priv = t.sig_p / t.den_p;
  return s;
}

RateReport rate_report(const CMatrix& h, const PrecoderMatrix& p, const NoisePowers& noise) {
  p.validate();
  check_channel(h, p.layout);
  const auto nz = noise.expand(p.layout.n_users);
  check_noise(nz);
  const std::vector<double> x = pack_active(p);
  KernelScratch<double> ws;
  SampleRates<double> sr;
  sample_rates<double>(p.layout, h, x, nz, sr, ws);

  const auto& l = p.layout;
  RateReport r;
  r.common_rates = sr.common;
  r.group_rates = l.hierarchical() ? sr.group : std::vector<double>(l.n_users, 0.0);
  r.private_rates = sr.priv;
  r.r_c = hard_min(r.common_rates);
  r.r_cg.assign(l.n_groups, 0.0);
  if (l.hierarchical())
    for (std::size_t g = 0; g < l.n_groups; ++g) {
      std::vector<double> m;
      for (std::size_t k : l.members(g)) m.push_back(r.group_rates[k]);
      r.r_cg[g] = hard_min(m);
    }
  LossOptions hard;
  r.sum_rate = reduce_objective(l, r.common_rates, r.group_rates, r.private_rates, hard);
  return r;
}

double reduce_objective(const StreamLayout& layout, std::span<const double> common, std::span<const double> group,
                        std::span<const double> priv, const LossOptions& opts) {
  if (opts.min_mode == MinMode::Hard)
    return reduce_rates<double>(layout, common, group, priv, [](std::span<const double> v) { return hard_min(v); });
  const double t = opts.temperature;
  return reduce_rates<double>(layout, common, group, priv,
                              [t](std::span<const double> v) { return soft_min(v, t); });
}

StreamAverages average_stream_rates(const channel::ChannelEnsemble& ens, const StreamLayout& l,
                                    std::span<const double> x, std::span<const double> noise) {
  if (ens.m() == 0) throw std::invalid_argument("ensemble is empty");
  if (x.size() != l.real_dim()) throw std::invalid_argument("packed precoder length does not match layout");
  if (noise.size() != l.n_users) throw std::invalid_argument("noise: need one power per user");
  check_noise(noise);
  KernelScratch<double> ws;
  SampleRates<double> sr;
  StreamAverages a{std::vector<double>(l.n_users, 0.0), std::vector<double>(l.n_users, 0.0),
                   std::vector<double>(l.n_users, 0.0)};
  for (const auto& h : ens.realizations) {
    check_channel(h, l);
    sample_rates<double>(l, h, x, noise, sr, ws);
    for (std::size_t k = 0; k < l.n_users; ++k) {
      a.common[k] += sr.common[k];
      if (l.hierarchical()) a.group[k] += sr.group[k];
      a.priv[k] += sr.priv[k];
    }
  }
  const double m = static_cast<double>(ens.m());
  for (std::size_t k = 0; k < l.n_users; ++k) {
    a.common[k] /= m;
    a.group[k] /= m;
    a.priv[k] /= m;
  }
  return a;
}

namespace {

StreamAverages average_rates(const channel::ChannelEnsemble& ens, const PrecoderMatrix& p, const NoisePowers& noise) {
  p.validate();
  const std::vector<double> x = pack_active(p);
  return average_stream_rates(ens, p.layout, x, noise.expand(p.layout.n_users));
}

}  // namespace

SafReport saf_report(const channel::ChannelEnsemble& ens, const PrecoderMatrix& p, const NoisePowers& noise) {
  StreamAverages a = average_rates(ens, p, noise);
  const auto& l = p.layout;
  SafReport r;
  r.samples = ens.m();
  r.r_c = hard_min(a.common);
  r.r_cg.assign(l.n_groups, 0.0);
  if (l.hierarchical())
    for (std::size_t g = 0; g < l.n_groups; ++g) {
      std::vector<double> m;
      for (std::size_t k : l.members(g)) m.push_back(a.group[k]);
      r.r_cg[g] = hard_min(m);
    }
  r.asr = reduce_objective(l, a.common, a.group, a.priv, LossOptions{});
  r.common_rates = std::move(a.common);
  r.group_rates = std::move(a.group);
  r.private_rates = std::move(a.priv);
  return r;
}

double mlbpo_loss(const channel::ChannelEnsemble& ens, const PrecoderMatrix& p, const NoisePowers& noise,
                  const LossOptions& opts) {
  const StreamAverages a = average_rates(ens, p, noise);
  return -reduce_objective(p.layout, a.common, a.group, a.priv, opts);
}

nlohmann::json to_json(const RateReport& r) {
  return {{"common_rates", r.common_rates}, {"group_rates", r.group_rates}, {"private_rates", r.private_rates},
          {"r_c", r.r_c},                   {"r_cg", r.r_cg},               {"sum_rate", r.sum_rate}};
}

nlohmann::json to_json(const SafReport& r) {
  return {{"common_rates", r.common_rates}, {"group_rates", r.group_rates}, {"private_rates", r.private_rates},
          {"r_c", r.r_c},                   {"r_cg", r.r_cg},               {"asr", r.asr},
          {"samples", r.samples}};
}

}  // namespace rsma::rates
