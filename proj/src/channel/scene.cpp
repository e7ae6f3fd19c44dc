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

#include "rsma/channel/scene.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "rsma/numerics/linalg.hpp"

namespace rsma::channel {

using numerics::cplx;

double IidCsitModel::error_power() const { return std::pow(p_t, -alpha); }

double IidCsitModel::channel_power(std::size_t k) const {
  return sigma_k2.empty() ? 1.0 : sigma_k2.at(k);
}

double OneRingModel::tau2_of(std::size_t k) const {
  if (tau2.empty()) return 0.0;
  return tau2.size() == 1 ? tau2[0] : tau2.at(k);
}

CMatrix one_ring_correlation(const OneRingModel& model, std::size_t n_tx, std::size_t group) {
  if (!(model.spread > 0.0)) throw std::invalid_argument("one_ring_correlation: spread must be > 0");
  if (group >= model.azimuths.size())
    throw std::invalid_argument("one_ring_correlation: no azimuth for group " + std::to_string(group));
  const double theta = model.azimuths[group];
  const double delta = model.spread;
  const double k0 = 2.0 * std::numbers::pi * model.antenna_spacing;

  // Toeplitz: one integral per lag; the zero lag is exactly 1.
  std::vector<cplx> lag(n_tx);
  lag[0] = 1.0;
  for (std::size_t l = 1; l < n_tx; ++l) {
    const double dl = static_cast<double>(l);
    const cplx integral = numerics::simpson(
        [&](double phi) { return std::polar(1.0, -k0 * dl * std::sin(theta + phi)); }, -delta, delta,
        model.quadrature_nodes);
    lag[l] = integral / (2.0 * delta);
  }
  CMatrix r(n_tx, n_tx);
  for (std::size_t i = 0; i < n_tx; ++i)
    for (std::size_t j = 0; j < n_tx; ++j) r(i, j) = i >= j ? lag[i - j] : std::conj(lag[j - i]);
  return r;
}

namespace {

void require_m(std::size_t m) {
  if (m < 1) throw std::invalid_argument("ensemble size m must be >= 1");
}

void check_iid(const IidCsitModel& model, std::size_t n_users) {
  if (!model.sigma_k2.empty() && model.sigma_k2.size() != n_users)
    throw std::invalid_argument("iid model: sigma_k2 must have one entry per user");
  if (!(model.p_t > 0.0)) throw std::invalid_argument("iid model: p_t must be > 0");
  const double e = model.error_power();
  for (std::size_t k = 0; k < n_users; ++k)
    if (e > model.channel_power(k))
      throw std::invalid_argument("iid model: CSIT error power exceeds channel power for user " +
                                  std::to_string(k + 1));
}

// Column k scaled to variance var[k].
CMatrix gaussian_columns(RngStream& rng, std::size_t rows, const std::vector<double>& var) {
  CMatrix m = numerics::gaussian_matrix(rng, rows, var.size(), 1.0);
  for (std::size_t c = 0; c < var.size(); ++c) {
    const double s = std::sqrt(var[c]);
    for (std::size_t r = 0; r < rows; ++r) m(r, c) *= s;
  }
  return m;
}

}  // namespace

ChannelEnsemble redraw_iid(RngStream& rng, const IidCsitModel& model, const CMatrix& csit, std::size_t m) {
  require_m(m);
  check_iid(model, csit.cols());
  const std::vector<double> err(csit.cols(), model.error_power());
  ChannelEnsemble ens;
  ens.csit = csit;
  ens.realizations.reserve(m);
  for (std::size_t i = 0; i < m; ++i) ens.realizations.push_back(csit + gaussian_columns(rng, csit.rows(), err));
  return ens;
}

ChannelEnsemble draw_iid_scene(RngStream& rng, const IidCsitModel& model, const StreamLayout& layout,
                               std::size_t m) {
  layout.validate();
  require_m(m);
  check_iid(model, layout.n_users);
  std::vector<double> csit_var(layout.n_users);
  for (std::size_t k = 0; k < layout.n_users; ++k) csit_var[k] = model.channel_power(k) - model.error_power();
  const CMatrix csit = gaussian_columns(rng, layout.n_tx, csit_var);
  return redraw_iid(rng, model, csit, m);
}

OneRingSampler::OneRingSampler(OneRingModel model, StreamLayout layout)
    : model_(std::move(model)), layout_(std::move(layout)) {
  layout_.validate();
  if (model_.azimuths.size() != layout_.n_groups)
    throw std::invalid_argument("one-ring model: need one azimuth per group");
  if (!model_.tau2.empty() && model_.tau2.size() != 1 && model_.tau2.size() != layout_.n_users)
    throw std::invalid_argument("one-ring model: tau2 must have 1 or K entries");
  for (std::size_t k = 0; k < layout_.n_users; ++k) {
    const double t = model_.tau2_of(k);
    if (!(t >= 0.0 && t <= 1.0))
      throw std::invalid_argument("one-ring model: tau2 outside [0, 1] for user " + std::to_string(k + 1));
  }
  for (std::size_t g = 0; g < layout_.n_groups; ++g) {
    corr_.push_back(one_ring_correlation(model_, layout_.n_tx, g));
    sqrt_corr_.push_back(numerics::hermitian_sqrt(corr_.back()));
  }
}

CMatrix OneRingSampler::colour(const CMatrix& white) const {
  const std::size_t n = layout_.n_tx;
  CMatrix out(n, layout_.n_users);
  for (std::size_t k = 0; k < layout_.n_users; ++k) {
    const CMatrix& s = sqrt_corr_[layout_.group_of[k]];
    for (std::size_t r = 0; r < n; ++r) {
      cplx acc{0.0, 0.0};
      for (std::size_t c = 0; c < n; ++c) acc += s(r, c) * white(c, k);
      out(r, k) = acc;
    }
  }
  return out;
}

ChannelEnsemble OneRingSampler::redraw(RngStream& rng, const ChannelEnsemble& scene, std::size_t m) const {
  require_m(m);
  const CMatrix& ghat = scene.whitened_csit;
  if (ghat.rows() != layout_.n_tx || ghat.cols() != layout_.n_users)
    throw std::invalid_argument("one-ring redraw: scene carries no whitened CSIT of matching shape");
  ChannelEnsemble ens;
  ens.csit = scene.csit;
  ens.whitened_csit = ghat;
  ens.realizations.reserve(m);
  // g | g_hat ~ CN(sqrt(1 - tau^2) g_hat, tau^2 I)
  for (std::size_t i = 0; i < m; ++i) {
    CMatrix w = numerics::gaussian_matrix(rng, layout_.n_tx, layout_.n_users, 1.0);
    for (std::size_t k = 0; k < layout_.n_users; ++k) {
      const double t2 = model_.tau2_of(k);
      const double a = std::sqrt(1.0 - t2);
      const double b = std::sqrt(t2);
      for (std::size_t r = 0; r < layout_.n_tx; ++r) w(r, k) = a * ghat(r, k) + b * w(r, k);
    }
    ens.realizations.push_back(colour(w));
  }
  return ens;
}

ChannelEnsemble OneRingSampler::draw(RngStream& rng, std::size_t m) const {
  require_m(m);
  const CMatrix g = numerics::gaussian_matrix(rng, layout_.n_tx, layout_.n_users, 1.0);
  const CMatrix z = numerics::gaussian_matrix(rng, layout_.n_tx, layout_.n_users, 1.0);
  CMatrix ghat(layout_.n_tx, layout_.n_users);
  for (std::size_t k = 0; k < layout_.n_users; ++k) {
    const double t2 = model_.tau2_of(k);
    const double a = std::sqrt(1.0 - t2);
    const double b = std::sqrt(t2);
    for (std::size_t r = 0; r < layout_.n_tx; ++r) ghat(r, k) = a * g(r, k) + b * z(r, k);
  }
  ChannelEnsemble scene;
  scene.csit = colour(ghat);
  scene.whitened_csit = std::move(ghat);
  return redraw(rng, scene, m);
}

ChannelEnsemble draw_one_ring_scene(RngStream& rng, const OneRingModel& model, const StreamLayout& layout,
                                    std::size_t m) {
  return OneRingSampler(model, layout).draw(rng, m);
}

}  // namespace rsma::channel
