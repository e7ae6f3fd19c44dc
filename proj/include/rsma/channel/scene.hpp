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

#ifndef RSMA_CHANNEL_SCENE_HPP
#define RSMA_CHANNEL_SCENE_HPP

#include <cstddef>
#include <vector>

#include "rsma/channel/layout.hpp"
#include "rsma/numerics/cmatrix.hpp"
#include "rsma/numerics/quadrature.hpp"
#include "rsma/numerics/rng.hpp"

namespace rsma::channel {

using numerics::CMatrix;
using numerics::RngStream;

// Rayleigh channels with CSIT error power sigma_e^2 = p_t^-alpha.
struct IidCsitModel {
  std::vector<double> sigma_k2;  // per-user channel power; empty means 1 for every user
  double alpha = 0.6;
  double p_t = 1.0;

  double error_power() const;
  double channel_power(std::size_t k) const;
};

// Groups of users behind a uniform ring of scatterers seen from a ULA.
struct OneRingModel {
  std::vector<double> azimuths;  // per group, radians
  double spread = 0.0;           // angular half-width, radians
  std::vector<double> tau2;      // per user CSIT quality in [0, 1]; size 1 broadcasts
  double antenna_spacing = 0.5;  // wavelengths
  std::size_t quadrature_nodes = numerics::kDefaultQuadratureNodes;

  double tau2_of(std::size_t k) const;
};

// CSIT plus M channel realizations drawn conditionally on it.
struct ChannelEnsemble {
  CMatrix csit;                       // N_t x K
  std::vector<CMatrix> realizations;  // each N_t x K
  // One-ring scenes only: whitened CSIT (columns g_hat_k), needed to redraw
  // conditional samples. Empty for i.i.d. scenes.
  CMatrix whitened_csit;

  std::size_t m() const { return realizations.size(); }
  std::size_t n_tx() const { return csit.rows(); }
  std::size_t n_users() const { return csit.cols(); }
};

// [R]_{m,n} = 1/(2D) * int_{-D}^{D} exp(-j 2 pi d (m - n) sin(theta_g + phi)) dphi
CMatrix one_ring_correlation(const OneRingModel& model, std::size_t n_tx, std::size_t group);

ChannelEnsemble draw_iid_scene(RngStream& rng, const IidCsitModel& model, const StreamLayout& layout,
                               std::size_t m);
// Fresh realizations H^(m) = csit + error for an existing i.i.d. CSIT.
ChannelEnsemble redraw_iid(RngStream& rng, const IidCsitModel& model, const CMatrix& csit,
                           std::size_t m);

// Caches per-group correlations and their square roots so repeated scene
// draws for the same geometry skip the eigendecompositions.
class OneRingSampler {
 public:
  OneRingSampler(OneRingModel model, StreamLayout layout);

  const OneRingModel& model() const { return model_; }
  const StreamLayout& layout() const { return layout_; }
  const CMatrix& correlation(std::size_t g) const { return corr_.at(g); }
  const CMatrix& sqrt_correlation(std::size_t g) const { return sqrt_corr_.at(g); }
  const std::vector<CMatrix>& correlations() const { return corr_; }

  ChannelEnsemble draw(RngStream& rng, std::size_t m) const;
  // Realizations conditioned on an existing whitened CSIT.
  ChannelEnsemble redraw(RngStream& rng, const ChannelEnsemble& scene, std::size_t m) const;

 private:
  CMatrix colour(const CMatrix& white) const;  // column k -> R_{g(k)}^{1/2} column

  OneRingModel model_;
  StreamLayout layout_;
  std::vector<CMatrix> corr_;
  std::vector<CMatrix> sqrt_corr_;
};

ChannelEnsemble draw_one_ring_scene(RngStream& rng, const OneRingModel& model, const StreamLayout& layout,
                                    std::size_t m);

}  // namespace rsma::channel

#endif
