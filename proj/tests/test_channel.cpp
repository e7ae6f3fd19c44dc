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

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "rsma/channel/layout.hpp"
#include "rsma/channel/scene.hpp"
#include "rsma/channel/serialize.hpp"
#include "rsma/numerics/linalg.hpp"

using namespace rsma::channel;
using rsma::numerics::CMatrix;
using rsma::numerics::cplx;
using rsma::numerics::RngStream;

namespace {

constexpr double kPi = std::numbers::pi;

// Composite midpoint rule: a different method than the library's Simpson rule.
cplx midpoint_lag(double theta, double delta, double d, double lag, std::size_t nodes) {
  const double h = 2.0 * delta / static_cast<double>(nodes);
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < nodes; ++i) {
    const double phi = -delta + h * (static_cast<double>(i) + 0.5);
    acc += std::polar(1.0, -2.0 * kPi * d * lag * std::sin(theta + phi));
  }
  return acc * h / (2.0 * delta);
}

OneRingModel ring(double theta, double spread, double tau2) {
  OneRingModel m;
  m.azimuths = {theta};
  m.spread = spread;
  m.tau2 = {tau2};
  return m;
}

}  // namespace

TEST_CASE("equal_groups assigns contiguous groups and column indices") {
  const auto l = StreamLayout::equal_groups(4, 5, 2, StreamMode::Hierarchical);
  CHECK(l.group_of == std::vector<std::size_t>{0, 0, 0, 1, 1});
  CHECK(l.n_streams() == 8);
  CHECK(l.group_col(1) == 2);
  CHECK(l.private_col(0) == 3);
  CHECK(l.active_columns().size() == 8);
  CHECK(l.real_dim() == 2 * 4 * 8);
  CHECK(l.members(1) == std::vector<std::size_t>{3, 4});

  const auto one = StreamLayout::equal_groups(4, 5, 2, StreamMode::OneLayer);
  CHECK(one.active_columns() == std::vector<std::size_t>{0, 3, 4, 5, 6, 7});
  CHECK(one.real_dim() == 2 * 4 * 6);
}

TEST_CASE("layout validation") {
  StreamLayout l = StreamLayout::equal_groups(2, 3, 1, StreamMode::Hierarchical);
  CHECK_NOTHROW(l.validate());
  l.group_of[1] = 4;
  CHECK_THROWS_AS(l.validate(), std::invalid_argument);
  StreamLayout empty_group{2, 2, 3, {0, 1}, StreamMode::Hierarchical};
  CHECK_THROWS_AS(empty_group.validate(), std::invalid_argument);
  CHECK_THROWS_AS(StreamLayout::equal_groups(0, 2, 1, StreamMode::OneLayer), std::invalid_argument);
  CHECK(stream_mode_from_string("hrs") == StreamMode::Hierarchical);
  CHECK(stream_mode_from_string(to_string(StreamMode::OneLayer)) == StreamMode::OneLayer);
  CHECK_THROWS_AS(stream_mode_from_string("3lrs"), std::invalid_argument);
}

TEST_CASE("one-ring correlation: exact unit diagonal, Hermitian Toeplitz, PSD") {
  for (double spread : {kPi / 8, kPi / 3, 0.05}) {
    const CMatrix r = one_ring_correlation(ring(kPi / 6, spread, 0.4), 8, 0);
    for (std::size_t i = 0; i < 8; ++i) CHECK(r(i, i) == cplx(1.0, 0.0));
    CHECK(r.hermitian_defect() == 0.0);
    for (std::size_t i = 1; i < 8; ++i)
      for (std::size_t j = 1; j < 8; ++j) CHECK(r(i, j) == r(i - 1, j - 1));
    const auto e = rsma::numerics::herm_eig(r);
    for (double v : e.values) CHECK(v >= -1e-9);
  }
}

TEST_CASE("one-ring correlation matches a fine midpoint-rule oracle") {
  const double theta = kPi / 6, delta = kPi / 8;
  const CMatrix r = one_ring_correlation(ring(theta, delta, 0.0), 4, 0);
  double worst = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      const cplx ref = midpoint_lag(theta, delta, 0.5, static_cast<double>(i) - static_cast<double>(j), 100000);
      worst = std::max(worst, std::abs(r(i, j) - ref));
    }
  CHECK(worst <= 1e-8);
}

TEST_CASE("one-ring correlation collapses to rank one as the spread vanishes") {
  const double theta = -kPi / 5;
  const CMatrix r = one_ring_correlation(ring(theta, 1e-8, 0.0), 6, 0);
  const auto e = rsma::numerics::herm_eig(r);
  CHECK(e.values[1] / e.values[0] <= 1e-6);
  // The surviving direction is the steering vector a(theta).
  std::vector<cplx> a(6);
  for (std::size_t n = 0; n < 6; ++n) a[n] = std::polar(1.0 / std::sqrt(6.0), -kPi * n * std::sin(theta));
  CHECK(std::abs(rsma::numerics::inner(e.vectors.col(0), a)) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("one-ring correlation rejects a non-positive spread") {
  CHECK_THROWS_AS(one_ring_correlation(ring(0.0, 0.0, 0.0), 4, 0), std::invalid_argument);
  CHECK_THROWS_AS(one_ring_correlation(ring(0.0, -0.1, 0.0), 4, 0), std::invalid_argument);
}

TEST_CASE("one-ring square roots reconstruct the correlations") {
  OneRingModel m;
  m.azimuths = {-kPi / 4, kPi / 4};
  m.spread = kPi / 8;
  m.tau2 = {0.4};
  const auto layout = StreamLayout::equal_groups(8, 4, 2, StreamMode::Hierarchical);
  const OneRingSampler s(m, layout);
  for (std::size_t g = 0; g < 2; ++g) {
    const CMatrix& r = s.correlation(g);
    const CMatrix& q = s.sqrt_correlation(g);
    CHECK((q * q.adjoint()).max_abs_diff(r) <= 1e-8 * r.frobenius_norm());
  }
}

TEST_CASE("iid error power follows p_t^-alpha") {
  const IidCsitModel m{{}, 0.6, 10.0};
  CHECK(m.error_power() == doctest::Approx(0.251188643150958).epsilon(1e-12));
  CHECK(m.channel_power(3) == 1.0);
}

TEST_CASE("iid scene with zero error power repeats the CSIT exactly") {
  RngStream rng(2);
  const IidCsitModel m{{}, 0.6, std::numeric_limits<double>::infinity()};
  const auto layout = StreamLayout::equal_groups(3, 2, 1, StreamMode::OneLayer);
  const auto ens = draw_iid_scene(rng, m, layout, 5);
  REQUIRE(ens.m() == 5);
  for (const auto& h : ens.realizations) CHECK(h == ens.csit);
}

TEST_CASE("iid CSIT entries have variance sigma_k^2 - sigma_e^2") {
  RngStream rng(21);
  const IidCsitModel m{{}, 0.6, 10.0};
  const auto layout = StreamLayout::equal_groups(100, 1000, 1, StreamMode::OneLayer);
  const auto ens = draw_iid_scene(rng, m, layout, 1);
  const double var = ens.csit.squared_norm() / static_cast<double>(ens.csit.size());
  CHECK(std::abs(var - (1.0 - m.error_power())) < 0.05);
  CMatrix err = ens.realizations[0] - ens.csit;
  const double evar = err.squared_norm() / static_cast<double>(err.size());
  CHECK(std::abs(evar - m.error_power()) < 0.05);
}

TEST_CASE("iid model rejects error power above channel power") {
  RngStream rng(1);
  const IidCsitModel m{{}, 0.6, 0.5};  // 0.5^-0.6 > 1
  const auto layout = StreamLayout::equal_groups(2, 2, 1, StreamMode::OneLayer);
  CHECK_THROWS_AS(draw_iid_scene(rng, m, layout, 3), std::invalid_argument);
  CHECK_THROWS_AS(draw_iid_scene(rng, IidCsitModel{{}, 0.6, 10.0}, layout, 0), std::invalid_argument);
  CHECK_THROWS_AS(draw_iid_scene(rng, IidCsitModel{{1.0}, 0.6, 10.0}, layout, 2), std::invalid_argument);
}

TEST_CASE("iid per-user channel power scales the columns") {
  RngStream rng(22);
  const IidCsitModel m{{1.0, 4.0}, 0.6, 100.0};
  const auto layout = StreamLayout::equal_groups(2000, 2, 1, StreamMode::OneLayer);
  const auto ens = draw_iid_scene(rng, m, layout, 1);
  const auto& h = ens.realizations[0];
  double p0 = 0.0, p1 = 0.0;
  for (std::size_t r = 0; r < 2000; ++r) {
    p0 += std::norm(h(r, 0));
    p1 += std::norm(h(r, 1));
  }
  CHECK(p0 / 2000.0 == doctest::Approx(1.0).epsilon(0.1));
  CHECK(p1 / 2000.0 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("one-ring perfect CSIT repeats the CSIT in every realization") {
  RngStream rng(3);
  const auto layout = StreamLayout::equal_groups(4, 1, 1, StreamMode::Hierarchical);
  const auto ens = draw_one_ring_scene(rng, ring(kPi / 6, kPi / 8, 0.0), layout, 4);
  for (const auto& h : ens.realizations) CHECK(h == ens.csit);
}

TEST_CASE("one-ring CSIT with tau^2 = 1 is uncorrelated with the channel") {
  RngStream rng(4);
  const auto layout = StreamLayout::equal_groups(4, 1, 1, StreamMode::Hierarchical);
  const OneRingSampler s(ring(kPi / 6, kPi / 8, 1.0), layout);
  cplx cross = 0.0;
  double a2 = 0.0, b2 = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const auto ens = s.draw(rng, 1);
    const cplx a = ens.csit(0, 0), b = ens.realizations[0](0, 0);
    cross += a * std::conj(b);
    a2 += std::norm(a);
    b2 += std::norm(b);
  }
  CHECK(std::abs(cross) / std::sqrt(a2 * b2) < 0.03);
}

TEST_CASE("one-ring CSIT and channel covariances match R_g") {
  for (double tau2 : {0.0, 0.4, 1.0}) {
    RngStream rng(5);
    const auto layout = StreamLayout::equal_groups(4, 1, 1, StreamMode::Hierarchical);
    const OneRingSampler s(ring(kPi / 6, kPi / 8, tau2), layout);
    CMatrix cov_hat(4, 4), cov_h(4, 4);
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
      const auto ens = s.draw(rng, 1);
      const auto hh = ens.csit.col(0);
      const auto h = ens.realizations[0].col(0);
      for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) {
          cov_hat(r, c) += hh[r] * std::conj(hh[c]);
          cov_h(r, c) += h[r] * std::conj(h[c]);
        }
    }
    cov_hat *= 1.0 / n;
    cov_h *= 1.0 / n;
    const CMatrix& r = s.correlation(0);
    CHECK((cov_hat - r).frobenius_norm() <= 0.05 * r.frobenius_norm());
    CHECK((cov_h - r).frobenius_norm() <= 0.05 * r.frobenius_norm());
  }
}

TEST_CASE("one-ring model validation") {
  RngStream rng(1);
  const auto layout = StreamLayout::equal_groups(4, 2, 1, StreamMode::Hierarchical);
  CHECK_THROWS_AS(OneRingSampler(ring(0.0, 0.3, 1.5), layout), std::invalid_argument);
  CHECK_THROWS_AS(OneRingSampler(ring(0.0, 0.3, -0.1), layout), std::invalid_argument);
  OneRingModel two = ring(0.0, 0.3, 0.4);
  two.tau2 = {0.1, 0.2, 0.3};
  CHECK_THROWS_AS(OneRingSampler(two, layout), std::invalid_argument);
  const auto hrs2 = StreamLayout::equal_groups(4, 2, 2, StreamMode::Hierarchical);
  CHECK_THROWS_AS(OneRingSampler(ring(0.0, 0.3, 0.4), hrs2), std::invalid_argument);
}

TEST_CASE("equal seeds give identical ensembles") {
  const auto layout = StreamLayout::equal_groups(4, 4, 2, StreamMode::Hierarchical);
  OneRingModel m;
  m.azimuths = {-kPi / 4, kPi / 4};
  m.spread = kPi / 3;
  m.tau2 = {0.4};
  RngStream a(77), b(77);
  const auto ea = draw_one_ring_scene(a, m, layout, 6);
  const auto eb = draw_one_ring_scene(b, m, layout, 6);
  CHECK(ea.csit == eb.csit);
  CHECK(ea.whitened_csit == eb.whitened_csit);
  for (std::size_t i = 0; i < 6; ++i) CHECK(ea.realizations[i] == eb.realizations[i]);

  RngStream c(78), d(78);
  const IidCsitModel im{{}, 0.6, 100.0};
  const auto ia = draw_iid_scene(c, im, layout, 3), ib = draw_iid_scene(d, im, layout, 3);
  CHECK(ia.realizations[2] == ib.realizations[2]);
  for (const auto& h : ia.realizations) CHECK(h.all_finite());
}

TEST_CASE("conditional redraw keeps the CSIT and refreshes realizations") {
  const auto layout = StreamLayout::equal_groups(4, 2, 1, StreamMode::Hierarchical);
  const OneRingSampler s(ring(0.2, kPi / 8, 0.4), layout);
  RngStream rng(9);
  const auto scene = s.draw(rng, 3);
  const auto fresh = s.redraw(rng, scene, 5);
  CHECK(fresh.csit == scene.csit);
  CHECK(fresh.m() == 5);
  CHECK(!(fresh.realizations[0] == scene.realizations[0]));
  ChannelEnsemble no_white = scene;
  no_white.whitened_csit = CMatrix();
  CHECK_THROWS_AS(s.redraw(rng, no_white, 2), std::invalid_argument);
}

TEST_CASE("ensemble JSON round trip is exact") {
  const auto layout = StreamLayout::equal_groups(3, 2, 1, StreamMode::Hierarchical);
  RngStream rng(10);
  const auto ens = draw_one_ring_scene(rng, ring(0.3, 0.4, 0.4), layout, 3);
  const auto back = ensemble_from_json(ensemble_to_json(ens));
  CHECK(back.csit == ens.csit);
  CHECK(back.whitened_csit == ens.whitened_csit);
  REQUIRE(back.m() == 3);
  CHECK(back.realizations[1] == ens.realizations[1]);

  const auto path = std::filesystem::temp_directory_path() / "rsma_ensemble_roundtrip.json";
  save_ensemble(ens, path.string());
  CHECK(load_ensemble(path.string()).realizations[2] == ens.realizations[2]);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_ensemble("/nonexistent/dir/ens.json"), std::runtime_error);
  auto j = ensemble_to_json(ens);
  j["schema_version"] = 99;
  CHECK_THROWS_AS(ensemble_from_json(j), std::invalid_argument);
}
