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
#include <limits>

#include "rsma/baselines/baselines.hpp"
#include "rsma/gradients/gradients.hpp"
#include "rsma/metaopt/adam.hpp"
#include "rsma/metaopt/mlbpo.hpp"
#include "rsma/metaopt/network.hpp"
#include "rsma/metaopt/precoder.hpp"
#include "rsma/numerics/linalg.hpp"
#include "support.hpp"

using namespace rsma::meta;
using rsma::channel::ChannelEnsemble;
using rsma::channel::IidCsitModel;
using rsma::channel::StreamLayout;
using rsma::channel::StreamMode;
using rsma::numerics::CMatrix;
using rsma::numerics::cplx;
using rsma::numerics::RngStream;

namespace {

ChannelEnsemble iid_scene(std::uint64_t seed, std::size_t n_tx, std::size_t k, std::size_t m, double p_t) {
  RngStream rng(seed);
  IidCsitModel model;
  model.p_t = p_t;
  return rsma::channel::draw_iid_scene(rng, model, StreamLayout::equal_groups(n_tx, k, 1, StreamMode::OneLayer), m);
}

double sphere_excess(std::span<const double> x, double p_t) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s - p_t;
}

}  // namespace

TEST_CASE("adam: zero gradient leaves parameters unchanged") {
  AdamState adam(3, {});
  std::vector<double> theta = {1.0, -2.0, 0.5};
  const std::vector<double> zero(3, 0.0);
  for (int i = 0; i < 10; ++i) adam.apply(theta, zero);
  CHECK(theta == std::vector<double>{1.0, -2.0, 0.5});
  CHECK(adam.steps() == 10);
}

TEST_CASE("adam: first step moves each coordinate by about -lr * sign(g)") {
  AdamHyper h;
  h.learning_rate = 0.01;
  AdamState adam(3, h);
  const std::vector<double> g = {3.0, -0.2, 1e-3};
  const auto d = adam.step(g);
  for (std::size_t i = 0; i < 3; ++i) CHECK(d[i] == doctest::Approx(-0.01 * std::copysign(1.0, g[i])).epsilon(1e-4));
}

TEST_CASE("adam: minimizes a 1-D quadratic") {
  AdamHyper h;
  h.learning_rate = 0.01;
  AdamState adam(1, h);
  std::vector<double> theta = {1.0};
  for (int i = 0; i < 2000; ++i) {
    const std::vector<double> g = {2.0 * theta[0]};
    adam.apply(theta, g);
  }
  CHECK(std::abs(theta[0]) <= 1e-3);
}

TEST_CASE("adam: shape mismatch is rejected") {
  AdamState adam(2, {});
  const std::vector<double> g(3, 1.0);
  CHECK_THROWS_AS(adam.step(g), std::invalid_argument);
}

TEST_CASE("init_precoder: 1LRS power allocation") {
  RngStream rng(7);
  const auto l = StreamLayout::equal_groups(16, 16, 1, StreamMode::OneLayer);
  const CMatrix h = rsma::numerics::gaussian_matrix(rng, 16, 16, 1.0);
  const auto p = init_precoder(h, l, 10.0, InitSplit::one_layer());
  CHECK(p.column_power(0) == doctest::Approx(9.0).epsilon(1e-12));
  for (std::size_t k = 0; k < 16; ++k) CHECK(p.column_power(l.private_col(k)) == doctest::Approx(0.0625).epsilon(1e-12));
  CHECK(std::abs(p.total_power() - 10.0) <= 1e-9);

  // Common column along the dominant left singular vector, privates along MRT.
  const auto u = rsma::numerics::svd_dominant(h);
  const auto pc = p.columns.col(0);
  CHECK(std::abs(rsma::numerics::inner(u, pc)) == doctest::Approx(3.0).epsilon(1e-9));
  for (std::size_t k = 0; k < 16; ++k) {
    const auto hk = h.col(k);
    const auto pk = p.columns.col(l.private_col(k));
    CHECK(std::abs(rsma::numerics::inner(hk, pk)) ==
          doctest::Approx(rsma::numerics::norm2(hk) * 0.25).epsilon(1e-9));
  }
}

TEST_CASE("init_precoder: single antenna, single user") {
  const auto l = StreamLayout::equal_groups(1, 1, 1, StreamMode::OneLayer);
  CMatrix h(1, 1);
  h(0, 0) = cplx(0.0, 2.0);
  const auto p = init_precoder(h, l, 4.0, InitSplit::one_layer());
  CHECK(std::abs(p.columns(0, 0)) == doctest::Approx(std::sqrt(3.6)));
  CHECK(std::abs(p.columns(0, l.private_col(0))) == doctest::Approx(std::sqrt(0.4)));
}

TEST_CASE("init_precoder: HRS group columns share q_g equally") {
  RngStream rng(3);
  const auto l = StreamLayout::equal_groups(8, 6, 3, StreamMode::Hierarchical);
  const CMatrix h = rsma::numerics::gaussian_matrix(rng, 8, 6, 1.0);
  const auto p = init_precoder(h, l, 30.0, InitSplit::hierarchical());
  CHECK(p.column_power(0) == doctest::Approx(13.5));
  for (std::size_t g = 0; g < 3; ++g) CHECK(p.column_power(l.group_col(g)) == doctest::Approx(4.5));
  for (std::size_t k = 0; k < 6; ++k) CHECK(p.column_power(l.private_col(k)) == doctest::Approx(0.5));
  CHECK(std::abs(p.total_power() - 30.0) <= 1e-9);
  const auto split = rsma::rates::power_split(p);
  CHECK(split.total() == doctest::Approx(1.0));
}

TEST_CASE("init_precoder: zero CSIT column") {
  const auto l = StreamLayout::equal_groups(4, 2, 1, StreamMode::OneLayer);
  CMatrix h(4, 2);
  h(0, 0) = 1.0;
  CHECK_THROWS_AS(init_precoder(h, l, 1.0, InitSplit::one_layer()), std::invalid_argument);
  InitOptions opts;
  opts.zero_csit_fallback = true;
  const auto p = init_precoder(h, l, 1.0, InitSplit::one_layer(), opts);
  for (std::size_t n = 0; n < 4; ++n) CHECK(std::abs(p.columns(n, l.private_col(1))) == doctest::Approx(std::sqrt(0.05 / 4)));
  CHECK(std::abs(p.total_power() - 1.0) <= 1e-12);
}

TEST_CASE("init_precoder: rejects bad splits") {
  const auto l = StreamLayout::equal_groups(2, 2, 1, StreamMode::OneLayer);
  const CMatrix h = CMatrix::identity(2);
  CHECK_THROWS_AS(init_precoder(h, l, 1.0, InitSplit{-0.1, 0.0, 1.1}), std::invalid_argument);
  CHECK_THROWS_AS(init_precoder(h, l, 1.0, InitSplit{0.0, 0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(init_precoder(h, l, 0.0, InitSplit::one_layer()), std::invalid_argument);
}

TEST_CASE("network: zero output layer maps everything to zero") {
  RngStream rng(1);
  const std::vector<std::size_t> hidden = {5, 4};
  const auto net = MetaNetParams::create(3, hidden, 2, rng);
  const std::vector<double> x = {1.0, -2.0, 3.0};
  const auto y = mlp_forward(net, x);
  CHECK(y == std::vector<double>{0.0, 0.0});
  CHECK(net.theta.size() == MetaNetParams::param_count(net.dims));
  CHECK(net.theta.size() == (3 * 5 + 5) + (5 * 4 + 4) + (4 * 2 + 2));
  for (std::size_t i = net.weight_offset(0); i < net.weight_offset(1); ++i)
    CHECK(std::abs(net.theta[i]) <= 1.0 / std::sqrt(3.0));
}

TEST_CASE("network: 1-1-1 ReLU with unit weights is the identity on positives") {
  const std::vector<std::size_t> hidden = {1};
  auto net = MetaNetParams::zeros(1, hidden, 1);
  net.theta[net.weight_offset(0)] = 1.0;
  net.theta[net.weight_offset(1)] = 1.0;
  CHECK(mlp_forward(net, std::vector<double>{2.0})[0] == 2.0);
  CHECK(mlp_forward(net, std::vector<double>{-2.0})[0] == 0.0);
  net.activation = Activation::Tanh;
  CHECK(mlp_forward(net, std::vector<double>{2.0})[0] == doctest::Approx(std::tanh(2.0)));
}

TEST_CASE("network: finite for large inputs, rejects mismatched input, JSON round trip") {
  RngStream rng(2);
  const std::vector<std::size_t> hidden = {6};
  auto net = MetaNetParams::create(4, hidden, 3, rng);
  for (auto& t : net.theta) t = rng.uniform(-1.0, 1.0);
  const auto y = mlp_forward(net, std::vector<double>{1e6, -1e6, 1e6, 1e6});
  for (double v : y) CHECK(std::isfinite(v));
  CHECK_THROWS_AS(mlp_forward(net, std::vector<double>{1.0}), std::invalid_argument);
  const auto back = metanet_from_json(to_json(net));
  CHECK(back.dims == net.dims);
  CHECK(back.theta == net.theta);
  CHECK(back.activation == net.activation);
}

TEST_CASE("project: inside the ball is untouched, outside is scaled onto the sphere") {
  const auto l = StreamLayout::equal_groups(2, 1, 1, StreamMode::OneLayer);
  auto p = PrecoderMatrix::zeros(l, 1.0);
  p.columns(0, 0) = cplx(0.5, 0.0);
  p.columns(1, 0) = cplx(0.0, 0.5);
  const auto q = project(p);
  CHECK(q.columns.max_abs_diff(p.columns) == 0.0);

  p.columns(0, 0) = cplx(1.0, 1.0);
  p.columns(1, 0) = cplx(1.0, -1.0);  // trace 4
  const auto r = project(p);
  CHECK(r.columns(0, 0).real() == doctest::Approx(0.5));
  CHECK(r.columns(1, 0).imag() == doctest::Approx(-0.5));
  CHECK(r.total_power() == doctest::Approx(1.0).epsilon(1e-12));
  const auto rr = project(r);
  CHECK(rr.columns.max_abs_diff(r.columns) <= 1e-15);
}

TEST_CASE("project: random precoders land inside the ball") {
  RngStream rng(5);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> x(12);
    const double scale = rng.uniform(0.01, 10.0);
    for (auto& v : x) v = scale * rng.normal();
    const double p_t = rng.uniform(0.1, 100.0);
    project_packed(x, p_t);
    CHECK(sphere_excess(x, p_t) <= 1e-9 * p_t);
  }
}

TEST_CASE("mlbpo: zero iterations returns P0") {
  const auto ens = iid_scene(11, 2, 2, 16, 10.0);
  const auto l = StreamLayout::equal_groups(2, 2, 1, StreamMode::OneLayer);
  const auto p0 = init_precoder(ens.csit, l, 10.0, InitSplit::one_layer());
  MlbpoConfig cfg;
  cfg.iterations = 0;
  const auto r = run_mlbpo(ens, p0, cfg);
  CHECK(r.best.columns.max_abs_diff(p0.columns) == 0.0);
  CHECK(r.best_asr() == doctest::Approx(rsma::rates::saf_report(ens, p0).asr).epsilon(1e-14));
  CHECK(r.trace.empty());
}

TEST_CASE("mlbpo: first iterate is P0 and every iterate is feasible") {
  const auto ens = iid_scene(12, 4, 3, 20, 100.0);
  const auto l = StreamLayout::equal_groups(4, 3, 1, StreamMode::OneLayer);
  const auto p0 = init_precoder(ens.csit, l, 100.0, InitSplit::one_layer());
  const auto x0 = rsma::rates::pack_active(p0);
  MlbpoConfig cfg;
  cfg.iterations = 60;
  cfg.hidden = {8, 8};
  std::size_t calls = 0;
  double worst = -std::numeric_limits<double>::infinity();
  double first_diff = -1.0;
  cfg.on_iterate = [&](std::size_t i, std::span<const double> x) {
    ++calls;
    worst = std::max(worst, sphere_excess(x, 100.0));
    if (i == 0) {
      first_diff = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) first_diff = std::max(first_diff, std::abs(x[j] - x0[j]));
    }
  };
  const auto r = run_mlbpo(ens, p0, cfg);
  CHECK(calls == 60);
  CHECK(worst <= 1e-9 * 100.0);
  CHECK(first_diff <= 1e-12);
  CHECK(r.trace.front() == doctest::Approx(r.initial_asr).epsilon(1e-12));
  for (std::size_t i = 1; i < r.best_trace.size(); ++i) CHECK(r.best_trace[i] >= r.best_trace[i - 1]);
  CHECK(r.best_asr() >= r.initial_asr);
  CHECK(r.best.total_power() <= 100.0 * (1.0 + 1e-9));
  CHECK(r.network.has_value());
}

TEST_CASE("mlbpo: frozen network reproduces P0") {
  const auto ens = iid_scene(13, 3, 2, 10, 10.0);
  const auto l = StreamLayout::equal_groups(3, 2, 1, StreamMode::OneLayer);
  const auto p0 = init_precoder(ens.csit, l, 10.0, InitSplit::one_layer());
  RngStream rng(1);
  const auto in = l.real_dim();
  const std::vector<std::size_t> hidden = {5};
  const auto net = MetaNetParams::create(in, hidden, in, rng);
  const auto tg = rsma::grad::grad_wrt_theta(ens, net, p0);
  const auto x0 = rsma::rates::pack_active(p0);
  REQUIRE(tg.precoder.size() == x0.size());
  for (std::size_t j = 0; j < x0.size(); ++j) CHECK(tg.precoder[j] == doctest::Approx(x0[j]).epsilon(1e-14));
  CHECK(-tg.loss == doctest::Approx(rsma::rates::saf_report(ens, p0).asr).epsilon(1e-12));
}

TEST_CASE("mlbpo: runs are bit-reproducible") {
  const auto ens = iid_scene(14, 3, 3, 12, 31.6);
  const auto l = StreamLayout::equal_groups(3, 3, 1, StreamMode::OneLayer);
  MlbpoConfig cfg;
  cfg.iterations = 40;
  cfg.hidden = {10, 10};
  const auto a = run_mlbpo(ens, l, 31.6, cfg);
  const auto b = run_mlbpo(ens, l, 31.6, cfg);
  CHECK(to_json(a, false, true).dump() == to_json(b, false, true).dump());
  cfg.seed = 2;
  const auto c = run_mlbpo(ens, l, 31.6, cfg);
  CHECK(to_json(a, false, true).dump() != to_json(c, false, true).dump());
}

TEST_CASE("mlbpo: reaches the direct-Adam optimum on a small instance") {
  const double p_t = 100.0;
  const auto ens = iid_scene(15, 2, 2, 16, p_t);
  const auto l = StreamLayout::equal_groups(2, 2, 1, StreamMode::OneLayer);
  const auto p0 = init_precoder(ens.csit, l, p_t, InitSplit::one_layer());
  MlbpoConfig cfg;
  cfg.iterations = 200;
  const auto m = run_mlbpo(ens, p0, cfg);
  rsma::baselines::DirectAdamConfig dc;
  dc.iterations = 2000;
  dc.learning_rate = 1e-2 * std::sqrt(p_t);
  const auto d = rsma::baselines::run_direct_adam(ens, p0, dc);
  MESSAGE("mlbpo " << m.best_asr() << " direct " << d.best_asr() << " p0 " << m.initial_asr);
  CHECK(m.best_asr() >= m.initial_asr);
  CHECK(m.best_asr() >= 0.95 * d.best_asr());
}

TEST_CASE("mlbpo: config validation") {
  const auto ens = iid_scene(16, 2, 2, 4, 1.0);
  const auto l = StreamLayout::equal_groups(2, 2, 1, StreamMode::OneLayer);
  MlbpoConfig cfg;
  cfg.learning_rate = 0.0;
  CHECK_THROWS_AS(run_mlbpo(ens, l, 1.0, cfg), std::invalid_argument);
  cfg = {};
  cfg.hidden = {4, 0};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
