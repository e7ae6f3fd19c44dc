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

#include <chrono>
#include <cmath>
#include <numbers>

#include "rsma/gradients/gradcheck.hpp"
#include "rsma/gradients/gradients.hpp"
#include "rsma/rates/scalar_ops.hpp"
#include "rsma/gradients/tape.hpp"
#include "support.hpp"

using namespace rsma::grad;
using rsma::channel::StreamMode;
using rsma::numerics::CMatrix;
using rsma::numerics::cplx;
using rsma::numerics::RngStream;

namespace {

ChannelEnsemble small_ensemble(RngStream& rng, std::size_t n, std::size_t k, std::size_t m) {
  ChannelEnsemble e;
  e.csit = rsma::numerics::gaussian_matrix(rng, n, k, 0.7);
  for (std::size_t i = 0; i < m; ++i) e.realizations.push_back(e.csit + rsma::numerics::gaussian_matrix(rng, n, k, 0.3));
  return e;
}

PrecoderMatrix random_precoder(RngStream& rng, const StreamLayout& l, double p_t, double var = 1.0) {
  PrecoderMatrix p = PrecoderMatrix::zeros(l, p_t);
  for (auto& z : p.columns.data()) z = rng.complex_normal(var);
  p.enforce_layout();
  return p;
}

double loss_of(const ChannelEnsemble& e, const StreamLayout& l, std::span<const double> x, double p_t,
               const LossOptions& o = {}) {
  return rsma::rates::mlbpo_loss(e, rsma::rates::unpack_active(x, l, p_t), 1.0, o);
}

}  // namespace

TEST_CASE("tape derivatives of the elementary operations") {
  Tape t;
  const Var x = t.variable(0.7), y = t.variable(-1.3);
  const Var f = log1p(x * x) + exp(y) * sqrt(x) - y / x + tanh(y) * relu(x) - square(y) + log(x - y);
  t.backward(f);
  const double xv = 0.7, yv = -1.3;
  const double dfdx = 2 * xv / (1 + xv * xv) + std::exp(yv) * 0.5 / std::sqrt(xv) + yv / (xv * xv) +
                      std::tanh(yv) + 1.0 / (xv - yv);
  const double dfdy = std::exp(yv) * std::sqrt(xv) - 1.0 / xv + (1 - std::tanh(yv) * std::tanh(yv)) * xv -
                      2 * yv - 1.0 / (xv - yv);
  CHECK(t.adjoint(x) == doctest::Approx(dfdx).epsilon(1e-14));
  CHECK(t.adjoint(y) == doctest::Approx(dfdy).epsilon(1e-14));
}

TEST_CASE("n-ary tape nodes") {
  Tape t;
  std::vector<Var> w = {t.variable(1.0), t.variable(2.0)}, x = {t.variable(3.0), t.variable(-4.0)};
  const Var b = t.variable(0.5);
  const Var d = dot_plus(b, w, x);
  CHECK(d.value() == 0.5 + 3.0 - 8.0);
  t.backward(d);
  CHECK(t.adjoint(w[1]) == -4.0);
  CHECK(t.adjoint(x[0]) == 1.0);
  CHECK(t.adjoint(b) == 1.0);

  Tape u;
  std::vector<Var> v = {u.variable(3.0), u.variable(4.0)};
  const Var n = squared_norm(v);
  u.backward(n);
  CHECK(n.value() == 25.0);
  CHECK(u.adjoint(v[1]) == 8.0);
  const std::vector<double> c = {2.0, -1.0};
  const Var lp = linear_plus(v[0], v, c);
  u.backward(lp);
  CHECK(lp.value() == 3.0 + 6.0 - 4.0);
  CHECK(u.adjoint(v[0]) == 3.0);
}

TEST_CASE("hard min sends the subgradient to the lowest-index minimizer") {
  Tape t;
  std::vector<Var> x = {t.variable(2.0), t.variable(1.0), t.variable(1.0)};
  const Var m = min_lowest(x);
  t.backward(m);
  CHECK(m.value() == 1.0);
  CHECK(t.adjoint(x[0]) == 0.0);
  CHECK(t.adjoint(x[1]) == 1.0);
  CHECK(t.adjoint(x[2]) == 0.0);
}

TEST_CASE("smooth min weights sum to one and follow the softmin") {
  Tape t;
  std::vector<Var> x = {t.variable(0.2), t.variable(0.25), t.variable(0.9)};
  const Var s = smooth_min(x, 0.05);
  t.backward(s);
  double sum = 0.0, z = 0.0;
  for (const Var& v : x) z += std::exp(-v.value() / 0.05);
  for (const Var& v : x) {
    sum += t.adjoint(v);
    CHECK(t.adjoint(v) == doctest::Approx(std::exp(-v.value() / 0.05) / z).epsilon(1e-12));
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s.value() == doctest::Approx(-0.05 * std::log(z)).epsilon(1e-13));
}

TEST_CASE("mixing tapes is rejected and clear() resets a tape") {
  Tape a, b;
  const Var x = a.variable(1.0), y = b.variable(2.0);
  CHECK_THROWS_AS(x + y, std::logic_error);
  a.clear();
  CHECK(a.size() == 0);
  const Var z = a.variable(3.0);
  const Var w = z * z;
  a.backward(w);
  CHECK(a.adjoint(z) == 6.0);
}

TEST_CASE("RealView round trip is exact") {
  RngStream rng(1);
  const auto l = StreamLayout::equal_groups(3, 3, 2, StreamMode::OneLayer);
  const PrecoderMatrix p = random_precoder(rng, l, 2.0);
  const RealView v = RealView::of(p);
  CHECK(v.values.size() == l.real_dim());
  CHECK(v.to_precoder(2.0).columns == p.columns);
}

TEST_CASE("single-user gradient matches the closed form") {
  const auto l = StreamLayout::equal_groups(1, 1, 1, StreamMode::OneLayer);
  ChannelEnsemble e;
  e.csit = CMatrix(1, 1, {1.0});
  e.realizations = {e.csit};
  PrecoderMatrix p = PrecoderMatrix::zeros(l, 4.0);
  const cplx pp(0.8, -0.6);
  p.columns(0, l.private_col(0)) = pp;
  const double sigma2 = 1.7;
  const RealView g = grad_wrt_precoder(e, p, sigma2);
  // Active view: [common re, im, private re, im].
  const double n2 = std::norm(pp);
  const double closed_re = -(2.0 * pp.real() / ((1.0 + n2 / sigma2) * sigma2 * std::numbers::ln2));
  const double closed_im = -(2.0 * pp.imag() / ((1.0 + n2 / sigma2) * sigma2 * std::numbers::ln2));
  CHECK(g.values[2] == doctest::Approx(closed_re).epsilon(1e-13));
  CHECK(g.values[3] == doctest::Approx(closed_im).epsilon(1e-13));
}

TEST_CASE("directional derivative vanishes at a 1-D stationary point") {
  RngStream rng(2);
  const auto l = StreamLayout::equal_groups(2, 1, 1, StreamMode::OneLayer);
  // One realization and one user: along any line the loss is -log2(1 + q(t))
  // with q a convex quadratic, so it has a single interior maximum.
  const auto e = small_ensemble(rng, 2, 1, 1);
  const PrecoderMatrix p = random_precoder(rng, l, 5.0);
  const auto x = rsma::rates::pack_active(p);
  std::vector<double> d(x.size());
  for (auto& v : d) v = rng.uniform(-1.0, 1.0);
  auto along = [&](double t) {
    std::vector<double> y(x);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += t * d[i];
    return y;
  };
  double lo = -50.0, hi = 50.0;
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 200; ++it) {
    const double a = hi - r * (hi - lo), b = lo + r * (hi - lo);
    if (loss_of(e, l, along(a), 5.0) > loss_of(e, l, along(b), 5.0))
      hi = b;
    else
      lo = a;
  }
  const double ts = 0.5 * (lo + hi);
  REQUIRE(std::abs(ts) < 49.0);
  const RealView g = grad_wrt_precoder(e, rsma::rates::unpack_active(along(ts), l, 5.0));
  double dd = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) dd += g.values[i] * d[i];
  CHECK(std::abs(dd) <= 1e-6);
}

TEST_CASE("gradient is equivariant under per-column phase rotations") {
  RngStream rng(3);
  const auto l = StreamLayout::equal_groups(3, 4, 2, StreamMode::Hierarchical);
  const auto e = small_ensemble(rng, 3, 4, 5);
  const PrecoderMatrix p = random_precoder(rng, l, 8.0);
  PrecoderMatrix q = p;
  std::vector<cplx> phase(l.n_streams());
  for (std::size_t c = 0; c < l.n_streams(); ++c) {
    phase[c] = std::polar(1.0, rng.uniform(0.0, 2.0 * std::numbers::pi));
    for (std::size_t r = 0; r < l.n_tx; ++r) q.columns(r, c) *= phase[c];
  }
  const RealView gp = grad_wrt_precoder(e, p), gq = grad_wrt_precoder(e, q);
  const auto cols = l.active_columns();
  double worst = 0.0;
  std::size_t i = 0;
  for (std::size_t c : cols)
    for (std::size_t r = 0; r < l.n_tx; ++r, i += 2) {
      const cplx a(gp.values[i], gp.values[i + 1]), b(gq.values[i], gq.values[i + 1]);
      worst = std::max(worst, std::abs(b - phase[c] * a));
    }
  CHECK(worst <= 1e-10);
}

TEST_CASE("loss_and_gradient agrees with mlbpo_loss and is reproducible") {
  RngStream rng(4);
  const auto l = StreamLayout::equal_groups(3, 3, 2, StreamMode::Hierarchical);
  const auto e = small_ensemble(rng, 3, 3, 7);
  const PrecoderMatrix p = random_precoder(rng, l, 3.0);
  const auto x = rsma::rates::pack_active(p);
  const std::vector<double> noise(3, 1.0);
  Workspace ws;
  for (auto mode : {rsma::rates::MinMode::Hard, rsma::rates::MinMode::Smooth}) {
    const LossOptions o{mode, 0.05};
    const LossGradient a = loss_and_gradient(e, l, x, noise, o, ws);
    const LossGradient b = loss_and_gradient(e, l, x, noise, o, ws);
    CHECK(a.loss == rsma::rates::mlbpo_loss(e, p, 1.0, o));
    CHECK(a.loss == b.loss);
    CHECK(a.grad == b.grad);
  }
}

TEST_CASE("precoder gradient matches central differences on random instances") {
  RngStream rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto mode = trial % 2 ? StreamMode::Hierarchical : StreamMode::OneLayer;
    const auto l = StreamLayout::equal_groups(3, 4, 2, mode);
    const auto e = small_ensemble(rng, 3, 4, 6);
    const PrecoderMatrix p = random_precoder(rng, l, 6.0);
    const auto x = rsma::rates::pack_active(p);
    const RealView g = grad_wrt_precoder(e, p);
    const auto r = finite_diff_check([&](std::span<const double> v) { return loss_of(e, l, v, 6.0); }, x, g.values,
                                     1e-6);
    CHECK(r.max_rel_error <= 1e-5);
  }
}

TEST_CASE("smooth-min gradient matches central differences") {
  RngStream rng(6);
  const auto l = StreamLayout::equal_groups(2, 4, 2, StreamMode::Hierarchical);
  const auto e = small_ensemble(rng, 2, 4, 4);
  const PrecoderMatrix p = random_precoder(rng, l, 6.0);
  const LossOptions o{rsma::rates::MinMode::Smooth, 0.1};
  const RealView g = grad_wrt_precoder(e, p, 1.0, o);
  const auto x = rsma::rates::pack_active(p);
  const auto r = finite_diff_check([&](std::span<const double> v) { return loss_of(e, l, v, 6.0, o); }, x, g.values,
                                   1e-6);
  CHECK(r.max_rel_error <= 1e-5);
}

TEST_CASE("finite_diff_check on a quadratic and input validation") {
  const std::vector<double> x = {1.0, 2.0}, g = {2.0, 4.0};
  auto f = [](std::span<const double> v) { return v[0] * v[0] + v[1] * v[1]; };
  CHECK(finite_diff_check(f, x, g, 1e-4).max_rel_error <= 1e-8);
  CHECK_THROWS_AS(finite_diff_check(f, x, g, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(finite_diff_check(f, x, std::vector<double>{1.0}, 1e-4), std::invalid_argument);
  const std::vector<double> wrong = {2.0, 4.5};
  CHECK(finite_diff_check(f, x, wrong, 1e-4).worst_index == 1);
}

TEST_CASE("theta gradient with a zero output layer equals the precoder gradient") {
  RngStream rng(7);
  const auto l = StreamLayout::equal_groups(2, 3, 1, StreamMode::OneLayer);
  const auto e = small_ensemble(rng, 2, 3, 5);
  const PrecoderMatrix p0 = random_precoder(rng, l, 10.0, 0.5);
  REQUIRE(p0.total_power() <= 10.0);
  const std::size_t dim = l.real_dim();
  const std::vector<std::size_t> hidden = {4};
  const auto net = rsma::meta::MetaNetParams::create(dim, hidden, dim, rng);
  const ThetaGradient tg = grad_wrt_theta(e, net, p0);
  const RealView gp = grad_wrt_precoder(e, p0);
  const std::size_t b = net.bias_offset(1);
  for (std::size_t i = 0; i < dim; ++i) CHECK(tg.grad[b + i] == doctest::Approx(gp.values[i]).epsilon(1e-12));
  CHECK(!tg.scaled);
  CHECK(tg.precoder == rsma::rates::pack_active(p0));
}

TEST_CASE("theta gradient through the scaling branch of the projection") {
  RngStream rng(8);
  const auto l = StreamLayout::equal_groups(2, 2, 1, StreamMode::OneLayer);
  const auto e = small_ensemble(rng, 2, 2, 4);
  PrecoderMatrix p0 = random_precoder(rng, l, 1.0);
  p0.columns *= std::sqrt(2.0 / p0.total_power());  // twice the budget
  const std::size_t dim = l.real_dim();
  const std::vector<std::size_t> hidden = {3};
  const auto net = rsma::meta::MetaNetParams::create(dim, hidden, dim, rng);
  const ThetaGradient tg = grad_wrt_theta(e, net, p0);
  CHECK(tg.scaled);
  // Omega(y) = s y with s = sqrt(p_t / |y|^2): J^T g = s (g - y (y.g) / |y|^2).
  const auto y = rsma::rates::pack_active(p0);
  const double yy = rsma::rates::ops::packed_power(y), s = std::sqrt(1.0 / yy);
  std::vector<double> z(y);
  for (auto& v : z) v *= s;
  const RealView g = grad_wrt_precoder(e, rsma::rates::unpack_active(z, l, 1.0));
  double yg = 0.0;
  for (std::size_t i = 0; i < dim; ++i) yg += y[i] * g.values[i];
  const std::size_t b = net.bias_offset(1);
  for (std::size_t i = 0; i < dim; ++i)
    CHECK(tg.grad[b + i] == doctest::Approx(s * (g.values[i] - y[i] * yg / yy)).epsilon(1e-10));
}

TEST_CASE("zero network input and zero biases give zero first-layer weight gradients") {
  RngStream rng(9);
  const auto l = StreamLayout::equal_groups(2, 2, 1, StreamMode::OneLayer);
  const auto e = small_ensemble(rng, 2, 2, 3);
  const PrecoderMatrix p0 = random_precoder(rng, l, 10.0, 0.5);
  const std::size_t dim = l.real_dim();
  const std::vector<std::size_t> hidden = {4};
  auto net = rsma::meta::MetaNetParams::zeros(dim, hidden, dim, rsma::meta::Activation::Tanh);
  for (auto& t : net.theta) t = rng.uniform(-0.5, 0.5);
  for (std::size_t layer = 0; layer < net.layers(); ++layer)
    for (std::size_t i = 0; i < net.dims[layer + 1]; ++i) net.theta[net.bias_offset(layer) + i] = 0.0;
  const std::vector<double> input(dim, 0.0), noise(2, 1.0);
  Workspace ws;
  const ThetaGradient tg = grad_wrt_theta(e, net, p0, input, noise, LossOptions{}, ws);
  for (std::size_t i = 0; i < dim * 4; ++i) CHECK(tg.grad[net.weight_offset(0) + i] == 0.0);
}

TEST_CASE("tiny network: full finite-difference sweep over every parameter") {
  // N_t = 1, K = 2, OneLayer: three active columns, a real view of length 6.
  RngStream rng(10);
  const auto l = StreamLayout::equal_groups(1, 2, 1, StreamMode::OneLayer);
  const auto e = small_ensemble(rng, 1, 2, 2);
  const std::size_t dim = l.real_dim();
  REQUIRE(dim == 6);
  for (int trial = 0; trial < 6; ++trial) {
    const double p_t = 4.0;
    PrecoderMatrix p0 = random_precoder(rng, l, p_t);
    p0.columns *= std::sqrt((trial % 2 ? 0.3 : 0.95) * p_t / p0.total_power());
    auto net = rsma::meta::MetaNetParams::zeros(dim, std::vector<std::size_t>{3}, dim,
                                                trial < 3 ? rsma::meta::Activation::Tanh
                                                          : rsma::meta::Activation::ReLU);
    for (auto& t : net.theta) t = rng.uniform(-0.6, 0.6);
    const std::vector<double> noise(2, 1.0);
    Workspace ws;
    const std::vector<double> input = grad_wrt_precoder(e, p0).values;
    const ThetaGradient tg = grad_wrt_theta(e, net, p0, input, noise, LossOptions{}, ws);
    const auto x0 = rsma::rates::pack_active(p0);
    auto f = [&](std::span<const double> th) {
      auto n2 = net;
      n2.theta.assign(th.begin(), th.end());
      const auto out = rsma::meta::mlp_forward(n2, input);
      std::vector<double> z(dim);
      for (std::size_t i = 0; i < dim; ++i) z[i] = x0[i] + out[i];
      const double pw = rsma::rates::ops::packed_power(z);
      if (pw > p_t)
        for (auto& v : z) v *= std::sqrt(p_t / pw);
      return loss_of(e, l, z, p_t);
    };
    CHECK(finite_diff_check(f, net.theta, tg.grad, 1e-6).max_rel_error <= 1e-4);
  }
}

TEST_CASE("composite replay is bit-identical") {
  RngStream rng(11);
  const auto l = StreamLayout::equal_groups(2, 3, 2, StreamMode::Hierarchical);
  const auto e = small_ensemble(rng, 2, 3, 4);
  const PrecoderMatrix p0 = random_precoder(rng, l, 3.0, 0.3);
  const std::size_t dim = l.real_dim();
  auto net = rsma::meta::MetaNetParams::zeros(dim, std::vector<std::size_t>{5, 4}, dim);
  for (auto& t : net.theta) t = rng.uniform(-0.3, 0.3);
  const ThetaGradient a = grad_wrt_theta(e, net, p0), b = grad_wrt_theta(e, net, p0);
  CHECK(a.loss == b.loss);
  CHECK(a.grad == b.grad);
  CHECK(a.precoder == b.precoder);
}

TEST_CASE("gradcheck suite passes on 50 random instances within a minute") {
  const auto t0 = std::chrono::steady_clock::now();
  GradcheckOptions o;
  o.seed = 3;
  const GradcheckSummary s = run_gradcheck(o);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(s.instances.size() == 50);
  CHECK(s.passed(1e-4));
  CHECK(secs < 60.0);
  bool saw_scaled = false, saw_inside = false, saw_hrs = false;
  for (const auto& i : s.instances) {
    saw_scaled = saw_scaled || i.scaled_branch;
    saw_inside = saw_inside || !i.scaled_branch;
    saw_hrs = saw_hrs || i.mode == StreamMode::Hierarchical;
  }
  CHECK(saw_scaled);
  CHECK(saw_inside);
  CHECK(saw_hrs);
}
