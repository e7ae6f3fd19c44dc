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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "rsma/baselines/baselines.hpp"
#include "rsma/numerics/linalg.hpp"
#include "rsma/rates/scalar_ops.hpp"

namespace rsma::baselines {

using numerics::CMatrix;
using numerics::cplx;

namespace {

void put_unit(CMatrix& cols, std::size_t c, std::vector<cplx> v, std::span<const cplx> fallback) {
  double n = numerics::norm2(v);
  if (!(n > 0.0)) {
    v.assign(fallback.begin(), fallback.end());
    n = numerics::norm2(v);
  }
  for (auto& z : v) z /= n;
  cols.set_col(c, v);
}

bool split_less(const PowerSplit& a, const PowerSplit& b) {
  if (a.q_c != b.q_c) return a.q_c < b.q_c;
  if (a.q_g != b.q_g) return std::lexicographical_compare(a.q_g.begin(), a.q_g.end(), b.q_g.begin(), b.q_g.end());
  return a.q_p < b.q_p;
}

void check_split(const PowerSplit& s, std::size_t n_groups, bool hierarchical) {
  if (s.q_c < 0.0 || s.q_p < 0.0 || std::any_of(s.q_g.begin(), s.q_g.end(), [](double q) { return q < 0.0; }))
    throw std::invalid_argument("power split fractions must be >= 0");
  if (std::abs(s.total() - 1.0) > 1e-12) throw std::invalid_argument("power split fractions must sum to 1");
  if (hierarchical ? s.q_g.size() != n_groups
                   : std::any_of(s.q_g.begin(), s.q_g.end(), [](double q) { return q != 0.0; }))
    throw std::invalid_argument("power split does not match the layout");
}

}  // namespace

std::size_t default_rank(std::size_t n_tx, std::size_t n_groups) {
  if (n_groups == 0) throw std::invalid_argument("default_rank: zero groups");
  return std::max<std::size_t>(1, (n_tx + 2 * n_groups - 1) / (2 * n_groups));
}

FixedDirections fixed_directions(const CMatrix& csit, const channel::StreamLayout& layout, double p_t,
                                 const std::vector<CMatrix>& correlations, std::size_t rank) {
  layout.validate();
  const std::size_t n = layout.n_tx;
  if (csit.rows() != n || csit.cols() != layout.n_users)
    throw std::invalid_argument("fixed_directions: CSIT must be N_t x K");
  if (rank < 1 || rank > n) throw std::invalid_argument("fixed_directions: rank must lie in [1, N_t]");
  if (!(p_t > 0.0)) throw std::invalid_argument("fixed_directions: p_t must be > 0");
  const std::size_t n_corr = layout.hierarchical() ? layout.n_groups : 1;
  if (correlations.size() < n_corr) throw std::invalid_argument("fixed_directions: missing correlation matrices");

  FixedDirections d{layout, CMatrix(n, layout.n_streams())};
  const std::vector<cplx> uniform(n, cplx(1.0, 0.0));

  std::vector<numerics::EigenDecomposition> eig;
  for (std::size_t g = 0; g < n_corr; ++g) {
    if (correlations[g].rows() != n || correlations[g].cols() != n)
      throw std::invalid_argument("fixed_directions: correlation matrices must be N_t x N_t");
    eig.push_back(numerics::herm_eig(correlations[g]));
  }

  put_unit(d.columns, 0, csit.squared_norm() > 0.0 ? numerics::svd_dominant(csit) : uniform, uniform);
  if (layout.hierarchical())
    for (std::size_t g = 0; g < layout.n_groups; ++g) put_unit(d.columns, layout.group_col(g), eig[g].vectors.col(0), uniform);

  const double loading = static_cast<double>(layout.n_users) / p_t;
  const std::size_t groups = layout.hierarchical() ? layout.n_groups : 1;
  for (std::size_t g = 0; g < groups; ++g) {
    std::vector<std::size_t> users;
    if (layout.hierarchical())
      users = layout.members(g);
    else
      for (std::size_t k = 0; k < layout.n_users; ++k) users.push_back(k);
    const CMatrix u = eig[g].vectors.cols_range(0, rank);
    const CMatrix he = u.adjoint() * csit.select_cols(users);  // rank x |users|
    CMatrix gram = he * he.adjoint();
    for (std::size_t i = 0; i < rank; ++i) gram(i, i) += loading;
    const CMatrix w = numerics::solve_hpd(gram, he);
    const CMatrix p = u * w;
    for (std::size_t j = 0; j < users.size(); ++j)
      put_unit(d.columns, layout.private_col(users[j]), p.col(j), u.col(0));
  }
  return d;
}

PrecoderMatrix compose(const FixedDirections& dirs, const PowerSplit& split, double p_t) {
  const auto& l = dirs.layout;
  check_split(split, l.n_groups, l.hierarchical());
  PrecoderMatrix p = PrecoderMatrix::zeros(l, p_t);
  auto scale_col = [&](std::size_t c, double power) {
    const double s = std::sqrt(power);
    for (std::size_t r = 0; r < l.n_tx; ++r) p.columns(r, c) = dirs.columns(r, c) * s;
  };
  scale_col(0, split.q_c * p_t);
  if (l.hierarchical())
    for (std::size_t g = 0; g < l.n_groups; ++g) scale_col(l.group_col(g), split.q_g[g] * p_t);
  for (std::size_t k = 0; k < l.n_users; ++k)
    scale_col(l.private_col(k), split.q_p * p_t / static_cast<double>(l.n_users));
  return p;
}

std::vector<PowerSplit> split_lattice(const channel::StreamLayout& layout, double step) {
  if (!(step > 0.0) || step > 1.0) throw std::invalid_argument("split_lattice: step must lie in (0, 1]");
  const double units_d = std::round(1.0 / step);
  if (std::abs(units_d * step - 1.0) > 1e-9) throw std::invalid_argument("split_lattice: 1/step must be an integer");
  const int units = static_cast<int>(units_d);
  const std::size_t parts = 2 + (layout.hierarchical() ? layout.n_groups : 0);

  std::vector<PowerSplit> out;
  std::vector<int> c(parts, 0);
  // Odometer over compositions of `units` into `parts`, lexicographic.
  auto emit = [&] {
    PowerSplit s;
    s.q_c = c[0] / units_d;
    s.q_g.assign(layout.n_groups, 0.0);
    if (layout.hierarchical())
      for (std::size_t g = 0; g < layout.n_groups; ++g) s.q_g[g] = c[1 + g] / units_d;
    s.q_p = c[parts - 1] / units_d;
    out.push_back(std::move(s));
  };
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i + 1 == parts) {
      c[i] = left;
      emit();
      return;
    }
    for (int v = 0; v <= left; ++v) {
      c[i] = v;
      rec(i + 1, left - v);
    }
  };
  rec(0, units);
  return out;
}

RunResult run_fixed_direction(const channel::ChannelEnsemble& ens, const channel::StreamLayout& layout, double p_t,
                              const std::vector<CMatrix>& correlations, std::size_t rank,
                              const std::vector<PowerSplit>& grid, const rates::NoisePowers& noise) {
  if (grid.empty()) throw std::invalid_argument("fixed_direction: empty power-split grid");
  if (ens.n_tx() != layout.n_tx || ens.n_users() != layout.n_users || ens.m() == 0)
    throw std::invalid_argument("fixed_direction: ensemble does not match the layout");
  for (const auto& s : grid) check_split(s, layout.n_groups, layout.hierarchical());

  const auto t0 = std::chrono::steady_clock::now();
  const FixedDirections dirs = fixed_directions(ens.csit, layout, p_t, correlations, rank);
  const std::size_t k_users = layout.n_users, g_n = layout.n_groups, m_n = ens.m();
  const std::size_t s_n = layout.n_streams();
  const std::vector<double> nz = noise.expand(k_users);

  // gain[(m * K + k) * S + j] = |h_k^(m)H d_j|^2
  std::vector<double> gain(m_n * k_users * s_n);
  for (std::size_t m = 0; m < m_n; ++m)
    for (std::size_t k = 0; k < k_users; ++k) {
      const std::vector<cplx> h = ens.realizations[m].col(k);
      for (std::size_t j = 0; j < s_n; ++j)
        gain[(m * k_users + k) * s_n + j] = std::norm(numerics::inner(h, dirs.columns.col(j)));
    }

  const bool hrs = layout.hierarchical();
  std::vector<double> col_power(s_n), avg_c(k_users), avg_g(k_users), avg_p(k_users);
  auto asr_of = [&](const PowerSplit& s) {
    std::fill(col_power.begin(), col_power.end(), 0.0);
    col_power[0] = s.q_c * p_t;
    if (hrs)
      for (std::size_t g = 0; g < g_n; ++g) col_power[layout.group_col(g)] = s.q_g[g] * p_t;
    for (std::size_t k = 0; k < k_users; ++k)
      col_power[layout.private_col(k)] = s.q_p * p_t / static_cast<double>(k_users);
    std::fill(avg_c.begin(), avg_c.end(), 0.0);
    std::fill(avg_g.begin(), avg_g.end(), 0.0);
    std::fill(avg_p.begin(), avg_p.end(), 0.0);
    for (std::size_t m = 0; m < m_n; ++m)
      for (std::size_t k = 0; k < k_users; ++k) {
        const double* gk = &gain[(m * k_users + k) * s_n];
        const std::size_t own_g = layout.group_of[k];
        double priv_sum = 0.0, other_groups = 0.0;
        for (std::size_t j = 0; j < k_users; ++j)
          if (j != k) priv_sum += col_power[layout.private_col(j)] * gk[layout.private_col(j)];
        if (hrs)
          for (std::size_t g = 0; g < g_n; ++g)
            if (g != own_g) other_groups += col_power[layout.group_col(g)] * gk[layout.group_col(g)];
        const double sig_p = col_power[layout.private_col(k)] * gk[layout.private_col(k)];
        const double sig_g = hrs ? col_power[layout.group_col(own_g)] * gk[layout.group_col(own_g)] : 0.0;
        const double sig_c = col_power[0] * gk[0];
        const double den_p = nz[k] + other_groups + priv_sum;
        const double den_g = den_p + sig_p;
        const double den_c = den_g + sig_g;
        avg_c[k] += rates::ops::rate(sig_c, den_c);
        if (hrs) avg_g[k] += rates::ops::rate(sig_g, den_g);
        avg_p[k] += rates::ops::rate(sig_p, den_p);
      }
    for (std::size_t k = 0; k < k_users; ++k) {
      avg_c[k] /= static_cast<double>(m_n);
      avg_g[k] /= static_cast<double>(m_n);
      avg_p[k] /= static_cast<double>(m_n);
    }
    return rates::reduce_objective(layout, avg_c, avg_g, avg_p, rates::LossOptions{});
  };

  RunResult r;
  r.method = "fixed_direction";
  std::size_t best = 0;
  double best_asr = -1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double a = asr_of(grid[i]);
    r.trace.push_back(a);
    if (a > best_asr || (a == best_asr && split_less(grid[i], grid[best]))) {
      best_asr = a;
      best = i;
    }
    r.best_trace.push_back(best_asr);
  }
  r.iterations = grid.size();
  r.initial_asr = r.trace.front();
  r.best = compose(dirs, grid[best], p_t);
  r.last = compose(dirs, grid.back(), p_t);
  r.last_asr = r.trace.back();
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.best_report = rates::saf_report(ens, r.best, noise);
  r.split = rates::power_split(r.best);
  return r;
}

}  // namespace rsma::baselines
