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

#include "rsma/metaopt/precoder.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rsma/numerics/linalg.hpp"
#include "rsma/rates/scalar_ops.hpp"

namespace rsma::meta {

using numerics::cplx;

namespace {

std::vector<cplx> uniform_direction(std::size_t n) {
  return std::vector<cplx>(n, cplx(1.0 / std::sqrt(static_cast<double>(n)), 0.0));
}

std::vector<cplx> dominant_or_fallback(const rates::CMatrix& m, const InitOptions& opts, const char* what) {
  if (m.squared_norm() == 0.0) {
    if (!opts.zero_csit_fallback) throw std::invalid_argument(std::string("init_precoder: zero ") + what);
    return uniform_direction(m.rows());
  }
  return numerics::svd_dominant(m);
}

void put_column(PrecoderMatrix& p, std::size_t col, const std::vector<cplx>& dir, double power) {
  const double s = std::sqrt(power) / numerics::norm2(dir);
  for (std::size_t r = 0; r < dir.size(); ++r) p.columns(r, col) = dir[r] * s;
}

}  // namespace

PrecoderMatrix init_precoder(const rates::CMatrix& csit, const rates::StreamLayout& layout, double p_t,
                             const InitSplit& split, const InitOptions& opts) {
  layout.validate();
  if (csit.rows() != layout.n_tx || csit.cols() != layout.n_users)
    throw std::invalid_argument("init_precoder: CSIT must be N_t x K");
  if (!(p_t > 0.0)) throw std::invalid_argument("init_precoder: p_t must be > 0");
  if (split.q_c < 0.0 || split.q_g < 0.0 || split.q_p < 0.0)
    throw std::invalid_argument("init_precoder: split fractions must be >= 0");

  double qc = split.q_c, qg = layout.hierarchical() ? split.q_g : 0.0, qp = split.q_p;
  const double total = qc + qg + qp;
  if (!(total > 0.0)) throw std::invalid_argument("init_precoder: split fractions sum to zero");
  qc /= total;
  qg /= total;
  qp /= total;

  PrecoderMatrix p = PrecoderMatrix::zeros(layout, p_t);
  if (qc > 0.0) put_column(p, 0, dominant_or_fallback(csit, opts, "CSIT matrix"), qc * p_t);
  if (qg > 0.0)
    for (std::size_t g = 0; g < layout.n_groups; ++g) {
      const auto members = layout.members(g);
      const rates::CMatrix sub = csit.select_cols(members);
      put_column(p, layout.group_col(g), dominant_or_fallback(sub, opts, "group CSIT submatrix"),
                 qg * p_t / static_cast<double>(layout.n_groups));
    }
  if (qp > 0.0)
    for (std::size_t k = 0; k < layout.n_users; ++k) {
      std::vector<cplx> h = csit.col(k);
      if (numerics::norm2(h) == 0.0) {
        if (!opts.zero_csit_fallback)
          throw std::invalid_argument("init_precoder: zero CSIT column for user " + std::to_string(k + 1));
        h = uniform_direction(layout.n_tx);
      }
      put_column(p, layout.private_col(k), h, qp * p_t / static_cast<double>(layout.n_users));
    }
  return p;
}

bool project_packed(std::vector<double>& x, double p_t) {
  const double power = rates::ops::packed_power(x);
  if (power <= p_t) return false;
  const double s = std::sqrt(p_t / power);
  for (auto& v : x) v *= s;
  return true;
}

PrecoderMatrix project(const PrecoderMatrix& p) {
  std::vector<double> x = rates::pack_active(p);
  if (!project_packed(x, p.p_t)) return p;
  return rates::unpack_active(x, p.layout, p.p_t);
}

}  // namespace rsma::meta
