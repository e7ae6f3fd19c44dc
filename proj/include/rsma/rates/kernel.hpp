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

#ifndef RSMA_RATES_KERNEL_HPP
#define RSMA_RATES_KERNEL_HPP

// Per-realization stream rates, generic over the scalar type so that the same
// arithmetic drives plain evaluation (double) and gradient recording (grad::Var).
// The scalar type must provide, through ADL or the double overloads below:
//   abs2_inner(const double* h, const S* p, n)  -> |h^H p|^2
//   sum_with(double c, span<const S> x, const S& anchor) -> c + sum x
//   rate_of(const S& signal, const S& denom)     -> log2(1 + signal / denom)
//   S + S

#include <span>
#include <vector>

#include "rsma/channel/layout.hpp"
#include "rsma/numerics/cmatrix.hpp"
#include "rsma/rates/scalar_ops.hpp"

namespace rsma::rates {

inline double abs2_inner(const double* h, const double* p, std::size_t n) {
  double re, im;
  ops::inner_parts(h, p, n, re, im);
  return ops::abs2(re, im);
}

inline double sum_with(double c, std::span<const double> x, const double&) {
  double acc = c;
  for (double v : x) acc += v;
  return acc;
}

inline double rate_of(const double& signal, const double& denom) { return ops::rate(signal, denom); }

// Signal and interference-plus-noise of the three streams user k decodes.
template <class S>
struct UserTerms {
  S sig_c, den_c;  // global common
  S sig_g, den_g;  // own group common (hierarchical only)
  S sig_p, den_p;  // private
};

template <class S>
struct KernelScratch {
  std::vector<double> h;  // 2 N_t, interleaved user channel
  std::vector<S> gains;   // per active column
  std::vector<S> terms;
};

// Offset of an active column within the packed real view, in complex entries.
inline std::size_t active_index_of_group(const channel::StreamLayout&, std::size_t g) { return 1 + g; }
inline std::size_t active_index_of_private(const channel::StreamLayout& l, std::size_t k) {
  return 1 + (l.hierarchical() ? l.n_groups : 0) + k;
}

inline void pack_user_channel(const numerics::CMatrix& h, std::size_t k, std::vector<double>& out) {
  out.resize(2 * h.rows());
  for (std::size_t r = 0; r < h.rows(); ++r) {
    out[2 * r] = h(r, k).real();
    out[2 * r + 1] = h(r, k).imag();
  }
}

// h: packed 2 N_t channel of user k; x: packed active precoder entries.
template <class S>
UserTerms<S> user_terms(const channel::StreamLayout& l, const double* h, std::span<const S> x, double noise,
                        std::size_t k, KernelScratch<S>& ws) {
  const std::size_t n = l.n_tx;
  const std::size_t n_active = x.size() / (2 * n);
  ws.gains.clear();
  for (std::size_t a = 0; a < n_active; ++a) ws.gains.push_back(abs2_inner(h, x.data() + 2 * n * a, n));

  const std::size_t own = l.group_of[k];
  ws.terms.clear();
  if (l.hierarchical())
    for (std::size_t g = 0; g < l.n_groups; ++g)
      if (g != own) ws.terms.push_back(ws.gains[active_index_of_group(l, g)]);
  for (std::size_t j = 0; j < l.n_users; ++j)
    if (j != k) ws.terms.push_back(ws.gains[active_index_of_private(l, j)]);

  UserTerms<S> t;
  t.sig_p = ws.gains[active_index_of_private(l, k)];
  t.den_p = sum_with(noise, std::span<const S>(ws.terms), t.sig_p);
  t.sig_c = ws.gains[0];
  if (l.hierarchical()) {
    t.sig_g = ws.gains[active_index_of_group(l, own)];
    t.den_g = t.den_p + t.sig_p;
    t.den_c = t.den_g + t.sig_g;
  } else {
    t.sig_g = t.sig_c;  // unused
    t.den_g = t.den_p;
    t.den_c = t.den_p + t.sig_p;
  }
  return t;
}

template <class S>
struct SampleRates {
  std::vector<S> common, group, priv;  // per user; group is empty in OneLayer mode
};

template <class S>
void sample_rates(const channel::StreamLayout& l, const numerics::CMatrix& h, std::span<const S> x,
                  std::span<const double> noise, SampleRates<S>& out, KernelScratch<S>& ws) {
  out.common.clear();
  out.group.clear();
  out.priv.clear();
  for (std::size_t k = 0; k < l.n_users; ++k) {
    pack_user_channel(h, k, ws.h);
    const UserTerms<S> t = user_terms(l, ws.h.data(), x, noise[k], k, ws);
    out.common.push_back(rate_of(t.sig_c, t.den_c));
    if (l.hierarchical()) out.group.push_back(rate_of(t.sig_g, t.den_g));
    out.priv.push_back(rate_of(t.sig_p, t.den_p));
  }
}

inline double hard_min(std::span<const double> x) { return x[ops::argmin_lowest(x)]; }
inline double soft_min(std::span<const double> x, double t) { return ops::smooth_min(x, t); }

// ASR-style reduction of averaged rates: min over users of the common rates,
// plus per-group mins, plus the private sum. Fixed summation order.
template <class S, class MinFn>
S reduce_rates(const channel::StreamLayout& l, std::span<const S> common, std::span<const S> group,
               std::span<const S> priv, MinFn&& min_of) {
  S acc = min_of(common);
  if (l.hierarchical()) {
    std::vector<S> members;
    for (std::size_t g = 0; g < l.n_groups; ++g) {
      members.clear();
      for (std::size_t k = 0; k < l.n_users; ++k)
        if (l.group_of[k] == g) members.push_back(group[k]);
      acc = acc + min_of(std::span<const S>(members));
    }
  }
  for (std::size_t k = 0; k < l.n_users; ++k) acc = acc + priv[k];
  return acc;
}

}  // namespace rsma::rates

#endif
