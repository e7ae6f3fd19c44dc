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

#ifndef RSMA_RATES_SCALAR_OPS_HPP
#define RSMA_RATES_SCALAR_OPS_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

// Scalar formulas shared by the plain and the taped evaluation paths. Both
// paths call exactly these functions so their primal values agree bit for bit.
namespace rsma::rates::ops {

// log2(1 + signal / denom)
inline double rate(double signal, double denom) { return std::log1p(signal / denom) / std::numbers::ln2; }

// d rate / d signal, d rate / d denom
inline void rate_partials(double signal, double denom, double& d_signal, double& d_denom) {
  const double total = denom + signal;
  d_signal = 1.0 / (total * std::numbers::ln2);
  d_denom = -signal / (denom * total * std::numbers::ln2);
}

// |h^H p|^2 with h and p stored as interleaved (re, im) pairs of length 2n.
inline void inner_parts(const double* h, const double* p, std::size_t n, double& re, double& im) {
  re = 0.0;
  im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double hr = h[2 * i], hi = h[2 * i + 1];
    const double pr = p[2 * i], pi = p[2 * i + 1];
    re += hr * pr + hi * pi;
    im += hr * pi - hi * pr;
  }
}

inline double abs2(double re, double im) { return re * re + im * im; }

// Sum of squares of a packed real view, left to right; this equals
// tr(P P^H) and is the power figure the projection tests against.
inline double packed_power(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc;
}

// Softmin weights w (sum 1) and -t log sum exp(-x / t), shifted for stability.
inline double smooth_min_with_weights(std::span<const double> x, double t, std::span<double> w) {
  if (!(t > 0.0)) throw std::invalid_argument("smooth min temperature must be > 0");
  const double lo = *std::min_element(x.begin(), x.end());
  double z = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    w[i] = std::exp(-(x[i] - lo) / t);
    z += w[i];
  }
  for (auto& wi : w) wi /= z;
  return lo - t * std::log(z);
}

inline double smooth_min(std::span<const double> x, double t) {
  std::vector<double> w(x.size());
  return smooth_min_with_weights(x, t, w);
}

// Index of the lowest-index minimizer.
inline std::size_t argmin_lowest(std::span<const double> x) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < x.size(); ++i)
    if (x[i] < x[best]) best = i;
  return best;
}

}  // namespace rsma::rates::ops

#endif
