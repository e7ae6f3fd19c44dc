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

#include "rsma/numerics/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rsma::numerics {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kHermitianTolerance = 1e-9;

double off_diagonal_norm2(const CMatrix& a) {
  double s = 0.0;
  for (std::size_t p = 0; p < a.rows(); ++p)
    for (std::size_t q = p + 1; q < a.cols(); ++q) s += std::norm(a(p, q));
  return 2.0 * s;
}

}  // namespace

EigenDecomposition herm_eig(const CMatrix& input) {
  if (input.rows() != input.cols()) throw std::invalid_argument("herm_eig: matrix is not square");
  if (!input.all_finite()) throw std::invalid_argument("herm_eig: non-finite entries");
  if (input.hermitian_defect() > kHermitianTolerance)
    throw std::invalid_argument("herm_eig: matrix is not Hermitian");

  const std::size_t n = input.rows();
  CMatrix a(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    a(r, r) = input(r, r).real();
    for (std::size_t c = r + 1; c < n; ++c) {
      a(r, c) = 0.5 * (input(r, c) + std::conj(input(c, r)));
      a(c, r) = std::conj(a(r, c));
    }
  }
  CMatrix v = CMatrix::identity(n);
  const double scale = a.squared_norm();
  const double stop = scale * 1e-30;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_norm2(a) <= stop) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double r = std::abs(apq);
        if (r == 0.0) continue;
        // Phase e^{-i phi} on q reduces the pair to the real symmetric
        // [[app, r], [r, aqq]], which a plane rotation diagonalizes.
        const cplx phase = std::conj(apq) / r;  // e^{-i phi}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * r);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // J = [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
        const cplx j00 = c, j01 = s, j10 = -s * phase, j11 = c * phase;
        for (std::size_t k = 0; k < n; ++k) {  // A <- A J
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * j00 + akq * j10;
          a(k, q) = akp * j01 + akq * j11;
        }
        for (std::size_t k = 0; k < n; ++k) {  // A <- J^H A
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(j00) * apk + std::conj(j10) * aqk;
          a(q, k) = std::conj(j01) * apk + std::conj(j11) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {  // V <- V J
          const cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * j00 + vkq * j10;
          v(k, q) = vkp * j01 + vkq * j11;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });
  EigenDecomposition out{std::vector<double>(n), CMatrix(n, n)};
  for (std::size_t i = 0; i < n; ++i) {
    out.values[i] = a(order[i], order[i]).real();
    for (std::size_t k = 0; k < n; ++k) out.vectors(k, i) = v(k, order[i]);
  }
  return out;
}

std::vector<cplx> svd_dominant(const CMatrix& a) {
  if (a.empty()) throw std::invalid_argument("svd_dominant: empty matrix");
  if (!a.all_finite()) throw std::invalid_argument("svd_dominant: non-finite entries");
  // Start from the strongest column; A A^H applied to it is never zero.
  std::size_t best = 0;
  double best_norm = -1.0;
  for (std::size_t c = 0; c < a.cols(); ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r) s += std::norm(a(r, c));
    if (s > best_norm) {
      best_norm = s;
      best = c;
    }
  }
  if (best_norm == 0.0) throw std::invalid_argument("svd_dominant: zero matrix");

  std::vector<cplx> u = a.col(best);
  const double n0 = norm2(u);
  for (auto& z : u) z /= n0;

  const CMatrix ah = a.adjoint();
  constexpr int kMaxIterations = 10000;
  constexpr double kTolerance = 1e-12;
  for (int it = 0; it < kMaxIterations; ++it) {
    std::vector<cplx> w = a * std::span<const cplx>(ah * std::span<const cplx>(u));
    const double nw = norm2(w);
    if (nw == 0.0) break;
    for (auto& z : w) z /= nw;
    // Align phase before comparing successive iterates.
    const cplx ip = inner(w, u);
    const cplx ph = std::abs(ip) > 0.0 ? ip / std::abs(ip) : cplx{1.0, 0.0};
    double diff = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) diff += std::norm(w[i] * ph - u[i]);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = w[i] * ph;
    if (std::sqrt(diff) <= kTolerance) break;
  }

  std::size_t imax = 0;
  for (std::size_t i = 1; i < u.size(); ++i)
    if (std::abs(u[i]) > std::abs(u[imax])) imax = i;
  const cplx rot = std::conj(u[imax]) / std::abs(u[imax]);
  for (auto& z : u) z *= rot;
  u[imax] = std::abs(u[imax]);
  return u;
}

CMatrix hermitian_sqrt(const CMatrix& a, double clip_tolerance) {
  const EigenDecomposition eig = herm_eig(a);
  const std::size_t n = a.rows();
  std::vector<double> root(n);
  for (std::size_t i = 0; i < n; ++i) {
    double l = eig.values[i];
    if (l < 0.0) {
      if (l <= -clip_tolerance)
        throw std::invalid_argument("hermitian_sqrt: matrix is not positive semidefinite");
      l = 0.0;
    }
    root[i] = std::sqrt(l);
  }
  CMatrix out(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      cplx acc{0.0, 0.0};
      for (std::size_t i = 0; i < n; ++i)
        acc += eig.vectors(r, i) * root[i] * std::conj(eig.vectors(c, i));
      out(r, c) = acc;
    }
  return out;
}

CMatrix solve_hpd(const CMatrix& a, const CMatrix& b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.rows() != n) throw std::invalid_argument("solve_hpd: dimension mismatch");
  // A = L L^H
  CMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j).real();
    for (std::size_t k = 0; k < j; ++k) d -= std::norm(l(j, k));
    if (!(d > 0.0)) throw std::invalid_argument("solve_hpd: matrix is not positive definite");
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      cplx s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / ljj;
    }
  }
  CMatrix x = b;
  for (std::size_t c = 0; c < b.cols(); ++c) {
    for (std::size_t i = 0; i < n; ++i) {  // L y = b
      cplx s = x(i, c);
      for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * x(k, c);
      x(i, c) = s / l(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {  // L^H x = y
      cplx s = x(ii, c);
      for (std::size_t k = ii + 1; k < n; ++k) s -= std::conj(l(k, ii)) * x(k, c);
      x(ii, c) = s / l(ii, ii);
    }
  }
  return x;
}

}  // namespace rsma::numerics
