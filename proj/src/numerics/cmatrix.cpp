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

#include "rsma/numerics/cmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rsma::numerics {

CMatrix::CMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols)
    throw std::invalid_argument("CMatrix: entry count does not match rows x cols");
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::diagonal(std::span<const double> d) {
  CMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

std::vector<cplx> CMatrix::col(std::size_t c) const {
  std::vector<cplx> v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

void CMatrix::set_col(std::size_t c, std::span<const cplx> v) {
  if (v.size() != rows_) throw std::invalid_argument("CMatrix::set_col: length mismatch");
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
}

CMatrix CMatrix::cols_range(std::size_t first, std::size_t count) const {
  if (first + count > cols_) throw std::out_of_range("CMatrix::cols_range");
  CMatrix out(rows_, count);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < count; ++c) out(r, c) = (*this)(r, first + c);
  return out;
}

CMatrix CMatrix::select_cols(std::span<const std::size_t> idx) const {
  CMatrix out(rows_, idx.size());
  for (std::size_t c = 0; c < idx.size(); ++c) {
    if (idx[c] >= cols_) throw std::out_of_range("CMatrix::select_cols");
    for (std::size_t r = 0; r < rows_; ++r) out(r, c) = (*this)(r, idx[c]);
  }
  return out;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

double CMatrix::squared_norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return s;
}

double CMatrix::frobenius_norm() const { return std::sqrt(squared_norm()); }

double CMatrix::max_abs_diff(const CMatrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw std::invalid_argument("CMatrix::max_abs_diff: shape mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < data_.size(); ++i) d = std::max(d, std::abs(data_[i] - other.data_[i]));
  return d;
}

double CMatrix::hermitian_defect() const {
  if (rows_ != cols_) throw std::invalid_argument("hermitian_defect: matrix is not square");
  double d = 0.0;
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = r; c < cols_; ++c)
      d = std::max(d, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
  return d;
}

bool CMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("CMatrix +=: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("CMatrix -=: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

CMatrix& CMatrix::operator*=(cplx s) {
  for (auto& z : data_) z *= s;
  return *this;
}

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
CMatrix operator*(CMatrix a, cplx s) { return a *= s; }

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("CMatrix product: inner dimension mismatch");
  CMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

std::vector<cplx> operator*(const CMatrix& a, std::span<const cplx> x) {
  if (a.cols() != x.size()) throw std::invalid_argument("CMatrix * vector: dimension mismatch");
  std::vector<cplx> y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    cplx acc{0.0, 0.0};
    for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * x[k];
    y[i] = acc;
  }
  return y;
}

double norm2(std::span<const cplx> v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw std::invalid_argument("inner: length mismatch");
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

}  // namespace rsma::numerics
