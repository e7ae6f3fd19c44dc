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

#ifndef RSMA_NUMERICS_CMATRIX_HPP
#define RSMA_NUMERICS_CMATRIX_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace rsma::numerics {

using cplx = std::complex<double>;

// Dense complex matrix, row-major storage.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols);
  CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);

  static CMatrix identity(std::size_t n);
  static CMatrix diagonal(std::span<const double> d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<cplx> data() { return data_; }
  std::span<const cplx> data() const { return data_; }

  std::vector<cplx> col(std::size_t c) const;
  void set_col(std::size_t c, std::span<const cplx> v);
  // Columns [first, first + count) as a new matrix.
  CMatrix cols_range(std::size_t first, std::size_t count) const;
  CMatrix select_cols(std::span<const std::size_t> idx) const;

  CMatrix adjoint() const;
  double frobenius_norm() const;
  double squared_norm() const;  // sum of |a_ij|^2 == tr(A A^H)
  double max_abs_diff(const CMatrix& other) const;
  // max |A - A^H| entry; requires a square matrix
  double hermitian_defect() const;
  bool all_finite() const;

  CMatrix& operator+=(const CMatrix& o);
  CMatrix& operator-=(const CMatrix& o);
  CMatrix& operator*=(cplx s);

  friend bool operator==(const CMatrix&, const CMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(CMatrix a, cplx s);
CMatrix operator*(const CMatrix& a, const CMatrix& b);
std::vector<cplx> operator*(const CMatrix& a, std::span<const cplx> x);

double norm2(std::span<const cplx> v);
cplx inner(std::span<const cplx> a, std::span<const cplx> b);  // a^H b

}  // namespace rsma::numerics

#endif
