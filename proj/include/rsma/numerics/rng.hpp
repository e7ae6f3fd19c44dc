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

#ifndef RSMA_NUMERICS_RNG_HPP
#define RSMA_NUMERICS_RNG_HPP

#include <cstdint>
#include <random>

#include "rsma/numerics/cmatrix.hpp"

namespace rsma::numerics {

// Seeded random stream. The engine is std::mt19937_64, whose output sequence is
// fixed by the C++ standard; normals are produced with Box-Muller on top of it,
// so draws are reproducible for a given seed independent of the library vendor.
//
// Single owner: parallel code must derive independent streams with split().
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }
  // Number of 64-bit engine words consumed so far.
  std::uint64_t position() const { return position_; }

  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53-bit resolution.
  double uniform();
  double uniform(double lo, double hi);
  double normal();
  // CN(0, variance): real and imaginary parts each N(0, variance / 2).
  cplx complex_normal(double variance);

  // Independent child stream keyed by `key`; does not advance this stream.
  RngStream split(std::uint64_t key) const;

 private:
  std::uint64_t seed_;
  std::uint64_t position_ = 0;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// splitmix64 finalizer; used for seed derivation.
std::uint64_t mix_seed(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b);

// rows x cols matrix of i.i.d. CN(0, variance) entries.
CMatrix gaussian_matrix(RngStream& rng, std::size_t rows, std::size_t cols, double variance);

}  // namespace rsma::numerics

#endif
