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

#include "rsma/numerics/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rsma::numerics {

RngStream::RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

std::uint64_t RngStream::next_u64() {
  ++position_;
  return engine_();
}

double RngStream::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double RngStream::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double RngStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // u1 in (0, 1] keeps the logarithm finite.
  const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

cplx RngStream::complex_normal(double variance) {
  const double s = std::sqrt(0.5 * variance);
  const double re = normal();
  const double im = normal();
  return {s * re, s * im};
}

RngStream RngStream::split(std::uint64_t key) const { return RngStream(derive_seed(seed_, key, 0x5eed)); }

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  return mix_seed(mix_seed(mix_seed(master) ^ a) ^ (b * 0xd1342543de82ef95ULL));
}

CMatrix gaussian_matrix(RngStream& rng, std::size_t rows, std::size_t cols, double variance) {
  if (!(variance >= 0.0) || !std::isfinite(variance))
    throw std::invalid_argument("gaussian_matrix: variance must be finite and >= 0");
  CMatrix m(rows, cols);
  if (variance == 0.0) return m;
  for (auto& z : m.data()) z = rng.complex_normal(variance);
  return m;
}

}  // namespace rsma::numerics
