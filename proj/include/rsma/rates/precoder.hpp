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

#ifndef RSMA_RATES_PRECODER_HPP
#define RSMA_RATES_PRECODER_HPP

#include <span>
#include <vector>

#include "rsma/channel/layout.hpp"
#include "rsma/numerics/cmatrix.hpp"

namespace rsma::rates {

using channel::StreamLayout;
using numerics::CMatrix;

// N_t x (1 + G + K) precoder, columns [p_c | p_{c,1..G} | p_{1..K}].
struct PrecoderMatrix {
  StreamLayout layout;
  CMatrix columns;
  double p_t = 1.0;

  static PrecoderMatrix zeros(const StreamLayout& layout, double p_t);

  double total_power() const { return columns.squared_norm(); }
  double column_power(std::size_t c) const;
  // Zeroes the structurally inactive group columns in OneLayer mode.
  void enforce_layout();
  void validate() const;
};

// Active entries interleaved as (re, im), column by column over
// layout.active_columns(), antenna index fastest.
std::vector<double> pack_active(const PrecoderMatrix& p);
PrecoderMatrix unpack_active(std::span<const double> x, const StreamLayout& layout, double p_t);

// Fractions of p_t per stream class.
struct PowerSplit {
  double q_c = 0.0;
  std::vector<double> q_g;
  double q_p = 0.0;

  double total() const;
};

PowerSplit power_split(const PrecoderMatrix& p);

}  // namespace rsma::rates

#endif
