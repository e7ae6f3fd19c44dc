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

#include "rsma/metaopt/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace rsma::meta {

AdamState::AdamState(std::size_t n, AdamHyper hyper) : hyper_(hyper), m_(n, 0.0), v_(n, 0.0) {
  if (!(hyper_.learning_rate >= 0.0)) throw std::invalid_argument("adam: learning rate must be >= 0");
  if (!(hyper_.beta1 >= 0.0 && hyper_.beta1 < 1.0) || !(hyper_.beta2 >= 0.0 && hyper_.beta2 < 1.0))
    throw std::invalid_argument("adam: betas must lie in [0, 1)");
  if (!(hyper_.epsilon > 0.0)) throw std::invalid_argument("adam: epsilon must be > 0");
}

std::vector<double> AdamState::step(std::span<const double> grad) {
  if (grad.size() != m_.size())
    throw std::invalid_argument("adam: gradient has " + std::to_string(grad.size()) + " entries, state has " +
                                std::to_string(m_.size()));
  ++t_;
  const double b1 = hyper_.beta1, b2 = hyper_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  std::vector<double> delta(grad.size());
  for (std::size_t i = 0; i < grad.size(); ++i) {
    m_[i] = b1 * m_[i] + (1.0 - b1) * grad[i];
    v_[i] = b2 * v_[i] + (1.0 - b2) * grad[i] * grad[i];
    const double mh = m_[i] / c1;
    const double vh = v_[i] / c2;
    delta[i] = -hyper_.learning_rate * mh / (std::sqrt(vh) + hyper_.epsilon);
  }
  return delta;
}

void AdamState::apply(std::span<double> params, std::span<const double> grad) {
  if (params.size() != m_.size()) throw std::invalid_argument("adam: parameter count mismatch");
  const std::vector<double> d = step(grad);
  for (std::size_t i = 0; i < params.size(); ++i) params[i] += d[i];
}

}  // namespace rsma::meta
