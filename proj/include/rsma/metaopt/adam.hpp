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

#ifndef RSMA_METAOPT_ADAM_HPP
#define RSMA_METAOPT_ADAM_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace rsma::meta {

struct AdamHyper {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Bias-corrected Adam (Kingma & Ba) used as a descent step on a loss.
class AdamState {
 public:
  AdamState(std::size_t n, AdamHyper hyper = {});

  // Advances the moments by one step and returns
  // delta = -lr * m_hat / (sqrt(v_hat) + eps).
  std::vector<double> step(std::span<const double> grad);
  // step() added into params.
  void apply(std::span<double> params, std::span<const double> grad);

  std::size_t size() const { return m_.size(); }
  std::size_t steps() const { return t_; }
  const AdamHyper& hyper() const { return hyper_; }
  std::span<const double> first_moment() const { return m_; }
  std::span<const double> second_moment() const { return v_; }

 private:
  AdamHyper hyper_;
  std::vector<double> m_;
  std::vector<double> v_;
  std::size_t t_ = 0;
};

}  // namespace rsma::meta

#endif
