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

#ifndef RSMA_METAOPT_NETWORK_HPP
#define RSMA_METAOPT_NETWORK_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "rsma/numerics/rng.hpp"

namespace rsma::meta {

enum class Activation { ReLU, Tanh };

std::string to_string(Activation a);
Activation activation_from_string(const std::string& s);

// Fully connected network; hidden layers use `activation`, the output layer
// is linear. All parameters live in one flat vector: for each layer l the
// dims[l+1] x dims[l] weight block (row-major) followed by dims[l+1] biases.
struct MetaNetParams {
  std::vector<std::size_t> dims;  // {in, hidden..., out}
  std::vector<double> theta;
  Activation activation = Activation::ReLU;

  std::size_t layers() const { return dims.size() - 1; }
  std::size_t input_dim() const { return dims.front(); }
  std::size_t output_dim() const { return dims.back(); }
  std::size_t weight_offset(std::size_t layer) const;
  std::size_t bias_offset(std::size_t layer) const;
  static std::size_t param_count(std::span<const std::size_t> dims);

  // Hidden weights and biases uniform in +-1/sqrt(fan_in); the output layer is
  // zero so the freshly initialized network maps everything to 0.
  static MetaNetParams create(std::size_t in, std::span<const std::size_t> hidden, std::size_t out,
                              numerics::RngStream& rng, Activation act = Activation::ReLU);
  static MetaNetParams zeros(std::size_t in, std::span<const std::size_t> hidden, std::size_t out,
                             Activation act = Activation::ReLU);

  void validate() const;
};

double activate(Activation a, double x);

std::vector<double> mlp_forward(const MetaNetParams& net, std::span<const double> x);

nlohmann::json to_json(const MetaNetParams& net);
MetaNetParams metanet_from_json(const nlohmann::json& j);

}  // namespace rsma::meta

#endif
