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

#include "rsma/metaopt/network.hpp"

#include <cmath>
#include <stdexcept>

namespace rsma::meta {

std::string to_string(Activation a) { return a == Activation::ReLU ? "relu" : "tanh"; }

Activation activation_from_string(const std::string& s) {
  if (s == "relu") return Activation::ReLU;
  if (s == "tanh") return Activation::Tanh;
  throw std::invalid_argument("unknown activation '" + s + "'");
}

std::size_t MetaNetParams::param_count(std::span<const std::size_t> dims) {
  std::size_t n = 0;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) n += dims[l + 1] * dims[l] + dims[l + 1];
  return n;
}

std::size_t MetaNetParams::weight_offset(std::size_t layer) const {
  std::size_t off = 0;
  for (std::size_t l = 0; l < layer; ++l) off += dims[l + 1] * dims[l] + dims[l + 1];
  return off;
}

std::size_t MetaNetParams::bias_offset(std::size_t layer) const {
  return weight_offset(layer) + dims[layer + 1] * dims[layer];
}

namespace {
std::vector<std::size_t> make_dims(std::size_t in, std::span<const std::size_t> hidden, std::size_t out) {
  std::vector<std::size_t> d{in};
  d.insert(d.end(), hidden.begin(), hidden.end());
  d.push_back(out);
  return d;
}
}  // namespace

MetaNetParams MetaNetParams::zeros(std::size_t in, std::span<const std::size_t> hidden, std::size_t out,
                                   Activation act) {
  MetaNetParams net;
  net.dims = make_dims(in, hidden, out);
  net.theta.assign(param_count(net.dims), 0.0);
  net.activation = act;
  net.validate();
  return net;
}

MetaNetParams MetaNetParams::create(std::size_t in, std::span<const std::size_t> hidden, std::size_t out,
                                    numerics::RngStream& rng, Activation act) {
  MetaNetParams net = zeros(in, hidden, out, act);
  for (std::size_t l = 0; l + 1 < net.layers(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(net.dims[l]));
    const std::size_t begin = net.weight_offset(l);
    const std::size_t end = net.weight_offset(l + 1);
    for (std::size_t i = begin; i < end; ++i) net.theta[i] = rng.uniform(-bound, bound);
  }
  return net;
}

void MetaNetParams::validate() const {
  if (dims.size() < 2) throw std::invalid_argument("network: need at least an input and an output layer");
  for (std::size_t d : dims)
    if (d == 0) throw std::invalid_argument("network: layer widths must be >= 1");
  if (theta.size() != param_count(dims)) throw std::invalid_argument("network: parameter count mismatch");
  for (double t : theta)
    if (!std::isfinite(t)) throw std::invalid_argument("network: non-finite parameter");
}

double activate(Activation a, double x) { return a == Activation::ReLU ? (x > 0.0 ? x : 0.0) : std::tanh(x); }

std::vector<double> mlp_forward(const MetaNetParams& net, std::span<const double> x) {
  if (x.size() != net.input_dim())
    throw std::invalid_argument("mlp_forward: input has " + std::to_string(x.size()) + " entries, network expects " +
                                std::to_string(net.input_dim()));
  std::vector<double> cur(x.begin(), x.end());
  std::vector<double> next;
  for (std::size_t l = 0; l < net.layers(); ++l) {
    const std::size_t rows = net.dims[l + 1], cols = net.dims[l];
    const double* w = net.theta.data() + net.weight_offset(l);
    const double* b = net.theta.data() + net.bias_offset(l);
    const bool last = l + 1 == net.layers();
    next.assign(rows, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
      double acc = b[i];
      for (std::size_t j = 0; j < cols; ++j) acc += w[i * cols + j] * cur[j];
      next[i] = last ? acc : activate(net.activation, acc);
    }
    cur.swap(next);
  }
  return cur;
}

nlohmann::json to_json(const MetaNetParams& net) {
  return {{"dims", net.dims}, {"activation", to_string(net.activation)}, {"theta", net.theta}};
}

MetaNetParams metanet_from_json(const nlohmann::json& j) {
  MetaNetParams net;
  net.dims = j.at("dims").get<std::vector<std::size_t>>();
  net.activation = activation_from_string(j.at("activation").get<std::string>());
  net.theta = j.at("theta").get<std::vector<double>>();
  net.validate();
  return net;
}

}  // namespace rsma::meta
