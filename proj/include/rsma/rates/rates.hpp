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

#ifndef RSMA_RATES_RATES_HPP
#define RSMA_RATES_RATES_HPP

#include <span>
#include <vector>

#include <json.hpp>

#include "rsma/channel/scene.hpp"
#include "rsma/rates/precoder.hpp"

namespace rsma::rates {

struct SinrTriplet {
  double common = 0.0;  // gamma_{c,k}
  double group = 0.0;   // gamma_{c,g,k}; 0 in OneLayer mode
  double priv = 0.0;    // gamma_{p,k}
};

// Rates of one channel realization, in bits/s/Hz.
struct RateReport {
  std::vector<double> common_rates;   // R_{c,k}
  std::vector<double> group_rates;    // R_{c,g(k),k}; zeros in OneLayer mode
  std::vector<double> private_rates;  // R_k
  double r_c = 0.0;                   // min_k R_{c,k}
  std::vector<double> r_cg;           // per group min over members
  double sum_rate = 0.0;
};

// Sample-average rates over an ensemble. Mins are taken after averaging.
struct SafReport {
  std::vector<double> common_rates;
  std::vector<double> group_rates;
  std::vector<double> private_rates;
  double r_c = 0.0;
  std::vector<double> r_cg;
  double asr = 0.0;
  std::size_t samples = 0;
};

enum class MinMode { Hard, Smooth };

struct LossOptions {
  MinMode min_mode = MinMode::Hard;
  double temperature = 0.05;  // smooth-min temperature, bits
};

// Per-user noise powers; a single entry broadcasts.
class NoisePowers {
 public:
  NoisePowers(double uniform = 1.0) : values_{uniform} {}  // NOLINT(google-explicit-constructor)
  explicit NoisePowers(std::vector<double> per_user) : values_(std::move(per_user)) {}

  std::vector<double> expand(std::size_t n_users) const;

 private:
  std::vector<double> values_;
};

SinrTriplet sinr_triplet(std::span<const numerics::cplx> h_k, const PrecoderMatrix& p, std::size_t user,
                         double noise2);

RateReport rate_report(const CMatrix& h, const PrecoderMatrix& p, const NoisePowers& noise = 1.0);

SafReport saf_report(const channel::ChannelEnsemble& ens, const PrecoderMatrix& p,
                     const NoisePowers& noise = 1.0);

// Per-user sample means of the stream rates for packed precoder entries x.
// Group means are zero in OneLayer mode.
struct StreamAverages {
  std::vector<double> common, group, priv;
};
StreamAverages average_stream_rates(const channel::ChannelEnsemble& ens, const channel::StreamLayout& layout,
                                    std::span<const double> x, std::span<const double> noise);

// Reduction of averaged stream rates to the objective; shared by saf_report and
// the loss so that both use one summation order.
double reduce_objective(const channel::StreamLayout& layout, std::span<const double> common,
                        std::span<const double> group, std::span<const double> priv,
                        const LossOptions& opts);

// -ASR of the sample-average objective.
double mlbpo_loss(const channel::ChannelEnsemble& ens, const PrecoderMatrix& p, const NoisePowers& noise = 1.0,
                  const LossOptions& opts = {});

nlohmann::json to_json(const RateReport& r);
nlohmann::json to_json(const SafReport& r);

}  // namespace rsma::rates

#endif
