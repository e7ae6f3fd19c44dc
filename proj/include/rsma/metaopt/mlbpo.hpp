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

#ifndef RSMA_METAOPT_MLBPO_HPP
#define RSMA_METAOPT_MLBPO_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rsma/channel/scene.hpp"
#include "rsma/metaopt/adam.hpp"
#include "rsma/metaopt/network.hpp"
#include "rsma/metaopt/precoder.hpp"
#include "rsma/rates/rates.hpp"

namespace rsma::meta {

// Outcome of one optimizer run; shared by MLBPO and the baselines.
struct RunResult {
  std::string method;
  std::size_t iterations = 0;
  double initial_asr = 0.0;        // ASR(P0)
  std::vector<double> trace;       // ASR of the iterate produced by step i
  std::vector<double> best_trace;  // running max of trace, seeded with ASR(P0)
  PrecoderMatrix best;             // argmax-ASR iterate (P0 included)
  rates::SafReport best_report;
  PrecoderMatrix last;             // final iterate P_L
  double last_asr = 0.0;
  rates::PowerSplit split;         // of `best`
  double seconds = 0.0;            // optimizer wall clock
  std::optional<MetaNetParams> network;  // final network, MLBPO only

  double best_asr() const { return best_report.asr; }
};

// Timing and the network checkpoint are left out when the flags are false so
// that reruns compare byte-for-byte.
nlohmann::json to_json(const RunResult& r, bool with_timing = true, bool with_network = false);

struct MlbpoConfig {
  std::size_t iterations = 500;
  double learning_rate = 1e-3;
  std::uint64_t seed = 1;
  std::vector<std::size_t> hidden = {50, 50};
  Activation activation = Activation::ReLU;
  rates::LossOptions loss;
  bool track_best = true;
  // Called with (i, packed P_{i+1}) after every projection; debugging aid.
  std::function<void(std::size_t, std::span<const double>)> on_iterate;
  AdamHyper adam() const { return {learning_rate, 0.9, 0.999, 1e-8}; }
  void validate() const;
};

RunResult run_mlbpo(const channel::ChannelEnsemble& ens, const PrecoderMatrix& p0, const MlbpoConfig& cfg,
                    const rates::NoisePowers& noise = 1.0);
// Starts from init_precoder(ens.csit, layout, p_t, split, init).
RunResult run_mlbpo(const channel::ChannelEnsemble& ens, const channel::StreamLayout& layout, double p_t,
                    const MlbpoConfig& cfg, const rates::NoisePowers& noise = 1.0, const InitSplit& split = {},
                    const InitOptions& init = {});

// Shared by run_mlbpo and the baselines: fills best, best_report, split and
// last from a finished trace.
class BestTracker {
 public:
  BestTracker(const PrecoderMatrix& p0, double asr0, bool enabled);
  void offer(std::span<const double> x, double asr);
  RunResult finish(std::string method, const channel::ChannelEnsemble& ens, const rates::NoisePowers& noise,
                   double seconds) &&;

 private:
  bool enabled_;
  PrecoderMatrix p0_;
  RunResult r_;
  std::vector<double> best_x_;
  std::vector<double> last_x_;
  double best_asr_;
};

}  // namespace rsma::meta

#endif
