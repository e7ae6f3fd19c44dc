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

#ifndef RSMA_HARNESS_CONFIG_HPP
#define RSMA_HARNESS_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rsma/baselines/baselines.hpp"
#include "rsma/channel/scene.hpp"
#include "rsma/metaopt/mlbpo.hpp"

namespace rsma::harness {

enum class Scenario { Iid1LRS, OneRingHRS };
enum class Optimizer { Mlbpo, DirectAdam, FixedDirection };
// How the achieved ASR of a run is scored: on the optimization ensemble, or
// on fresh realizations drawn around the same CSIT.
enum class EsrMode { Reuse, Redraw };

std::string to_string(Scenario s);
std::string to_string(Optimizer o);
std::string to_string(EsrMode e);

struct ExperimentConfig {
  std::string name = "experiment";
  Scenario scenario = Scenario::Iid1LRS;
  Optimizer optimizer = Optimizer::Mlbpo;
  std::uint64_t seed = 1;

  std::size_t n_tx = 4;
  std::size_t n_users = 4;
  std::size_t n_groups = 1;

  // i.i.d. model
  double alpha = 0.6;
  std::vector<double> sigma_k2;
  // one-ring model
  std::vector<double> azimuths;
  double spread = 0.0;
  std::vector<double> tau2 = {0.4};
  double antenna_spacing = 0.5;
  std::size_t quadrature_nodes = numerics::kDefaultQuadratureNodes;

  std::size_t m = 100;
  std::size_t n_csit = 10;
  std::vector<double> snr_db = {0, 5, 10, 15, 20, 25, 30, 35};
  EsrMode esr_mode = EsrMode::Reuse;
  std::size_t esr_samples = 0;  // 0 means m
  std::size_t threads = 1;

  meta::MlbpoConfig mlbpo;
  std::optional<meta::InitSplit> init;  // unset: default for the scenario
  bool init_fallback = true;
  baselines::DirectAdamConfig direct;
  bool direct_scale_lr = true;  // multiply the direct-Adam step by sqrt(p_t)
  std::size_t fixed_rank = 0;   // 0 selects default_rank
  double fixed_grid_step = 0.05;

  std::string out_dir = "results";
  bool plot_data = true;

  channel::StreamLayout layout() const;
  meta::InitSplit init_split() const;
  // Every problem, one "key: message" per entry; empty when valid.
  std::vector<std::string> problems() const;
  void validate() const;
};

class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

// Parses `key = value` lines; `#` starts a comment. Lists are comma separated
// and may be wrapped in brackets. Numbers accept the forms `x`, `pi`, `a*pi`,
// `pi/b` and `a*pi/b`. Unknown keys and malformed values are collected with
// the validation problems into one ConfigError.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);

// RSMA_OUT_DIR and RSMA_THREADS, when set.
void apply_env_overrides(ExperimentConfig& cfg);

nlohmann::json to_json(const ExperimentConfig& cfg);

}  // namespace rsma::harness

#endif
