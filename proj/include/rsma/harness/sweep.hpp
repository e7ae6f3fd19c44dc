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

#ifndef RSMA_HARNESS_SWEEP_HPP
#define RSMA_HARNESS_SWEEP_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "rsma/harness/config.hpp"

namespace rsma::harness {

struct RunRecord {
  std::size_t snr_index = 0;
  std::size_t csit_index = 0;
  double snr_db = 0.0;
  std::uint64_t seed = 0;
  double asr = 0.0;          // achieved ASR of the returned precoder
  double initial_asr = 0.0;  // ASR(P0) on the optimization ensemble
  double seconds = 0.0;      // optimizer only
  rates::PowerSplit split;
};

struct SnrAggregate {
  double snr_db = 0.0;
  double esr_mean = 0.0;
  double esr_std = 0.0;  // sample standard deviation; 0 for a single draw
  double time_mean_s = 0.0;
  double q_c = 0.0;
  std::vector<double> q_g;
  double q_p = 0.0;
};

struct SweepResult {
  ExperimentConfig config;
  std::vector<RunRecord> records;  // sorted by (snr_index, csit_index)
  std::vector<SnrAggregate> aggregates;
};

// Seed of cell (snr_index, csit_index): a pure function of the master seed.
std::uint64_t cell_seed(std::uint64_t master, std::size_t snr_index, std::size_t csit_index);

// Builds the ensemble of one cell and runs the configured optimizer on it.
RunRecord run_cell(const ExperimentConfig& cfg, std::size_t snr_index, std::size_t csit_index);

// Cells run on cfg.threads workers; `progress` (optional) is called after
// each completed cell with the number done so far.
SweepResult run_sweep(const ExperimentConfig& cfg, const std::function<void(std::size_t)>& progress = {});

std::vector<SnrAggregate> aggregate(const ExperimentConfig& cfg, const std::vector<RunRecord>& records);

}  // namespace rsma::harness

#endif
