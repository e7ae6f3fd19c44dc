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

#ifndef RSMA_HARNESS_REPORT_HPP
#define RSMA_HARNESS_REPORT_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "rsma/harness/sweep.hpp"

namespace rsma::harness {

inline constexpr int kSchemaVersion = 1;

struct ReportOptions {
  bool csv = true;
  bool json = true;
  bool plot_data = true;
  bool with_timing = true;  // false drops every wall-clock field
};

// Columns: snr_db, esr_mean, esr_std, time_mean_s, q_c, q_g1..q_gG, q_p,
// schema_version.
std::string csv_text(const SweepResult& s, bool with_timing = true);
nlohmann::json sweep_json(const SweepResult& s, bool with_timing = true);
std::string plot_text(const SweepResult& s);

// Human-readable statements of how the numbers were produced; emitted in the
// JSON `notes` array and as comment lines at the top of the .dat file.
std::vector<std::string> report_notes(const ExperimentConfig& cfg);

// Writes <dir>/<name>.csv, .json and .dat; returns the paths written.
// Rejects an empty sweep; I/O failures name the offending path.
std::vector<std::string> write_report(const SweepResult& s, const std::string& dir, const ReportOptions& opts = {});

}  // namespace rsma::harness

#endif
