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

#include "rsma/harness/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace rsma::harness {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << body;
  f.close();
  if (!f) throw std::runtime_error("failed writing " + path.string());
}

void require_records(const SweepResult& s) {
  if (s.records.empty() || s.aggregates.empty()) throw std::invalid_argument("report: sweep has no records");
}

}  // namespace

std::vector<std::string> report_notes(const ExperimentConfig& cfg) {
  std::vector<std::string> n;
  n.push_back("esr = mean over CSIT draws of the achieved ASR of the returned precoder");
  n.push_back(cfg.esr_mode == EsrMode::Reuse ? "achieved ASR is scored on the optimization ensemble"
                                             : "achieved ASR is scored on freshly drawn realizations");
  n.push_back("power fractions are means over draws of the returned precoder's split");
  if (cfg.optimizer == Optimizer::FixedDirection) {
    n.push_back("fixed_direction: simplified stand-in for the eigenspace competitor, not its closed form");
    n.push_back("fixed_direction: common beam = dominant left singular vector of the CSIT");
    n.push_back("fixed_direction: group beam = top eigenvector of the group correlation");
    n.push_back("fixed_direction: private beams = RZF on the rank-r group eigenspace, loading K/P_t");
    n.push_back("fixed_direction: powers by exhaustive lattice search, private power split equally");
    if (cfg.scenario == Scenario::Iid1LRS)
      n.push_back("fixed_direction: i.i.d. scene uses the identity correlation with full rank");
  }
  return n;
}

std::string csv_text(const SweepResult& s, bool with_timing) {
  require_records(s);
  const std::size_t g_n = s.aggregates.front().q_g.size();
  std::string out = "snr_db,esr_mean,esr_std,time_mean_s,q_c";
  for (std::size_t g = 0; g < g_n; ++g) out += ",q_g" + std::to_string(g + 1);
  out += ",q_p,schema_version\n";
  for (const auto& a : s.aggregates) {
    out += fmt(a.snr_db) + "," + fmt(a.esr_mean) + "," + fmt(a.esr_std) + "," +
           (with_timing ? fmt(a.time_mean_s) : std::string("")) + "," + fmt(a.q_c);
    for (double q : a.q_g) out += "," + fmt(q);
    out += "," + fmt(a.q_p) + "," + std::to_string(kSchemaVersion) + "\n";
  }
  return out;
}

nlohmann::json sweep_json(const SweepResult& s, bool with_timing) {
  require_records(s);
  nlohmann::json aggs = nlohmann::json::array(), recs = nlohmann::json::array();
  for (const auto& a : s.aggregates) {
    nlohmann::json j = {{"snr_db", a.snr_db}, {"esr_mean", a.esr_mean}, {"esr_std", a.esr_std},
                        {"q_c", a.q_c},       {"q_g", a.q_g},           {"q_p", a.q_p}};
    if (with_timing) j["time_mean_s"] = a.time_mean_s;
    aggs.push_back(std::move(j));
  }
  for (const auto& r : s.records) {
    nlohmann::json j = {{"snr_index", r.snr_index},
                        {"csit_index", r.csit_index},
                        {"snr_db", r.snr_db},
                        {"seed", r.seed},
                        {"asr", r.asr},
                        {"initial_asr", r.initial_asr},
                        {"q_c", r.split.q_c},
                        {"q_g", r.split.q_g},
                        {"q_p", r.split.q_p}};
    if (with_timing) j["seconds"] = r.seconds;
    recs.push_back(std::move(j));
  }
  return {{"schema_version", kSchemaVersion},
          {"config", to_json(s.config)},
          {"notes", report_notes(s.config)},
          {"aggregates", std::move(aggs)},
          {"records", std::move(recs)}};
}

std::string plot_text(const SweepResult& s) {
  require_records(s);
  std::string out;
  for (const auto& n : report_notes(s.config)) out += "# " + n + "\n";
  out += "# snr_db esr_mean esr_std time_mean_s q_c";
  for (std::size_t g = 0; g < s.aggregates.front().q_g.size(); ++g) out += " q_g" + std::to_string(g + 1);
  out += " q_p\n";
  for (const auto& a : s.aggregates) {
    out += fmt(a.snr_db) + " " + fmt(a.esr_mean) + " " + fmt(a.esr_std) + " " + fmt(a.time_mean_s) + " " +
           fmt(a.q_c);
    for (double q : a.q_g) out += " " + fmt(q);
    out += " " + fmt(a.q_p) + "\n";
  }
  return out;
}

std::vector<std::string> write_report(const SweepResult& s, const std::string& dir, const ReportOptions& opts) {
  require_records(s);
  const std::filesystem::path base(dir);
  std::error_code ec;
  std::filesystem::create_directories(base, ec);
  if (ec) throw std::runtime_error("cannot create directory " + base.string() + ": " + ec.message());
  std::vector<std::string> written;
  const std::string stem = s.config.name.empty() ? "sweep" : s.config.name;
  if (opts.csv) {
    const auto p = base / (stem + ".csv");
    write_file(p, csv_text(s, opts.with_timing));
    written.push_back(p.string());
  }
  if (opts.json) {
    const auto p = base / (stem + ".json");
    write_file(p, sweep_json(s, opts.with_timing).dump(2) + "\n");
    written.push_back(p.string());
  }
  if (opts.plot_data) {
    const auto p = base / (stem + ".dat");
    write_file(p, plot_text(s));
    written.push_back(p.string());
  }
  return written;
}

}  // namespace rsma::harness
