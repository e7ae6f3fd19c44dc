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

#include "rsma/harness/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

namespace rsma::harness {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_plain(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("trailing characters");
  return v;
}

double parse_number(std::string s) {
  s = trim(s);
  if (s.empty()) throw std::invalid_argument("empty number");
  const auto at = s.find("pi");
  if (at == std::string::npos) return parse_plain(s);
  double sign = 1.0;
  std::string head = trim(s.substr(0, at));
  std::string tail = trim(s.substr(at + 2));
  if (!head.empty() && (head.back() == '*')) head = trim(head.substr(0, head.size() - 1));
  if (head == "-") {
    sign = -1.0;
    head.clear();
  } else if (head == "+") {
    head.clear();
  }
  double v = std::numbers::pi * sign * (head.empty() ? 1.0 : parse_plain(head));
  if (!tail.empty()) {
    if (tail.front() != '/') throw std::invalid_argument("expected '/' after pi");
    v /= parse_plain(trim(tail.substr(1)));
  }
  return v;
}

std::vector<std::string> split_list(std::string s) {
  s = trim(s);
  if (!s.empty() && s.front() == '[') {
    if (s.back() != ']') throw std::invalid_argument("unterminated list");
    s = s.substr(1, s.size() - 2);
  }
  std::vector<std::string> out;
  if (trim(s).empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

std::vector<double> parse_numbers(const std::string& s) {
  std::vector<double> out;
  for (const auto& t : split_list(s)) out.push_back(parse_number(t));
  return out;
}

std::size_t parse_count(const std::string& s) {
  const std::string t = trim(s);
  if (t.empty() || t.front() == '-') throw std::invalid_argument("expected a non-negative integer");
  std::size_t used = 0;
  const unsigned long long v = std::stoull(t, &used, 10);
  if (used != t.size()) throw std::invalid_argument("expected a non-negative integer");
  return static_cast<std::size_t>(v);
}

bool parse_bool(const std::string& s) {
  const std::string t = trim(s);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw std::invalid_argument("expected true or false");
}

Scenario parse_scenario(const std::string& s) {
  if (s == "iid_1lrs") return Scenario::Iid1LRS;
  if (s == "one_ring_hrs") return Scenario::OneRingHRS;
  throw std::invalid_argument("expected iid_1lrs or one_ring_hrs");
}

Optimizer parse_optimizer(const std::string& s) {
  if (s == "mlbpo") return Optimizer::Mlbpo;
  if (s == "direct_adam") return Optimizer::DirectAdam;
  if (s == "fixed_direction") return Optimizer::FixedDirection;
  throw std::invalid_argument("expected mlbpo, direct_adam or fixed_direction");
}

rates::MinMode parse_min_mode(const std::string& s) {
  if (s == "hard") return rates::MinMode::Hard;
  if (s == "smooth") return rates::MinMode::Smooth;
  throw std::invalid_argument("expected hard or smooth");
}

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

meta::InitSplit& init_of(ExperimentConfig& c) {
  if (!c.init) c.init = c.init_split();
  return *c.init;
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"name", [](ExperimentConfig& c, const std::string& v) { c.name = v; }},
      {"scenario", [](ExperimentConfig& c, const std::string& v) { c.scenario = parse_scenario(v); }},
      {"optimizer", [](ExperimentConfig& c, const std::string& v) { c.optimizer = parse_optimizer(v); }},
      {"seed", [](ExperimentConfig& c, const std::string& v) { c.seed = parse_count(v); }},
      {"m", [](ExperimentConfig& c, const std::string& v) { c.m = parse_count(v); }},
      {"n_csit", [](ExperimentConfig& c, const std::string& v) { c.n_csit = parse_count(v); }},
      {"snr_db", [](ExperimentConfig& c, const std::string& v) { c.snr_db = parse_numbers(v); }},
      {"threads", [](ExperimentConfig& c, const std::string& v) { c.threads = parse_count(v); }},
      {"esr.mode",
       [](ExperimentConfig& c, const std::string& v) {
         if (v == "reuse")
           c.esr_mode = EsrMode::Reuse;
         else if (v == "redraw")
           c.esr_mode = EsrMode::Redraw;
         else
           throw std::invalid_argument("expected reuse or redraw");
       }},
      {"esr.samples", [](ExperimentConfig& c, const std::string& v) { c.esr_samples = parse_count(v); }},
      {"layout.n_tx", [](ExperimentConfig& c, const std::string& v) { c.n_tx = parse_count(v); }},
      {"layout.n_users", [](ExperimentConfig& c, const std::string& v) { c.n_users = parse_count(v); }},
      {"layout.n_groups", [](ExperimentConfig& c, const std::string& v) { c.n_groups = parse_count(v); }},
      {"channel.alpha", [](ExperimentConfig& c, const std::string& v) { c.alpha = parse_number(v); }},
      {"channel.sigma_k2", [](ExperimentConfig& c, const std::string& v) { c.sigma_k2 = parse_numbers(v); }},
      {"channel.azimuths", [](ExperimentConfig& c, const std::string& v) { c.azimuths = parse_numbers(v); }},
      {"channel.spread", [](ExperimentConfig& c, const std::string& v) { c.spread = parse_number(v); }},
      {"channel.tau2", [](ExperimentConfig& c, const std::string& v) { c.tau2 = parse_numbers(v); }},
      {"channel.antenna_spacing",
       [](ExperimentConfig& c, const std::string& v) { c.antenna_spacing = parse_number(v); }},
      {"channel.quadrature_nodes",
       [](ExperimentConfig& c, const std::string& v) { c.quadrature_nodes = parse_count(v); }},
      {"mlbpo.iterations", [](ExperimentConfig& c, const std::string& v) { c.mlbpo.iterations = parse_count(v); }},
      {"mlbpo.learning_rate",
       [](ExperimentConfig& c, const std::string& v) { c.mlbpo.learning_rate = parse_number(v); }},
      {"mlbpo.hidden",
       [](ExperimentConfig& c, const std::string& v) {
         c.mlbpo.hidden.clear();
         for (const auto& t : split_list(v)) c.mlbpo.hidden.push_back(parse_count(t));
       }},
      {"mlbpo.activation",
       [](ExperimentConfig& c, const std::string& v) { c.mlbpo.activation = meta::activation_from_string(v); }},
      {"mlbpo.min", [](ExperimentConfig& c, const std::string& v) { c.mlbpo.loss.min_mode = parse_min_mode(v); }},
      {"mlbpo.temperature",
       [](ExperimentConfig& c, const std::string& v) { c.mlbpo.loss.temperature = parse_number(v); }},
      {"mlbpo.track_best", [](ExperimentConfig& c, const std::string& v) { c.mlbpo.track_best = parse_bool(v); }},
      {"init.q_c", [](ExperimentConfig& c, const std::string& v) { init_of(c).q_c = parse_number(v); }},
      {"init.q_g", [](ExperimentConfig& c, const std::string& v) { init_of(c).q_g = parse_number(v); }},
      {"init.q_p", [](ExperimentConfig& c, const std::string& v) { init_of(c).q_p = parse_number(v); }},
      {"init.zero_csit_fallback", [](ExperimentConfig& c, const std::string& v) { c.init_fallback = parse_bool(v); }},
      {"direct.iterations", [](ExperimentConfig& c, const std::string& v) { c.direct.iterations = parse_count(v); }},
      {"direct.learning_rate",
       [](ExperimentConfig& c, const std::string& v) { c.direct.learning_rate = parse_number(v); }},
      {"direct.scale_lr", [](ExperimentConfig& c, const std::string& v) { c.direct_scale_lr = parse_bool(v); }},
      {"fixed.rank", [](ExperimentConfig& c, const std::string& v) { c.fixed_rank = parse_count(v); }},
      {"fixed.grid_step", [](ExperimentConfig& c, const std::string& v) { c.fixed_grid_step = parse_number(v); }},
      {"output.dir", [](ExperimentConfig& c, const std::string& v) { c.out_dir = v; }},
      {"output.plot_data", [](ExperimentConfig& c, const std::string& v) { c.plot_data = parse_bool(v); }},
  };
  return table;
}

}  // namespace

std::string to_string(Scenario s) { return s == Scenario::Iid1LRS ? "iid_1lrs" : "one_ring_hrs"; }

std::string to_string(Optimizer o) {
  switch (o) {
    case Optimizer::Mlbpo:
      return "mlbpo";
    case Optimizer::DirectAdam:
      return "direct_adam";
    case Optimizer::FixedDirection:
      return "fixed_direction";
  }
  return "unknown";
}

std::string to_string(EsrMode e) { return e == EsrMode::Reuse ? "reuse" : "redraw"; }

ConfigError::ConfigError(std::vector<std::string> issues)
    : std::invalid_argument([&] {
        std::string msg = "invalid configuration:";
        for (const auto& i : issues) msg += "\n  " + i;
        return msg;
      }()),
      issues_(std::move(issues)) {}

channel::StreamLayout ExperimentConfig::layout() const {
  const auto mode = scenario == Scenario::Iid1LRS ? channel::StreamMode::OneLayer : channel::StreamMode::Hierarchical;
  return channel::StreamLayout::equal_groups(n_tx, n_users, n_groups, mode);
}

meta::InitSplit ExperimentConfig::init_split() const {
  if (init) return *init;
  return scenario == Scenario::Iid1LRS ? meta::InitSplit::one_layer() : meta::InitSplit::hierarchical();
}

std::vector<std::string> ExperimentConfig::problems() const {
  std::vector<std::string> p;
  auto bad = [&](const std::string& key, const std::string& msg) { p.push_back(key + ": " + msg); };
  if (n_tx < 1) bad("layout.n_tx", "must be >= 1");
  if (n_users < 1) bad("layout.n_users", "must be >= 1");
  if (n_groups < 1) bad("layout.n_groups", "must be >= 1");
  if (scenario == Scenario::OneRingHRS && n_groups > n_users) bad("layout.n_groups", "must not exceed layout.n_users");
  if (m < 1) bad("m", "must be >= 1");
  if (n_csit < 1) bad("n_csit", "must be >= 1");
  if (snr_db.empty()) bad("snr_db", "must list at least one SNR");
  for (double s : snr_db)
    if (!std::isfinite(s)) bad("snr_db", "entries must be finite");
  if (threads < 1) bad("threads", "must be >= 1");
  if (scenario == Scenario::Iid1LRS) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) bad("channel.alpha", "must be finite and >= 0");
    if (!sigma_k2.empty() && sigma_k2.size() != n_users) bad("channel.sigma_k2", "needs one entry per user");
    for (double s : sigma_k2)
      if (!(s > 0.0)) bad("channel.sigma_k2", "entries must be > 0");
  } else {
    if (azimuths.size() != n_groups) bad("channel.azimuths", "needs one entry per group");
    if (!(spread > 0.0) || !std::isfinite(spread)) bad("channel.spread", "must be finite and > 0");
    if (tau2.size() != 1 && tau2.size() != n_users) bad("channel.tau2", "needs one entry or one per user");
    for (double t : tau2)
      if (!(t >= 0.0 && t <= 1.0)) bad("channel.tau2", "entries must lie in [0, 1]");
    if (!(antenna_spacing > 0.0)) bad("channel.antenna_spacing", "must be > 0");
    if (quadrature_nodes < 3 || quadrature_nodes % 2 == 0) bad("channel.quadrature_nodes", "must be odd and >= 3");
  }
  if (!(mlbpo.learning_rate > 0.0)) bad("mlbpo.learning_rate", "must be > 0");
  for (std::size_t h : mlbpo.hidden)
    if (h == 0) bad("mlbpo.hidden", "widths must be >= 1");
  if (mlbpo.loss.min_mode == rates::MinMode::Smooth && !(mlbpo.loss.temperature > 0.0))
    bad("mlbpo.temperature", "must be > 0");
  const auto s = init_split();
  if (s.q_c < 0.0 || s.q_g < 0.0 || s.q_p < 0.0) bad("init", "fractions must be >= 0");
  if (!(s.q_c + s.q_g + s.q_p > 0.0)) bad("init", "fractions must not all be zero");
  if (!(direct.learning_rate >= 0.0)) bad("direct.learning_rate", "must be >= 0");
  if (fixed_rank > n_tx) bad("fixed.rank", "must not exceed layout.n_tx");
  if (!(fixed_grid_step > 0.0 && fixed_grid_step <= 1.0)) {
    bad("fixed.grid_step", "must lie in (0, 1]");
  } else {
    const double u = std::round(1.0 / fixed_grid_step);
    if (std::abs(u * fixed_grid_step - 1.0) > 1e-9) bad("fixed.grid_step", "1/step must be an integer");
  }
  if (out_dir.empty()) bad("output.dir", "must not be empty");
  return p;
}

void ExperimentConfig::validate() const {
  auto p = problems();
  if (!p.empty()) throw ConfigError(std::move(p));
}

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  ExperimentConfig cfg;
  std::vector<std::string> issues;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::pair<std::string, std::string>> pending;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      issues.push_back(source + ":" + std::to_string(lineno) + ": expected key = value");
      continue;
    }
    pending.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  // The scenario decides the default init split, so it is applied first.
  for (const auto& [k, v] : pending)
    if (k == "scenario") try {
        cfg.scenario = parse_scenario(v);
      } catch (const std::exception&) {
      }
  for (const auto& [k, v] : pending) {
    const auto it = setters().find(k);
    if (it == setters().end()) {
      issues.push_back(k + ": unknown key");
      continue;
    }
    try {
      it->second(cfg, v);
    } catch (const std::exception& e) {
      issues.push_back(k + ": cannot parse '" + v + "' (" + e.what() + ")");
    }
  }
  for (auto& p : cfg.problems()) issues.push_back(std::move(p));
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), path);
}

void apply_env_overrides(ExperimentConfig& cfg) {
  if (const char* d = std::getenv("RSMA_OUT_DIR"); d && *d) cfg.out_dir = d;
  if (const char* t = std::getenv("RSMA_THREADS"); t && *t) {
    try {
      cfg.threads = parse_count(t);
    } catch (const std::exception&) {
      throw ConfigError({std::string("RSMA_THREADS: cannot parse '") + t + "'"});
    }
    if (cfg.threads < 1) throw ConfigError({"RSMA_THREADS: must be >= 1"});
  }
}

nlohmann::json to_json(const ExperimentConfig& c) {
  const auto s = c.init_split();
  return {{"name", c.name},
          {"scenario", to_string(c.scenario)},
          {"optimizer", to_string(c.optimizer)},
          {"seed", c.seed},
          {"layout", {{"n_tx", c.n_tx}, {"n_users", c.n_users}, {"n_groups", c.n_groups}}},
          {"channel",
           {{"alpha", c.alpha},
            {"sigma_k2", c.sigma_k2},
            {"azimuths", c.azimuths},
            {"spread", c.spread},
            {"tau2", c.tau2},
            {"antenna_spacing", c.antenna_spacing},
            {"quadrature_nodes", c.quadrature_nodes}}},
          {"m", c.m},
          {"n_csit", c.n_csit},
          {"snr_db", c.snr_db},
          {"esr", {{"mode", to_string(c.esr_mode)}, {"samples", c.esr_samples}}},
          {"mlbpo",
           {{"iterations", c.mlbpo.iterations},
            {"learning_rate", c.mlbpo.learning_rate},
            {"hidden", c.mlbpo.hidden},
            {"activation", meta::to_string(c.mlbpo.activation)},
            {"min", c.mlbpo.loss.min_mode == rates::MinMode::Hard ? "hard" : "smooth"},
            {"temperature", c.mlbpo.loss.temperature},
            {"track_best", c.mlbpo.track_best}}},
          {"init", {{"q_c", s.q_c}, {"q_g", s.q_g}, {"q_p", s.q_p}, {"zero_csit_fallback", c.init_fallback}}},
          {"direct",
           {{"iterations", c.direct.iterations},
            {"learning_rate", c.direct.learning_rate},
            {"scale_lr", c.direct_scale_lr}}},
          {"fixed", {{"rank", c.fixed_rank}, {"grid_step", c.fixed_grid_step}}}};
}

}  // namespace rsma::harness
