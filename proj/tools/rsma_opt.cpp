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

// Command line front end: sweeps, config validation, gradient checks and the
// preset demos.

#include <cstdio>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rsma/gradients/gradcheck.hpp"
#include "rsma/harness/config.hpp"
#include "rsma/harness/report.hpp"
#include "rsma/harness/sweep.hpp"

namespace {

using rsma::harness::ExperimentConfig;

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::optional<std::string> out_dir;
  std::optional<std::size_t> n_csit;
  std::optional<std::string> optimizer;
};

void apply(ExperimentConfig& cfg, const Overrides& o) {
  rsma::harness::apply_env_overrides(cfg);
  if (o.seed) cfg.seed = *o.seed;
  if (o.threads) cfg.threads = *o.threads;
  if (o.out_dir) cfg.out_dir = *o.out_dir;
  if (o.n_csit) cfg.n_csit = *o.n_csit;
  if (o.optimizer) {
    if (*o.optimizer == "mlbpo")
      cfg.optimizer = rsma::harness::Optimizer::Mlbpo;
    else if (*o.optimizer == "direct_adam")
      cfg.optimizer = rsma::harness::Optimizer::DirectAdam;
    else
      cfg.optimizer = rsma::harness::Optimizer::FixedDirection;
  }
  cfg.validate();
}

void print_table(const rsma::harness::SweepResult& s) {
  std::printf("%-8s %-10s %-10s %-10s %-8s %-8s %-8s\n", "snr_db", "esr", "std", "time_s", "q_c", "sum_q_g",
              "q_p");
  for (const auto& a : s.aggregates) {
    double qg = 0.0;
    for (double q : a.q_g) qg += q;
    std::printf("%-8.1f %-10.4f %-10.4f %-10.4f %-8.3f %-8.3f %-8.3f\n", a.snr_db, a.esr_mean, a.esr_std,
                a.time_mean_s, a.q_c, qg, a.q_p);
  }
}

int run_config(ExperimentConfig cfg, const Overrides& o) {
  apply(cfg, o);
  const std::size_t total = cfg.snr_db.size() * cfg.n_csit;
  std::fprintf(stderr, "%s: %zu cells on %zu thread(s)\n", cfg.name.c_str(), total, cfg.threads);
  const auto sweep = rsma::harness::run_sweep(cfg, [total](std::size_t done) {
    std::fprintf(stderr, "\r  %zu/%zu", done, total);
    if (done == total) std::fprintf(stderr, "\n");
  });
  rsma::harness::ReportOptions ro;
  ro.plot_data = cfg.plot_data;
  for (const auto& p : rsma::harness::write_report(sweep, cfg.out_dir, ro)) std::fprintf(stderr, "wrote %s\n", p.c_str());
  print_table(sweep);
  return 0;
}

ExperimentConfig demo_1lrs(bool reduced) {
  ExperimentConfig c;
  c.name = reduced ? "demo-1lrs-reduced" : "demo-1lrs";
  c.scenario = rsma::harness::Scenario::Iid1LRS;
  c.n_tx = reduced ? 4 : 16;
  c.n_users = reduced ? 4 : 16;
  c.n_groups = 1;
  c.alpha = 0.6;
  c.m = reduced ? 100 : 1000;
  c.n_csit = reduced ? 10 : 100;
  c.mlbpo.iterations = 500;
  c.mlbpo.learning_rate = 1e-3;
  c.mlbpo.hidden = {50, 50};
  return c;
}

ExperimentConfig demo_hrs(bool reduced, double spread, const std::string& tag) {
  ExperimentConfig c;
  c.name = std::string(reduced ? "demo-hrs-reduced-" : "demo-hrs-") + tag;
  c.scenario = rsma::harness::Scenario::OneRingHRS;
  constexpr double pi = std::numbers::pi;
  if (reduced) {
    c.n_tx = 16;
    c.n_users = 4;
    c.n_groups = 2;
    c.azimuths = {-pi / 4, pi / 4};
    c.m = 200;
    c.n_csit = 10;
  } else {
    c.n_tx = 100;
    c.n_users = 12;
    c.n_groups = 4;
    c.azimuths = {-pi / 2, -pi / 6, pi / 6, pi / 2};
    c.m = 1000;
    c.n_csit = 100;
    c.quadrature_nodes = 4097;
  }
  c.spread = spread;
  c.tau2 = {0.4};
  c.mlbpo.iterations = 500;
  c.mlbpo.learning_rate = 1e-4;
  c.mlbpo.hidden = {300, 300, 300};
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MLBPO precoder optimization for rate-splitting multiple access"};
  app.require_subcommand(1);
  Overrides o;
  std::uint64_t seed = 0;
  std::size_t threads = 0, n_csit = 0;
  std::string out_dir, optimizer;
  auto* seed_opt = app.add_option("--seed", seed, "Master seed")->check(CLI::NonNegativeNumber);
  auto* thr_opt = app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  auto* out_opt = app.add_option("--out-dir", out_dir, "Output directory");

  auto* run = app.add_subcommand("run", "Run the sweep described by a config file");
  std::string run_path;
  run->add_option("config", run_path, "Config file")->required();

  auto* validate = app.add_subcommand("validate", "Parse and validate a config file");
  std::string val_path;
  validate->add_option("config", val_path, "Config file")->required();

  auto* gc = app.add_subcommand("gradcheck", "Finite-difference check of the loss gradients");
  std::uint64_t gc_seed = 1;
  std::size_t gc_instances = 50;
  gc->add_option("--seed", gc_seed, "Seed of the random instances");
  gc->add_option("--instances", gc_instances, "Number of instances")->check(CLI::PositiveNumber);

  auto* d1 = app.add_subcommand("demo-1lrs", "i.i.d. one-layer preset");
  bool d1_reduced = false;
  d1->add_flag("--reduced", d1_reduced, "N_t = K = 4, M = 100");

  auto* dh = app.add_subcommand("demo-hrs", "One-ring hierarchical preset");
  bool dh_reduced = false;
  std::string dh_spread = "both";
  dh->add_flag("--reduced", dh_reduced, "N_t = 16, G = 2, K = 4");
  dh->add_option("--spread", dh_spread, "Angular spread: narrow (pi/8), wide (pi/3) or both")
      ->check(CLI::IsMember({"narrow", "wide", "both"}));

  for (auto* sub : {d1, dh}) {
    sub->add_option("--n-csit", n_csit, "CSIT draws per SNR")->check(CLI::PositiveNumber);
    sub->add_option("--optimizer", optimizer, "mlbpo, direct_adam or fixed_direction")
        ->check(CLI::IsMember({"mlbpo", "direct_adam", "fixed_direction"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }
  if (*seed_opt) o.seed = seed;
  if (*thr_opt) o.threads = threads;
  if (*out_opt) o.out_dir = out_dir;
  if (n_csit != 0) o.n_csit = n_csit;
  if (!optimizer.empty()) o.optimizer = optimizer;

  try {
    if (*validate) {
      ExperimentConfig cfg = rsma::harness::load_config(val_path);
      apply(cfg, o);
      std::printf("ok: %s (%s, %s, %zu cells)\n", cfg.name.c_str(), to_string(cfg.scenario).c_str(),
                  to_string(cfg.optimizer).c_str(), cfg.snr_db.size() * cfg.n_csit);
      return 0;
    }
    if (*run) return run_config(rsma::harness::load_config(run_path), o);
    if (*gc) {
      rsma::grad::GradcheckOptions go;
      go.seed = gc_seed;
      go.instances = gc_instances;
      const auto s = rsma::grad::run_gradcheck(go);
      std::printf("instances %zu (redraws %zu), max rel error dL/dP %.3e, dL/dtheta %.3e, %.2f s\n",
                  s.instances.size(), s.redraws, s.max_precoder_error, s.max_theta_error, s.seconds);
      const double worst = std::max(s.max_precoder_error, s.max_theta_error);
      std::printf("max relative FD error %.3e: %s\n", worst, s.passed(1e-4) ? "PASS" : "FAIL");
      return s.passed(1e-4) ? 0 : 1;
    }
    if (*d1) return run_config(demo_1lrs(d1_reduced), o);
    if (*dh) {
      constexpr double pi = std::numbers::pi;
      int rc = 0;
      if (dh_spread != "wide") rc |= run_config(demo_hrs(dh_reduced, pi / 8, "narrow"), o);
      if (dh_spread != "narrow") rc |= run_config(demo_hrs(dh_reduced, pi / 3, "wide"), o);
      return rc;
    }
  } catch (const rsma::harness::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
