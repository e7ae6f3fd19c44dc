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

#include "rsma/harness/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>

#include "rsma/numerics/rng.hpp"

namespace rsma::harness {

namespace {

struct SharedSetup {
  channel::StreamLayout layout;
  std::optional<channel::OneRingSampler> sampler;
  std::vector<numerics::CMatrix> correlations;
  std::vector<rates::PowerSplit> grid;
  std::size_t rank = 1;
};

SharedSetup make_setup(const ExperimentConfig& cfg) {
  SharedSetup s;
  s.layout = cfg.layout();
  if (cfg.scenario == Scenario::OneRingHRS) {
    channel::OneRingModel model{cfg.azimuths, cfg.spread, cfg.tau2, cfg.antenna_spacing, cfg.quadrature_nodes};
    s.sampler.emplace(std::move(model), s.layout);
  }
  if (cfg.optimizer == Optimizer::FixedDirection) {
    if (s.sampler)
      s.correlations = s.sampler->correlations();
    else
      s.correlations = {numerics::CMatrix::identity(cfg.n_tx)};
    s.rank = cfg.fixed_rank != 0 ? cfg.fixed_rank
             : s.sampler      ? baselines::default_rank(cfg.n_tx, cfg.n_groups)
                              : cfg.n_tx;
    s.grid = baselines::split_lattice(s.layout, cfg.fixed_grid_step);
  }
  return s;
}

RunRecord run_cell_with(const ExperimentConfig& cfg, const SharedSetup& s, std::size_t si, std::size_t ci) {
  RunRecord rec;
  rec.snr_index = si;
  rec.csit_index = ci;
  rec.snr_db = cfg.snr_db.at(si);
  rec.seed = cell_seed(cfg.seed, si, ci);
  const double p_t = std::pow(10.0, rec.snr_db / 10.0);

  const numerics::RngStream root(rec.seed);
  numerics::RngStream chan = root.split(1);
  numerics::RngStream opt = root.split(2);
  numerics::RngStream esr = root.split(3);

  const channel::IidCsitModel iid{cfg.sigma_k2, cfg.alpha, p_t};
  const channel::ChannelEnsemble ens =
      s.sampler ? s.sampler->draw(chan, cfg.m) : channel::draw_iid_scene(chan, iid, s.layout, cfg.m);
  const rates::PrecoderMatrix p0 =
      meta::init_precoder(ens.csit, s.layout, p_t, cfg.init_split(), meta::InitOptions{cfg.init_fallback});

  meta::RunResult res;
  switch (cfg.optimizer) {
    case Optimizer::Mlbpo: {
      meta::MlbpoConfig mc = cfg.mlbpo;
      mc.seed = opt.next_u64();
      res = meta::run_mlbpo(ens, p0, mc);
      break;
    }
    case Optimizer::DirectAdam: {
      baselines::DirectAdamConfig dc = cfg.direct;
      if (cfg.direct_scale_lr) dc.learning_rate *= std::sqrt(p_t);
      res = baselines::run_direct_adam(ens, p0, dc);
      break;
    }
    case Optimizer::FixedDirection:
      res = baselines::run_fixed_direction(ens, s.layout, p_t, s.correlations, s.rank, s.grid);
      break;
  }

  rec.initial_asr = rates::saf_report(ens, p0).asr;
  rec.seconds = res.seconds;
  rec.split = res.split;
  if (cfg.esr_mode == EsrMode::Reuse) {
    rec.asr = res.best_report.asr;
  } else {
    const std::size_t n = cfg.esr_samples != 0 ? cfg.esr_samples : cfg.m;
    const channel::ChannelEnsemble fresh =
        s.sampler ? s.sampler->redraw(esr, ens, n) : channel::redraw_iid(esr, iid, ens.csit, n);
    rec.asr = rates::saf_report(fresh, res.best).asr;
  }
  return rec;
}

}  // namespace

std::uint64_t cell_seed(std::uint64_t master, std::size_t snr_index, std::size_t csit_index) {
  return numerics::derive_seed(master, snr_index, csit_index);
}

RunRecord run_cell(const ExperimentConfig& cfg, std::size_t snr_index, std::size_t csit_index) {
  cfg.validate();
  if (snr_index >= cfg.snr_db.size() || csit_index >= cfg.n_csit)
    throw std::invalid_argument("run_cell: cell index outside the sweep");
  return run_cell_with(cfg, make_setup(cfg), snr_index, csit_index);
}

std::vector<SnrAggregate> aggregate(const ExperimentConfig& cfg, const std::vector<RunRecord>& records) {
  std::vector<SnrAggregate> out;
  for (std::size_t si = 0; si < cfg.snr_db.size(); ++si) {
    SnrAggregate a;
    a.snr_db = cfg.snr_db[si];
    a.q_g.assign(cfg.n_groups, 0.0);
    std::vector<double> asr;
    for (const auto& r : records) {
      if (r.snr_index != si) continue;
      asr.push_back(r.asr);
      a.time_mean_s += r.seconds;
      a.q_c += r.split.q_c;
      for (std::size_t g = 0; g < std::min(a.q_g.size(), r.split.q_g.size()); ++g) a.q_g[g] += r.split.q_g[g];
      a.q_p += r.split.q_p;
    }
    if (asr.empty()) continue;
    const double n = static_cast<double>(asr.size());
    double sum = 0.0;
    for (double v : asr) sum += v;
    a.esr_mean = sum / n;
    double ss = 0.0;
    for (double v : asr) ss += (v - a.esr_mean) * (v - a.esr_mean);
    a.esr_std = asr.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    a.time_mean_s /= n;
    a.q_c /= n;
    for (auto& q : a.q_g) q /= n;
    a.q_p /= n;
    out.push_back(std::move(a));
  }
  return out;
}

SweepResult run_sweep(const ExperimentConfig& cfg, const std::function<void(std::size_t)>& progress) {
  cfg.validate();
  const SharedSetup setup = make_setup(cfg);
  const std::size_t n_snr = cfg.snr_db.size(), total = n_snr * cfg.n_csit;

  std::vector<RunRecord> records(total);
  std::atomic<std::size_t> next{0};
  std::size_t done = 0;
  std::mutex mu;
  std::exception_ptr failure;

  auto worker = [&] {
    for (;;) {
      const std::size_t job = next.fetch_add(1);
      if (job >= total) return;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (failure) return;
      }
      try {
        records[job] = run_cell_with(cfg, setup, job / cfg.n_csit, job % cfg.n_csit);
        std::lock_guard<std::mutex> lock(mu);
        ++done;
        if (progress) progress(done);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  const std::size_t n_workers = std::max<std::size_t>(1, std::min(cfg.threads, total));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
    return a.snr_index != b.snr_index ? a.snr_index < b.snr_index : a.csit_index < b.csit_index;
  });
  SweepResult s{cfg, std::move(records), {}};
  s.aggregates = aggregate(cfg, s.records);
  return s;
}

}  // namespace rsma::harness
