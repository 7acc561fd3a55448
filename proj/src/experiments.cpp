/*
 * Copyright 2026 The slsim Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include "slsim/experiments.hpp"

#include <cmath>
#include <fmt/format.h>

#include "slsim/coding/mcs.hpp"
#include "slsim/error.hpp"
#include "slsim/phy_tx.hpp"
#include "slsim/sps.hpp"

#ifndef SLSIM_CODE_VERSION
#define SLSIM_CODE_VERSION "unknown"
#endif

namespace slsim::io {

const char* code_version() { return SLSIM_CODE_VERSION; }

sweep::SweepSpec bler_sweep_spec(const ExperimentConfig& cfg, std::size_t workers) {
  sweep::SweepSpec s;
  s.link = cfg.link;
  s.tx_power_dbm = cfg.tx_power_dbm;
  s.mcs = cfg.mcs;
  s.trials = cfg.trials;
  s.window_blocks = cfg.window_blocks;
  s.master_seed = cfg.master_seed;
  s.workers = workers;
  return s;
}

sweep::SweepSpec throughput_sweep_spec(const ExperimentConfig& cfg, std::size_t workers) {
  sweep::SweepSpec s = bler_sweep_spec(cfg, workers);
  s.tx_power_dbm = {cfg.throughput_tx_power_dbm};
  s.mcs = cfg.throughput_mcs;
  if (s.mcs.empty())
    for (int m = 0; m <= coding::kMaxMcs; ++m) s.mcs.push_back(m);
  return s;
}

std::vector<SpsRow> run_sps_experiment(const ExperimentConfig& cfg) {
  mac::NetworkConfig net;
  net.pool = cfg.pool;
  net.grant_width = cfg.sps_grant_width;
  net.mcs = cfg.sps_mcs;
  net.link_snr_db = cfg.sps_link_snr_db;
  net.mode = cfg.sps_mode;
  net.phy = cfg.link;
  net.validate();
  const auto n_res = static_cast<double>(net.pool.n_resources(net.grant_width));
  std::vector<SpsRow> rows;
  for (const double load : cfg.sps_loads) {
    const auto n = static_cast<std::size_t>(std::lround(load * n_res));
    if (n == 0) throw ConfigError("load " + format_double(load) + " gives no vehicles", "sps.loads");
    for (const auto policy : cfg.sps_policies) {
      // same seed for every policy so the comparison is paired
      const auto log = mac::run_network(net, policy, n, cfg.sps_duration_ms,
                                        derive_seed(cfg.master_seed, {0x5e, static_cast<std::uint64_t>(n)}));
      rows.push_back({mac::to_string(policy), load, mac::collision_rate(log), mac::packet_reception_ratio(log)});
    }
  }
  return rows;
}

std::vector<BackoffRow> backoff_table(const std::vector<sweep::SweepCell>& cells, double target_bler,
                                      double log_floor) {
  std::vector<int> mcs;
  for (const auto& c : cells)
    if (std::find(mcs.begin(), mcs.end(), c.mcs) == mcs.end()) mcs.push_back(c.mcs);
  std::sort(mcs.begin(), mcs.end());
  std::vector<BackoffRow> rows;
  for (const int m : mcs) {
    std::vector<eval::CurvePoint> mean, q99;
    for (const auto& c : cells)
      if (c.mcs == m) {
        mean.push_back({c.tx_power_dbm, c.stats.mean});
        q99.push_back({c.tx_power_dbm, c.stats.q99});
      }
    auto by_power = [](const eval::CurvePoint& a, const eval::CurvePoint& b) { return a.tx_power_dbm < b.tx_power_dbm; };
    std::sort(mean.begin(), mean.end(), by_power);
    std::sort(q99.begin(), q99.end(), by_power);
    BackoffRow r;
    r.mcs = m;
    r.mean_crossing_dbm = eval::crossing_power(mean, target_bler, fmt::format("mean (MCS {})", m), log_floor);
    r.q99_crossing_dbm = eval::crossing_power(q99, target_bler, fmt::format("q99 (MCS {})", m), log_floor);
    r.backoff_db = r.q99_crossing_dbm - r.mean_crossing_dbm;
    rows.push_back(r);
  }
  return rows;
}

std::vector<SelftestCase> run_selftest(const ExperimentConfig& cfg, std::size_t subframes) {
  std::vector<SelftestCase> out;
  link::LinkConfig lc = cfg.link;
  lc.channel = channel::ChannelConfig{};
  lc.channel.model = channel::ChannelModel::ideal;
  lc.impairments = channel::ImpairmentConfig{};
  for (const std::size_t width : {std::size_t{1}, std::size_t{2}, lc.grid.n_subchannels}) {
    if (width > lc.grid.n_subchannels) continue;
    lc.alloc = {0, width};
    link::LinkSimulator sim(lc, 1);
    for (int m = 0; m <= coding::kMaxMcs; ++m) {
      SelftestCase c;
      c.name = fmt::format("loopback mcs {} width {}", m, width);
      try {
        Rng rng(derive_seed(cfg.master_seed, {0x5f, width, static_cast<std::uint64_t>(m)}));
        std::size_t errors = 0, sci_errors = 0;
        for (std::size_t sf = 0; sf < subframes; ++sf) {
          const auto o = sim.run_subframe(m, 0.0, static_cast<std::int64_t>(sf), rng);
          errors += !o.success();
          sci_errors += !o.sci_exact;
        }
        c.pass = errors == 0 && sci_errors == 0;
        c.detail = fmt::format("{} block errors, {} SCI errors in {} subframes", errors, sci_errors, subframes);
      } catch (const coding::AllocationTooSmall& e) {
        // the allocation cannot carry this MCS at all; nothing to loop back
        c.pass = true;
        c.detail = std::string("skipped: ") + e.what();
      }
      out.push_back(c);
    }
  }
  return out;
}

std::string manifest_text(const ExperimentConfig& cfg, const std::string& command) {
  std::string s = "# run manifest\n" + to_config_text(cfg);
  s += "manifest.command = " + command + "\n";
  s += "manifest.seed = " + std::to_string(cfg.master_seed) + "\n";
  s += "manifest.code_version = " + std::string(code_version()) + "\n";
  return s;
}

}  // namespace slsim::io
