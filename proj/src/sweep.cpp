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


#include "slsim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "slsim/coding/mcs.hpp"
#include "slsim/error.hpp"
#include "slsim/phy_tx.hpp"

namespace slsim::sweep {

void SweepSpec::validate() const {
  link.validate();
  if (tx_power_dbm.empty()) throw ConfigError("needs at least one power", "sweep.tx_power_dbm");
  if (mcs.empty()) throw ConfigError("needs at least one MCS", "sweep.mcs");
  for (const int m : mcs)
    if (m < 0 || m > coding::kMaxMcs) throw ConfigError("MCS " + std::to_string(m) + " out of range", "sweep.mcs");
  if (trials == 0) throw ConfigError("must be at least 1", "trials");
  if (window_blocks == 0) throw ConfigError("must be at least 1", "window_blocks");
  for (const int m : mcs) (void)phy::transport_block_bits(link.grid, link.alloc, m);
}

SweepResult run_bler_sweep(const SweepSpec& spec) {
  spec.validate();
  struct Task {
    std::size_t trial;
    int mcs;
    double power;
  };
  std::vector<Task> tasks;
  for (std::size_t t = 0; t < spec.trials; ++t)
    for (const int m : spec.mcs)
      for (const double p : spec.tx_power_dbm) tasks.push_back({t, m, p});

  eval::DecodeCache cache;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    try {
      for (std::size_t i = next++; i < tasks.size(); i = next++) {
        const auto& task = tasks[i];
        link::LinkSimulator sim(spec.link, derive_seed(spec.master_seed, {1, task.trial}));
        Rng rng(derive_seed(spec.master_seed, {2, task.trial, static_cast<std::uint64_t>(task.mcs)}));
        for (std::size_t sf = 0; sf < spec.window_blocks; ++sf) {
          const auto o = sim.run_subframe(task.mcs, task.power, static_cast<std::int64_t>(sf), rng);
          cache.record({static_cast<std::uint32_t>(task.trial), static_cast<std::uint32_t>(sf), task.power,
                        task.mcs, o.success(), static_cast<std::uint32_t>(o.tb_bits)});
        }
      }
    } catch (...) {
      std::lock_guard lock(failure_mu);
      if (!failure) failure = std::current_exception();
      next = tasks.size();
    }
  };
  const std::size_t n_workers = std::clamp<std::size_t>(spec.workers, 1, tasks.size());
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < n_workers; ++w) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);

  SweepResult result;
  result.samples = eval::window_samples(cache.snapshot(), spec.window_blocks);
  std::size_t i = 0;
  while (i < result.samples.size()) {
    std::size_t j = i;
    std::vector<double> values;
    while (j < result.samples.size() && result.samples[j].tx_power_dbm == result.samples[i].tx_power_dbm &&
           result.samples[j].mcs == result.samples[i].mcs)
      values.push_back(result.samples[j++].bler());
    result.cells.push_back({result.samples[i].tx_power_dbm, result.samples[i].mcs, eval::bler_stats(values)});
    i = j;
  }
  return result;
}

namespace {

std::vector<eval::CurvePoint> curve(const SweepResult& r, int mcs, bool q99) {
  std::vector<eval::CurvePoint> out;
  for (const auto& c : r.cells)
    if (c.mcs == mcs) out.push_back({c.tx_power_dbm, q99 ? c.stats.q99 : c.stats.mean});
  return out;
}

}  // namespace

std::vector<eval::CurvePoint> mean_curve(const SweepResult& result, int mcs) { return curve(result, mcs, false); }
std::vector<eval::CurvePoint> q99_curve(const SweepResult& result, int mcs) { return curve(result, mcs, true); }

std::vector<ThroughputRow> throughput_table(const SweepResult& result, const link::LinkConfig& link) {
  std::vector<ThroughputRow> rows;
  for (const auto& c : result.cells) {
    ThroughputRow r;
    r.tx_power_dbm = c.tx_power_dbm;
    r.mcs = c.mcs;
    r.tbs_bits = phy::transport_block_bits(link.grid, link.alloc, c.mcs);
    r.bler_mean = c.stats.mean;
    r.throughput_bps = eval::throughput_bps(c.stats.mean, c.mcs, link.alloc, link.grid);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace slsim::sweep
