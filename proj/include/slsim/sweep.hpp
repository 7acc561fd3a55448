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


#pragma once

// Monte Carlo BLER sweeps over transmit power and MCS.

#include <cstdint>
#include <functional>
#include <vector>

#include "slsim/evaluator.hpp"
#include "slsim/link.hpp"

namespace slsim::sweep {

struct SweepSpec {
  link::LinkConfig link;
  std::vector<double> tx_power_dbm;
  std::vector<int> mcs;
  std::size_t trials = 100;
  std::size_t window_blocks = 1000;
  std::uint64_t master_seed = 1;
  std::size_t workers = 1;

  /// Throws ConfigError for empty axes, zero trials or windows, bad MCS.
  void validate() const;
};

struct SweepCell {
  double tx_power_dbm = 0.0;
  int mcs = 0;
  eval::BlerStats stats;
};

struct SweepResult {
  std::vector<SweepCell> cells;              // sorted by (power, mcs)
  std::vector<eval::WindowSample> samples;   // sorted by (power, mcs, trial, window)
};

/// Seeds: trial t fades with derive_seed(master, {1, t}); payload and noise of
/// (t, mcs) come from derive_seed(master, {2, t, mcs}) and are reused at every
/// power. Results do not depend on the worker count.
SweepResult run_bler_sweep(const SweepSpec& spec);

/// Rows of the same table as the cells of `result`, one curve per MCS.
std::vector<eval::CurvePoint> mean_curve(const SweepResult& result, int mcs);
std::vector<eval::CurvePoint> q99_curve(const SweepResult& result, int mcs);

struct ThroughputRow {
  double tx_power_dbm = 0.0;
  int mcs = 0;
  std::size_t tbs_bits = 0;
  double bler_mean = 0.0;
  double throughput_bps = 0.0;

  friend bool operator==(const ThroughputRow&, const ThroughputRow&) = default;
};

/// Throughput per (power, mcs) cell at 1000 blocks per second.
std::vector<ThroughputRow> throughput_table(const SweepResult& result, const link::LinkConfig& link);

}  // namespace slsim::sweep
