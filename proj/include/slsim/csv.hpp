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

// CSV tables written by the experiment runner, and their parsers.

#include <string>
#include <vector>

#include "slsim/evaluator.hpp"
#include "slsim/sweep.hpp"

namespace slsim::io {

struct SpsRow {
  std::string policy;
  double load = 0.0;
  double collision_rate = 0.0;
  double prr = 0.0;

  friend bool operator==(const SpsRow&, const SpsRow&) = default;
};

/// tx_power_dbm,mcs,n_samples,bler_mean,bler_std,bler_q99
std::string sweep_csv(const std::vector<sweep::SweepCell>& cells);
std::vector<sweep::SweepCell> parse_sweep_csv(const std::string& text);

/// trial,tx_power_dbm,mcs,window_idx,n_blocks,n_errors
std::string samples_csv(const std::vector<eval::WindowSample>& samples);
std::vector<eval::WindowSample> parse_samples_csv(const std::string& text);

/// policy,load,collision_rate,prr
std::string sps_csv(const std::vector<SpsRow>& rows);
std::vector<SpsRow> parse_sps_csv(const std::string& text);

/// tx_power_dbm,mcs,tbs_bits,bler_mean,throughput_bps
std::string throughput_csv(const std::vector<sweep::ThroughputRow>& rows);
std::vector<sweep::ThroughputRow> parse_throughput_csv(const std::string& text);

/// backoff per MCS: mcs,mean_crossing_dbm,q99_crossing_dbm,backoff_db
struct BackoffRow {
  int mcs = 0;
  double mean_crossing_dbm = 0.0;
  double q99_crossing_dbm = 0.0;
  double backoff_db = 0.0;

  friend bool operator==(const BackoffRow&, const BackoffRow&) = default;
};
std::string backoff_csv(const std::vector<BackoffRow>& rows);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace slsim::io
