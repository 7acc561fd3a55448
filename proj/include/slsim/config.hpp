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

// Flat `section.key = value` configuration files and the experiment settings
// they describe.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "slsim/link.hpp"
#include "slsim/sps.hpp"

namespace slsim::io {

/// Ordered key/value pairs. Later assignments of a key replace earlier ones.
using ConfigMap = std::map<std::string, std::string>;

/// Parses `key = value` lines; `#` starts a comment, blank lines are skipped.
/// Throws ConfigError with the line number on malformed input.
ConfigMap parse_config_text(const std::string& text);
ConfigMap load_config_file(const std::string& path);

/// Applies a `key=value` override.
void apply_override(ConfigMap& map, const std::string& assignment);

struct ExperimentConfig {
  std::string scenario = "awgn";
  link::LinkConfig link;
  std::vector<double> tx_power_dbm{-20, -18, -16, -14, -12, -10, -8, -6};
  std::vector<int> mcs{0, 5, 10, 15};
  std::size_t trials = 100;
  std::size_t window_blocks = 1000;
  std::uint64_t master_seed = 1;

  double throughput_tx_power_dbm = -4.0;
  std::vector<int> throughput_mcs;  // empty means 0..28

  double target_bler = 1e-2;
  double log_floor = 1e-6;

  mac::PoolConfig pool{.n_subchannels = 4, .selection_period_ms = 10};
  std::vector<mac::Policy> sps_policies{mac::Policy::random, mac::Policy::sensing};
  std::vector<double> sps_loads{0.25, 0.5, 0.75};
  std::size_t sps_duration_ms = 10000;
  double sps_link_snr_db = 20.0;
  mac::PhyMode sps_mode = mac::PhyMode::abstract;
  std::size_t sps_grant_width = 1;
  int sps_mcs = 0;

  int traffic_mcs = 0;
  double traffic_tx_power_dbm = -10.0;
  std::size_t traffic_background_vehicles = 0;
  mac::Policy traffic_policy = mac::Policy::sensing;

  /// Throws ConfigError naming the first invalid field.
  void validate() const;
};

/// Channel and impairment presets: "ideal", "awgn", "indoor_v2v".
void apply_scenario(ExperimentConfig& cfg, const std::string& name);

/// Builds a config from defaults, the scenario preset, then every key in
/// `map`. Unknown keys throw ConfigError; `manifest.*` keys are ignored.
ExperimentConfig experiment_from_map(const ConfigMap& map);

/// Every setting as config text, in a fixed key order.
std::string to_config_text(const ExperimentConfig& cfg);

/// Number formatting shared by configs and CSV files: shortest text that
/// parses back to the same double.
std::string format_double(double v);
double parse_double(const std::string& text, const std::string& field);
long long parse_int(const std::string& text, const std::string& field);

}  // namespace slsim::io
