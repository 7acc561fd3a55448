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

// Experiment drivers behind the command-line subcommands.

#include <string>
#include <vector>

#include "slsim/config.hpp"
#include "slsim/csv.hpp"
#include "slsim/sweep.hpp"

namespace slsim::io {

/// Version string baked in at build time.
const char* code_version();

/// Sweep spec for the bler-sweep axes of `cfg`.
sweep::SweepSpec bler_sweep_spec(const ExperimentConfig& cfg, std::size_t workers);

/// Sweep spec for the throughput axes: one power, MCS 0..28 unless listed.
sweep::SweepSpec throughput_sweep_spec(const ExperimentConfig& cfg, std::size_t workers);

/// Collision rate and PRR per (load, policy) in abstract or full-PHY mode.
std::vector<SpsRow> run_sps_experiment(const ExperimentConfig& cfg);

/// Back-off per MCS from a sweep table. Curves that never cross the target
/// raise NotCrossedError.
std::vector<BackoffRow> backoff_table(const std::vector<sweep::SweepCell>& cells, double target_bler,
                                      double log_floor);

struct SelftestCase {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Loopback over an ideal channel: every MCS at 1, 2 and full-width
/// allocations, `subframes` blocks each.
std::vector<SelftestCase> run_selftest(const ExperimentConfig& cfg, std::size_t subframes);

/// Config snapshot followed by manifest.* lines.
std::string manifest_text(const ExperimentConfig& cfg, const std::string& command);

}  // namespace slsim::io
