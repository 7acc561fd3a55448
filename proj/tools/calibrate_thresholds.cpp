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


// Regenerates src/sps_thresholds.inc: for each MCS, the AWGN SNR (full-width
// allocation) at which BLER falls to 0.1, by log-linear interpolation over a
// 0.25 dB grid.

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "slsim/coding/mcs.hpp"
#include "slsim/link.hpp"

using namespace slsim;

namespace {

double bler_at(link::LinkSimulator& sim, int mcs, double snr_db, int blocks, std::uint64_t seed) {
  Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(mcs)}));
  const double dbm = snr_db - sim.config().calibration.gain_offset_db;
  int errors = 0;
  for (int i = 0; i < blocks; ++i) errors += !sim.run_subframe(mcs, dbm, i, rng).success();
  return static_cast<double>(errors) / blocks;
}

}  // namespace

int main(int argc, char** argv) {
  const int blocks = argc > 1 ? std::atoi(argv[1]) : 400;
  link::LinkConfig cfg;
  cfg.alloc = {0, cfg.grid.n_subchannels};
  link::LinkSimulator sim(cfg, 1);
  const double target = 0.1;
  double start = -6.0;
  double previous = -1e9;
  for (int m = 0; m <= coding::kMaxMcs; ++m) {
    // thresholds rise with MCS, so each search starts just below the last one
    double lo = start;
    double b_lo = bler_at(sim, m, lo, blocks, 7);
    double result = lo;
    for (double s = lo + 0.25; s < 40.0; s += 0.25) {
      const double b = bler_at(sim, m, s, blocks, 7);
      if (b <= target) {
        const double l0 = std::log10(std::max(b_lo, 1e-6)), l1 = std::log10(std::max(b, 1e-6));
        const double lt = std::log10(target);
        result = l0 == l1 ? s : s - 0.25 + 0.25 * (l0 - lt) / (l0 - l1);
        break;
      }
      b_lo = b;
    }
    // Monte Carlo noise can invert neighbouring rows by a few hundredths of a dB
    result = std::max(result, previous);
    previous = result;
    start = std::floor(result * 4.0) / 4.0 - 0.5;
    fmt::print("{:.2f},{}", result, m == coding::kMaxMcs ? "\n" : (m % 8 == 7 ? "\n" : " "));
    std::fflush(stdout);
  }
}
