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

// Decode-outcome cache and the offline statistics computed from it.

#include <cstdint>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "slsim/grid.hpp"

namespace slsim::eval {

struct DecodeRecord {
  std::uint32_t trial_idx = 0;
  std::uint32_t subframe_idx = 0;
  double tx_power_dbm = 0.0;
  int mcs = 0;
  bool crc_pass = false;
  std::uint32_t tb_bits = 0;
};

class DuplicateRecordError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Append-only store, safe for concurrent record() calls. A record is keyed by
/// (tx_power_dbm, mcs, trial_idx, subframe_idx).
class DecodeCache {
 public:
  void record(const DecodeRecord& rec);
  std::size_t size() const;
  /// Copy of all records sorted by (power, mcs, trial, subframe).
  std::vector<DecodeRecord> snapshot() const;

 private:
  struct Key {
    double power;
    int mcs;
    std::uint32_t trial, subframe;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept;
  };
  mutable std::mutex mu_;
  std::vector<DecodeRecord> records_;
  std::unordered_set<Key, KeyHash> keys_;
};

/// One observation window of consecutive blocks of a trial.
struct WindowSample {
  std::uint32_t trial = 0;
  double tx_power_dbm = 0.0;
  int mcs = 0;
  std::uint32_t window_idx = 0;
  std::uint32_t n_blocks = 0;
  std::uint32_t n_errors = 0;

  double bler() const { return n_blocks ? static_cast<double>(n_errors) / n_blocks : 0.0; }
  friend bool operator==(const WindowSample&, const WindowSample&) = default;
};

/// Groups records into windows of `window_blocks` consecutive subframes per
/// (power, mcs, trial). A trailing partial window is dropped. Output is
/// sorted by (power, mcs, trial, window).
std::vector<WindowSample> window_samples(std::span<const DecodeRecord> records, std::size_t window_blocks);

struct BlerStats {
  double mean = 0.0;
  double std = 0.0;  // n - 1 denominator, 0 for a single sample
  double q99 = 0.0;  // nearest rank
  double median = 0.0;
  std::size_t n_samples = 0;
  bool low_confidence = false;  // fewer than 100 samples
};

/// Empty input throws ContractError.
BlerStats bler_stats(std::span<const double> samples);

/// Nearest-rank percentile: the value at 1-based rank ceil(p/100 * n) of the ascending sort.
double nearest_rank(std::span<const double> samples, double percent);

/// Half-width of the normal-approximation confidence interval of the mean.
double mean_ci_halfwidth(const BlerStats& s, double confidence = 0.99);

struct CurvePoint {
  double tx_power_dbm = 0.0;
  double bler = 0.0;
};

class NotCrossedError : public std::runtime_error {
 public:
  NotCrossedError(const std::string& curve, double target)
      : std::runtime_error(curve + " curve does not cross BLER " + std::to_string(target)), curve_(curve) {}
  const std::string& curve() const noexcept { return curve_; }

 private:
  std::string curve_;
};

/// Power at which the curve first falls to `target`, interpolating linearly
/// in (power, log10 BLER) with BLER clamped to `floor`.
double crossing_power(std::span<const CurvePoint> curve, double target, const std::string& name,
                      double floor = 1e-6);

/// crossing(q99) - crossing(mean).
double backoff_db(std::span<const CurvePoint> mean_curve, std::span<const CurvePoint> q99_curve, double target_bler,
                  double floor = 1e-6);

/// (1 - mean BLER) * TBS * blocks per second.
double throughput_bps(double mean_bler, int mcs, const grid::Allocation& alloc, const grid::GridConfig& cfg,
                      double blocks_per_second = 1000.0);

}  // namespace slsim::eval
