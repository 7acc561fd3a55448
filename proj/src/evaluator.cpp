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


#include "slsim/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <tuple>

#include "slsim/error.hpp"
#include "slsim/phy_tx.hpp"
#include "slsim/random.hpp"

namespace slsim::eval {

namespace {

auto key_of(const DecodeRecord& r) { return std::tuple(r.tx_power_dbm, r.mcs, r.trial_idx, r.subframe_idx); }

}  // namespace

std::size_t DecodeCache::KeyHash::operator()(const Key& k) const noexcept {
  std::uint64_t h = std::hash<double>{}(k.power);
  h = splitmix64(h ^ static_cast<std::uint64_t>(k.mcs));
  h = splitmix64(h ^ k.trial);
  return splitmix64(h ^ k.subframe);
}

void DecodeCache::record(const DecodeRecord& rec) {
  std::lock_guard lock(mu_);
  if (!keys_.insert({rec.tx_power_dbm, rec.mcs, rec.trial_idx, rec.subframe_idx}).second)
    throw DuplicateRecordError("duplicate decode record: power " + std::to_string(rec.tx_power_dbm) + " mcs " +
                               std::to_string(rec.mcs) + " trial " + std::to_string(rec.trial_idx) + " subframe " +
                               std::to_string(rec.subframe_idx));
  records_.push_back(rec);
}

std::size_t DecodeCache::size() const {
  std::lock_guard lock(mu_);
  return records_.size();
}

std::vector<DecodeRecord> DecodeCache::snapshot() const {
  std::vector<DecodeRecord> out;
  {
    std::lock_guard lock(mu_);
    out = records_;
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return key_of(a) < key_of(b); });
  return out;
}

std::vector<WindowSample> window_samples(std::span<const DecodeRecord> records, std::size_t window_blocks) {
  if (window_blocks == 0) throw ContractError("window_samples: window_blocks must be positive");
  std::vector<DecodeRecord> sorted(records.begin(), records.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return key_of(a) < key_of(b); });

  std::vector<WindowSample> out;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j].tx_power_dbm == sorted[i].tx_power_dbm && sorted[j].mcs == sorted[i].mcs &&
           sorted[j].trial_idx == sorted[i].trial_idx)
      ++j;
    const std::size_t full = (j - i) / window_blocks;
    for (std::size_t w = 0; w < full; ++w) {
      WindowSample s;
      s.trial = sorted[i].trial_idx;
      s.tx_power_dbm = sorted[i].tx_power_dbm;
      s.mcs = sorted[i].mcs;
      s.window_idx = static_cast<std::uint32_t>(w);
      s.n_blocks = static_cast<std::uint32_t>(window_blocks);
      for (std::size_t k = 0; k < window_blocks; ++k) s.n_errors += !sorted[i + w * window_blocks + k].crc_pass;
      out.push_back(s);
    }
    i = j;
  }
  return out;
}

double nearest_rank(std::span<const double> samples, double percent) {
  if (samples.empty()) throw ContractError("nearest_rank: empty input");
  std::vector<double> v(samples.begin(), samples.end());
  std::sort(v.begin(), v.end());
  const double exact = percent / 100.0 * static_cast<double>(v.size());
  // guard against 0.99 * 100 evaluating to 99.00000000000001
  auto rank = static_cast<std::size_t>(std::ceil(exact - 1e-9 * exact));
  rank = std::clamp<std::size_t>(rank, 1, v.size());
  return v[rank - 1];
}

BlerStats bler_stats(std::span<const double> samples) {
  if (samples.empty()) throw ContractError("bler_stats: no samples");
  // sums run over the sorted copy so the result does not depend on input order
  std::vector<double> v(samples.begin(), samples.end());
  std::sort(v.begin(), v.end());
  BlerStats s;
  s.n_samples = v.size();
  const double n = static_cast<double>(v.size());
  double sum = 0.0;
  for (const double x : v) sum += x;
  s.mean = sum / n;
  if (v.size() > 1) {
    double ss = 0.0;
    for (const double x : v) ss += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(ss / (n - 1.0));
  }
  // nearest ranks ceil(0.99 n) and ceil(0.5 n) in integer arithmetic
  s.q99 = v[(99 * v.size() + 99) / 100 - 1];
  s.median = v[(v.size() + 1) / 2 - 1];
  s.low_confidence = v.size() < 100;
  return s;
}

double mean_ci_halfwidth(const BlerStats& s, double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) throw ContractError("mean_ci_halfwidth: confidence outside (0, 1)");
  if (s.n_samples == 0) return 0.0;
  // two-sided normal quantile by bisection on erfc
  const double tail = (1.0 - confidence) / 2.0;
  double lo = 0.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (0.5 * std::erfc(mid / std::sqrt(2.0)) > tail)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi) * s.std / std::sqrt(static_cast<double>(s.n_samples));
}

double crossing_power(std::span<const CurvePoint> curve, double target, const std::string& name, double floor) {
  if (!(target > 0.0)) throw ContractError("crossing_power: target must be positive");
  for (std::size_t i = 1; i < curve.size(); ++i)
    if (!(curve[i].tx_power_dbm > curve[i - 1].tx_power_dbm))
      throw ContractError("crossing_power: powers of the " + name + " curve are not strictly increasing");
  const double lt = std::log10(std::max(target, floor));
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const double li = std::log10(std::max(curve[i].bler, floor));
    if (li == lt && (i == 0 || std::log10(std::max(curve[i - 1].bler, floor)) > lt)) return curve[i].tx_power_dbm;
    if (i + 1 == curve.size()) break;
    const double lj = std::log10(std::max(curve[i + 1].bler, floor));
    if (li > lt && lj <= lt) {
      const double f = (li - lt) / (li - lj);
      return curve[i].tx_power_dbm + f * (curve[i + 1].tx_power_dbm - curve[i].tx_power_dbm);
    }
  }
  throw NotCrossedError(name, target);
}

double backoff_db(std::span<const CurvePoint> mean_curve, std::span<const CurvePoint> q99_curve, double target_bler,
                  double floor) {
  const double pm = crossing_power(mean_curve, target_bler, "mean", floor);
  const double pq = crossing_power(q99_curve, target_bler, "q99", floor);
  return pq - pm;
}

double throughput_bps(double mean_bler, int mcs, const grid::Allocation& alloc, const grid::GridConfig& cfg,
                      double blocks_per_second) {
  if (!(mean_bler >= 0.0 && mean_bler <= 1.0)) throw ContractError("throughput_bps: BLER outside [0, 1]");
  return (1.0 - mean_bler) * static_cast<double>(phy::transport_block_bits(cfg, alloc, mcs)) * blocks_per_second;
}

}  // namespace slsim::eval
