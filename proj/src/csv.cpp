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


#include "slsim/csv.hpp"

#include <fmt/format.h>

#include <fstream>
#include <sstream>

#include "slsim/config.hpp"
#include "slsim/error.hpp"

namespace slsim::io {

namespace {

// Rows of comma-separated fields after checking the header line.
std::vector<std::vector<std::string>> parse_table(const std::string& text, const std::string& header) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != header)
    throw ConfigError("expected CSV header '" + header + "'", "csv");
  std::vector<std::vector<std::string>> rows;
  const auto n_cols = static_cast<std::size_t>(std::count(header.begin(), header.end(), ',')) + 1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cols.push_back(cell);
    if (cols.size() != n_cols)
      throw ConfigError("row '" + line + "' has " + std::to_string(cols.size()) + " fields, expected " +
                            std::to_string(n_cols),
                        "csv");
    rows.push_back(std::move(cols));
  }
  return rows;
}

constexpr const char* kSweepHeader = "tx_power_dbm,mcs,n_samples,bler_mean,bler_std,bler_q99";
constexpr const char* kSamplesHeader = "trial,tx_power_dbm,mcs,window_idx,n_blocks,n_errors";
constexpr const char* kSpsHeader = "policy,load,collision_rate,prr";
constexpr const char* kThroughputHeader = "tx_power_dbm,mcs,tbs_bits,bler_mean,throughput_bps";
constexpr const char* kBackoffHeader = "mcs,mean_crossing_dbm,q99_crossing_dbm,backoff_db";

}  // namespace

std::string sweep_csv(const std::vector<sweep::SweepCell>& cells) {
  std::string out = std::string(kSweepHeader) + "\n";
  for (const auto& c : cells)
    out += fmt::format("{},{},{},{},{},{}\n", c.tx_power_dbm, c.mcs, c.stats.n_samples, c.stats.mean, c.stats.std,
                       c.stats.q99);
  return out;
}

std::vector<sweep::SweepCell> parse_sweep_csv(const std::string& text) {
  std::vector<sweep::SweepCell> out;
  for (const auto& r : parse_table(text, kSweepHeader)) {
    sweep::SweepCell c;
    c.tx_power_dbm = parse_double(r[0], "tx_power_dbm");
    c.mcs = static_cast<int>(parse_int(r[1], "mcs"));
    c.stats.n_samples = static_cast<std::size_t>(parse_int(r[2], "n_samples"));
    c.stats.mean = parse_double(r[3], "bler_mean");
    c.stats.std = parse_double(r[4], "bler_std");
    c.stats.q99 = parse_double(r[5], "bler_q99");
    c.stats.low_confidence = c.stats.n_samples < 100;
    out.push_back(c);
  }
  return out;
}

std::string samples_csv(const std::vector<eval::WindowSample>& samples) {
  std::string out = std::string(kSamplesHeader) + "\n";
  for (const auto& s : samples)
    out += fmt::format("{},{},{},{},{},{}\n", s.trial, s.tx_power_dbm, s.mcs, s.window_idx, s.n_blocks, s.n_errors);
  return out;
}

std::vector<eval::WindowSample> parse_samples_csv(const std::string& text) {
  std::vector<eval::WindowSample> out;
  for (const auto& r : parse_table(text, kSamplesHeader)) {
    eval::WindowSample s;
    s.trial = static_cast<std::uint32_t>(parse_int(r[0], "trial"));
    s.tx_power_dbm = parse_double(r[1], "tx_power_dbm");
    s.mcs = static_cast<int>(parse_int(r[2], "mcs"));
    s.window_idx = static_cast<std::uint32_t>(parse_int(r[3], "window_idx"));
    s.n_blocks = static_cast<std::uint32_t>(parse_int(r[4], "n_blocks"));
    s.n_errors = static_cast<std::uint32_t>(parse_int(r[5], "n_errors"));
    out.push_back(s);
  }
  return out;
}

std::string sps_csv(const std::vector<SpsRow>& rows) {
  std::string out = std::string(kSpsHeader) + "\n";
  for (const auto& r : rows) out += fmt::format("{},{},{},{}\n", r.policy, r.load, r.collision_rate, r.prr);
  return out;
}

std::vector<SpsRow> parse_sps_csv(const std::string& text) {
  std::vector<SpsRow> out;
  for (const auto& r : parse_table(text, kSpsHeader))
    out.push_back({r[0], parse_double(r[1], "load"), parse_double(r[2], "collision_rate"), parse_double(r[3], "prr")});
  return out;
}

std::string throughput_csv(const std::vector<sweep::ThroughputRow>& rows) {
  std::string out = std::string(kThroughputHeader) + "\n";
  for (const auto& r : rows)
    out += fmt::format("{},{},{},{},{}\n", r.tx_power_dbm, r.mcs, r.tbs_bits, r.bler_mean, r.throughput_bps);
  return out;
}

std::vector<sweep::ThroughputRow> parse_throughput_csv(const std::string& text) {
  std::vector<sweep::ThroughputRow> out;
  for (const auto& r : parse_table(text, kThroughputHeader)) {
    sweep::ThroughputRow t;
    t.tx_power_dbm = parse_double(r[0], "tx_power_dbm");
    t.mcs = static_cast<int>(parse_int(r[1], "mcs"));
    t.tbs_bits = static_cast<std::size_t>(parse_int(r[2], "tbs_bits"));
    t.bler_mean = parse_double(r[3], "bler_mean");
    t.throughput_bps = parse_double(r[4], "throughput_bps");
    out.push_back(t);
  }
  return out;
}

std::string backoff_csv(const std::vector<BackoffRow>& rows) {
  std::string out = std::string(kBackoffHeader) + "\n";
  for (const auto& r : rows)
    out += fmt::format("{},{},{},{}\n", r.mcs, r.mean_crossing_dbm, r.q99_crossing_dbm, r.backoff_db);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << content;
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace slsim::io
