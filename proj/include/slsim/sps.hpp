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

// Resource selection and a subframe-stepped network of vehicles sharing one
// sub-channelized pool.

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "slsim/grid.hpp"
#include "slsim/link.hpp"
#include "slsim/random.hpp"

namespace slsim::mac {

enum class Policy { random, preconfigured, sensing };

const char* to_string(Policy p);
Policy policy_from_string(const std::string& name);

struct PoolConfig {
  std::size_t n_subchannels = 6;
  int selection_period_ms = 100;
  std::size_t sensing_window_ms = 100;
  double keep_fraction = 0.2;
  /// A decoded reservation excludes its resource only when the sensed energy
  /// is above this level (linear, noise = 1).
  double rssi_threshold = -std::numeric_limits<double>::infinity();
  int counter_min = 5;
  int counter_max = 15;

  /// Throws ConfigError naming the bad field.
  void validate() const;

  /// Candidate resources for a grant `width` sub-channels wide.
  std::size_t n_resources(std::size_t width) const;
};

/// A periodic reservation: `n_subchannels` starting at `start_subchannel`, in
/// every subframe with subframe_idx % period_ms == subframe_offset.
struct Grant {
  std::size_t start_subchannel = 0;
  std::size_t n_subchannels = 1;
  int period_ms = 100;
  std::size_t subframe_offset = 0;
  int reselection_counter = 0;
  bool fallback = false;  // sensing found no candidate and fell back to energy ranking

  grid::Allocation allocation() const { return {start_subchannel, n_subchannels}; }
  bool active_in(std::int64_t subframe_idx) const;
  /// Same sub-channels touched in the same subframe.
  bool collides_with(const Grant& other) const;
};

/// Reservation seen in a decoded SCI.
struct Reservation {
  std::size_t start_subchannel = 0;
  std::size_t n_subchannels = 1;
  int period_ms = 0;
};

/// Ring buffer of the last `window` subframes: energy per sub-channel and any
/// reservations decoded there.
class SensingHistory {
 public:
  SensingHistory(std::size_t window_ms, std::size_t n_subchannels);

  /// Starts a fresh entry for `subframe_idx`, overwriting the slot it maps to.
  void begin_subframe(std::int64_t subframe_idx);
  void add_energy(std::int64_t subframe_idx, std::size_t subchannel, double energy);
  void add_reservation(std::int64_t subframe_idx, const Reservation& r);

  std::size_t window() const { return window_; }
  std::size_t n_subchannels() const { return n_sub_; }
  /// Whether the slot currently holds `subframe_idx`.
  bool holds(std::int64_t subframe_idx) const;
  double energy(std::int64_t subframe_idx, std::size_t subchannel) const;
  const std::vector<Reservation>& reservations(std::int64_t subframe_idx) const;

 private:
  struct Slot {
    std::int64_t subframe = -1;
    std::vector<double> energy;
    std::vector<Reservation> reservations;
  };
  const Slot& slot(std::int64_t subframe_idx) const;
  Slot& slot(std::int64_t subframe_idx);

  std::size_t window_;
  std::size_t n_sub_;
  std::vector<Slot> slots_;
};

struct SelectionContext {
  std::int64_t now = 0;               // subframe in which the selection happens
  Grant preconfigured;                 // used by Policy::preconfigured
};

/// Picks a grant of `width` sub-channels. The reselection counter is drawn
/// uniformly from [counter_min, counter_max].
Grant select_resource(Policy policy, const SensingHistory& history, const PoolConfig& pool, std::size_t width,
                      Rng& rng, const SelectionContext& ctx = {});

enum class PhyMode { abstract, full_phy };

const char* to_string(PhyMode m);
PhyMode phy_mode_from_string(const std::string& name);

/// SNR (dB, time domain) at which the AWGN BLER of each MCS falls to 0.1 on a
/// full-width allocation. Measured once with this simulator.
double snr_threshold_db(int mcs);

struct Vehicle {
  int id = 1;
  Policy policy = Policy::random;
  Grant grant;
  Grant preconfigured;
  int mcs = 0;
  bool has_traffic = true;
  SensingHistory history;
  Rng rng;

  Vehicle(int id, Policy policy, const PoolConfig& pool, std::uint64_t seed);
};

struct NetworkConfig {
  PoolConfig pool;
  std::size_t grant_width = 1;
  int mcs = 0;                // of every vehicle
  double link_snr_db = 20.0;  // every pair of vehicles
  PhyMode mode = PhyMode::abstract;
  link::LinkConfig phy;       // full_phy mode only; alloc and vehicle_id are ignored

  void validate() const;
};

struct TxRecord {
  std::int64_t subframe_idx = 0;
  int vehicle_id = 0;
  Grant grant;
  bool collided = false;           // another transmission overlapped in time and frequency
  std::size_t receivers = 0;       // potential receivers (all other vehicles)
  std::size_t received = 0;        // receivers that decoded the block
};

class Network {
 public:
  Network(const NetworkConfig& cfg, std::vector<Vehicle> vehicles, std::uint64_t seed);

  /// Advances one subframe and returns its transmissions.
  std::vector<TxRecord> step(std::int64_t subframe_idx);

  const std::vector<Vehicle>& vehicles() const { return vehicles_; }
  Vehicle& vehicle(std::size_t i) { return vehicles_.at(i); }
  const NetworkConfig& config() const { return cfg_; }

 private:
  std::vector<TxRecord> receive_abstract(std::int64_t sf, const std::vector<std::size_t>& tx);
  std::vector<TxRecord> receive_full_phy(std::int64_t sf, const std::vector<std::size_t>& tx);

  NetworkConfig cfg_;
  std::vector<Vehicle> vehicles_;
  std::uint64_t seed_;
  std::unique_ptr<phy::OfdmModem> modem_;
};

/// `n` vehicles of one policy with ids 1..n, a preconfigured grant each
/// (resource i mod pool size) and an initial grant drawn at random (or the
/// preconfigured one for that policy).
std::vector<Vehicle> make_vehicles(const NetworkConfig& cfg, Policy policy, std::size_t n, std::uint64_t seed,
                                   int first_id = 1);

/// Builds `n` vehicles with make_vehicles and runs `duration_ms` subframes
/// starting at subframe 0.
std::vector<TxRecord> run_network(const NetworkConfig& cfg, Policy policy, std::size_t n_vehicles,
                                  std::size_t duration_ms, std::uint64_t seed);

double collision_rate(const std::vector<TxRecord>& log);
double packet_reception_ratio(const std::vector<TxRecord>& log);

}  // namespace slsim::mac
