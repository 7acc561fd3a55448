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


#include "slsim/sps.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "slsim/channel.hpp"
#include "slsim/error.hpp"
#include "slsim/phy_rx.hpp"
#include "slsim/phy_tx.hpp"

namespace slsim::mac {

const char* to_string(Policy p) {
  switch (p) {
    case Policy::random:
      return "random";
    case Policy::preconfigured:
      return "preconfigured";
    case Policy::sensing:
      return "sensing";
  }
  return "?";
}

Policy policy_from_string(const std::string& name) {
  if (name == "random") return Policy::random;
  if (name == "preconfigured") return Policy::preconfigured;
  if (name == "sensing") return Policy::sensing;
  throw ConfigError("unknown policy '" + name + "'", "sps.policy");
}

const char* to_string(PhyMode m) { return m == PhyMode::abstract ? "abstract" : "full_phy"; }

PhyMode phy_mode_from_string(const std::string& name) {
  if (name == "abstract") return PhyMode::abstract;
  if (name == "full_phy") return PhyMode::full_phy;
  throw ConfigError("unknown mode '" + name + "'", "sps.mode");
}

void PoolConfig::validate() const {
  if (n_subchannels == 0) throw ConfigError("must be positive", "pool.n_subchannels");
  static constexpr int kPeriods[] = {1, 10, 20, 50, 100};
  if (std::find(std::begin(kPeriods), std::end(kPeriods), selection_period_ms) == std::end(kPeriods))
    throw ConfigError("must be one of 1, 10, 20, 50, 100", "pool.selection_period_ms");
  if (sensing_window_ms == 0) throw ConfigError("must be positive", "pool.sensing_window_ms");
  if (!(keep_fraction > 0.0 && keep_fraction <= 1.0)) throw ConfigError("must lie in (0, 1]", "pool.keep_fraction");
  if (counter_min < 1 || counter_max < counter_min) throw ConfigError("need 1 <= min <= max", "pool.counter_min");
}

std::size_t PoolConfig::n_resources(std::size_t width) const {
  if (width == 0 || width > n_subchannels) return 0;
  return static_cast<std::size_t>(selection_period_ms) * (n_subchannels - width + 1);
}

bool Grant::active_in(std::int64_t subframe_idx) const {
  return subframe_idx % period_ms == static_cast<std::int64_t>(subframe_offset);
}

bool Grant::collides_with(const Grant& other) const {
  return subframe_offset == other.subframe_offset && period_ms == other.period_ms &&
         allocation().overlaps(other.allocation());
}

SensingHistory::SensingHistory(std::size_t window_ms, std::size_t n_subchannels)
    : window_(window_ms), n_sub_(n_subchannels), slots_(window_ms) {
  if (window_ms == 0) throw ContractError("SensingHistory: empty window");
  for (auto& s : slots_) s.energy.assign(n_sub_, 0.0);
}

const SensingHistory::Slot& SensingHistory::slot(std::int64_t sf) const {
  return slots_[static_cast<std::size_t>(sf % static_cast<std::int64_t>(window_))];
}

SensingHistory::Slot& SensingHistory::slot(std::int64_t sf) {
  return slots_[static_cast<std::size_t>(sf % static_cast<std::int64_t>(window_))];
}

void SensingHistory::begin_subframe(std::int64_t sf) {
  if (sf < 0) throw ContractError("SensingHistory: negative subframe");
  auto& s = slot(sf);
  s.subframe = sf;
  std::fill(s.energy.begin(), s.energy.end(), 0.0);
  s.reservations.clear();
}

bool SensingHistory::holds(std::int64_t sf) const { return sf >= 0 && slot(sf).subframe == sf; }

void SensingHistory::add_energy(std::int64_t sf, std::size_t subchannel, double energy) {
  if (!holds(sf)) throw ContractError("SensingHistory: subframe not open");
  slot(sf).energy.at(subchannel) += energy;
}

void SensingHistory::add_reservation(std::int64_t sf, const Reservation& r) {
  if (!holds(sf)) throw ContractError("SensingHistory: subframe not open");
  slot(sf).reservations.push_back(r);
}

double SensingHistory::energy(std::int64_t sf, std::size_t subchannel) const {
  return holds(sf) ? slot(sf).energy.at(subchannel) : 0.0;
}

const std::vector<Reservation>& SensingHistory::reservations(std::int64_t sf) const {
  static const std::vector<Reservation> none;
  return holds(sf) ? slot(sf).reservations : none;
}

namespace {

int draw_counter(const PoolConfig& pool, Rng& rng) {
  return std::uniform_int_distribution<int>(pool.counter_min, pool.counter_max)(rng);
}

Grant grant_for(std::size_t resource, std::size_t width, const PoolConfig& pool) {
  const std::size_t starts = pool.n_subchannels - width + 1;
  Grant g;
  g.subframe_offset = resource / starts;
  g.start_subchannel = resource % starts;
  g.n_subchannels = width;
  g.period_ms = pool.selection_period_ms;
  return g;
}

}  // namespace

Grant select_resource(Policy policy, const SensingHistory& history, const PoolConfig& pool, std::size_t width,
                      Rng& rng, const SelectionContext& ctx) {
  pool.validate();
  if (width == 0 || width > pool.n_subchannels)
    throw ContractError("select_resource: width " + std::to_string(width) + " does not fit the pool");
  const std::size_t n_res = pool.n_resources(width);

  if (policy == Policy::preconfigured) {
    Grant g = ctx.preconfigured;
    g.allocation().validate(grid::GridConfig{.n_subchannels = pool.n_subchannels});
    g.reselection_counter = draw_counter(pool, rng);
    return g;
  }
  if (policy == Policy::random) {
    Grant g = grant_for(std::uniform_int_distribution<std::size_t>(0, n_res - 1)(rng), width, pool);
    g.reselection_counter = draw_counter(pool, rng);
    return g;
  }

  if (history.n_subchannels() != pool.n_subchannels) throw ContractError("select_resource: history/pool mismatch");
  const auto P = static_cast<std::int64_t>(pool.selection_period_ms);
  const auto W = static_cast<std::int64_t>(history.window());
  const std::size_t n_sub = pool.n_subchannels;
  const std::size_t starts = n_sub - width + 1;

  // Future occupancy over (now, now + W] projected from decoded reservations,
  // and phases of the selection period that were not monitored.
  std::vector<std::uint8_t> reserved(static_cast<std::size_t>(W) * n_sub, 0);
  std::vector<std::uint8_t> unmonitored(static_cast<std::size_t>(P), 0);
  std::vector<double> energy_sum(static_cast<std::size_t>(P) * n_sub, 0.0);
  std::vector<int> energy_cnt(static_cast<std::size_t>(P), 0);
  for (std::int64_t t = std::max<std::int64_t>(0, ctx.now - W + 1); t <= ctx.now; ++t) {
    const auto phase = static_cast<std::size_t>(t % P);
    if (!history.holds(t)) {
      unmonitored[phase] = 1;
      continue;
    }
    ++energy_cnt[phase];
    for (std::size_t c = 0; c < n_sub; ++c) energy_sum[phase * n_sub + c] += history.energy(t, c);
    for (const auto& r : history.reservations(t)) {
      if (r.period_ms <= 0) continue;
      double e = 0.0;
      for (std::size_t c = r.start_subchannel; c < std::min(n_sub, r.start_subchannel + r.n_subchannels); ++c)
        e += history.energy(t, c);
      if (!(e > pool.rssi_threshold)) continue;
      for (std::int64_t u = t + r.period_ms; u <= ctx.now + W; u += r.period_ms) {
        if (u <= ctx.now) continue;
        const auto row = static_cast<std::size_t>(u - ctx.now - 1);
        for (std::size_t c = r.start_subchannel; c < std::min(n_sub, r.start_subchannel + r.n_subchannels); ++c)
          reserved[row * n_sub + c] = 1;
      }
    }
  }

  struct Candidate {
    std::size_t resource;
    double energy;
  };
  std::vector<Candidate> all, kept;
  for (std::size_t res = 0; res < n_res; ++res) {
    const auto o = res / starts;
    const auto s = res % starts;
    double e = 0.0;
    if (energy_cnt[o] > 0) {
      for (std::size_t c = s; c < s + width; ++c) e += energy_sum[o * n_sub + c];
      e /= energy_cnt[o];
    }
    all.push_back({res, e});
    if (unmonitored[o]) continue;
    bool blocked = false;
    for (std::int64_t u = ctx.now + 1; u <= ctx.now + W && !blocked; ++u) {
      if (u % P != static_cast<std::int64_t>(o)) continue;
      const auto row = static_cast<std::size_t>(u - ctx.now - 1);
      for (std::size_t c = s; c < s + width; ++c) blocked = blocked || reserved[row * n_sub + c];
    }
    if (!blocked) kept.push_back({res, e});
  }
  const bool fallback = kept.empty();
  if (fallback) kept = all;

  // random order first so equal energies are not biased towards low indices
  std::shuffle(kept.begin(), kept.end(), rng);
  std::stable_sort(kept.begin(), kept.end(), [](const Candidate& a, const Candidate& b) { return a.energy < b.energy; });
  const auto keep = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(pool.keep_fraction * static_cast<double>(kept.size()) - 1e-9)));
  const auto pick = std::uniform_int_distribution<std::size_t>(0, keep - 1)(rng);
  Grant g = grant_for(kept[pick].resource, width, pool);
  g.reselection_counter = draw_counter(pool, rng);
  g.fallback = fallback;
  return g;
}

double snr_threshold_db(int mcs) {
  static constexpr double kThreshold[] = {
#include "sps_thresholds.inc"
  };
  if (mcs < 0 || mcs >= static_cast<int>(std::size(kThreshold)))
    throw RangeError("snr_threshold_db: MCS " + std::to_string(mcs) + " out of range");
  return kThreshold[mcs];
}

Vehicle::Vehicle(int id_, Policy policy_, const PoolConfig& pool, std::uint64_t seed)
    : id(id_), policy(policy_), history(pool.sensing_window_ms, pool.n_subchannels), rng(seed) {}

void NetworkConfig::validate() const {
  pool.validate();
  if (grant_width == 0 || grant_width > pool.n_subchannels)
    throw ConfigError("must lie in [1, pool.n_subchannels]", "sps.grant_width");
  if (mode == PhyMode::full_phy) {
    phy.validate();
    if (phy.grid.n_subchannels != pool.n_subchannels)
      throw ConfigError("full_phy mode needs grid.n_subchannels == pool.n_subchannels", "pool.n_subchannels");
  }
}

Network::Network(const NetworkConfig& cfg, std::vector<Vehicle> vehicles, std::uint64_t seed)
    : cfg_(cfg), vehicles_(std::move(vehicles)), seed_(seed) {
  cfg_.validate();
  if (cfg_.mode == PhyMode::full_phy)
    modem_ = std::make_unique<phy::OfdmModem>(cfg_.phy.ofdm, cfg_.phy.grid.total_subcarriers());
}

std::vector<TxRecord> Network::step(std::int64_t sf) {
  std::vector<std::size_t> tx;
  for (std::size_t i = 0; i < vehicles_.size(); ++i)
    if (vehicles_[i].has_traffic && vehicles_[i].grant.active_in(sf)) tx.push_back(i);

  auto log = cfg_.mode == PhyMode::abstract ? receive_abstract(sf, tx) : receive_full_phy(sf, tx);

  // Sensing: receivers log energy and decodable reservations; transmitters
  // are deaf in their own subframe and leave the slot unmonitored.
  const double snr_lin = std::pow(10.0, cfg_.link_snr_db / 10.0);
  const bool sci_ok = cfg_.link_snr_db >= snr_threshold_db(0);
  for (std::size_t r = 0; r < vehicles_.size(); ++r) {
    auto& v = vehicles_[r];
    if (std::find(tx.begin(), tx.end(), r) != tx.end()) continue;
    v.history.begin_subframe(sf);
    for (const auto i : tx) {
      const auto& g = vehicles_[i].grant;
      for (std::size_t c = g.start_subchannel; c < g.start_subchannel + g.n_subchannels; ++c)
        v.history.add_energy(sf, c, snr_lin);
    }
    for (const auto i : tx) {
      const auto& g = vehicles_[i].grant;
      // the control channel sits in the first sub-channel of the grant
      bool clash = false;
      for (const auto j : tx)
        if (j != i && vehicles_[j].grant.allocation().overlaps({g.start_subchannel, 1})) clash = true;
      if (!clash && sci_ok) v.history.add_reservation(sf, {g.start_subchannel, g.n_subchannels, g.period_ms});
    }
  }

  for (const auto i : tx) {
    auto& v = vehicles_[i];
    if (--v.grant.reselection_counter > 0) continue;
    SelectionContext ctx;
    ctx.now = sf;
    ctx.preconfigured = v.preconfigured;
    v.grant = select_resource(v.policy, v.history, cfg_.pool, cfg_.grant_width, v.rng, ctx);
  }
  return log;
}

std::vector<TxRecord> Network::receive_abstract(std::int64_t sf, const std::vector<std::size_t>& tx) {
  std::vector<TxRecord> log;
  for (const auto i : tx) {
    TxRecord rec;
    rec.subframe_idx = sf;
    rec.vehicle_id = vehicles_[i].id;
    rec.grant = vehicles_[i].grant;
    for (const auto j : tx)
      if (j != i && vehicles_[j].grant.allocation().overlaps(rec.grant.allocation())) rec.collided = true;
    rec.receivers = vehicles_.size() - 1;
    if (!rec.collided && cfg_.link_snr_db >= snr_threshold_db(vehicles_[i].mcs))
      rec.received = rec.receivers - (tx.size() - 1);  // half duplex: other transmitters cannot listen
    log.push_back(rec);
  }
  return log;
}

std::vector<TxRecord> Network::receive_full_phy(std::int64_t sf, const std::vector<std::size_t>& tx) {
  const auto& pc = cfg_.phy;
  const double tx_dbm = cfg_.link_snr_db - pc.calibration.gain_offset_db;
  const std::size_t len = pc.ofdm.subframe_len(pc.grid.n_symbols);

  std::vector<Samples> waves;
  std::vector<Bits> payloads;
  std::vector<int> ids;
  for (const auto& v : vehicles_) ids.push_back(v.id);
  for (const auto i : tx) {
    auto& v = vehicles_[i];
    phy::Sci sci;
    sci.mcs = static_cast<std::uint8_t>(v.mcs);
    sci.n_subchannels = static_cast<std::uint8_t>(v.grant.n_subchannels);
    sci.rri_code = phy::Sci::rri_code_for(v.grant.period_ms);
    Rng prng(derive_seed(seed_, {0x70u, static_cast<std::uint64_t>(sf), static_cast<std::uint64_t>(v.id)}));
    payloads.push_back(link::random_bits(phy::transport_block_bits(pc.grid, v.grant.allocation(), v.mcs), prng));
    waves.push_back(phy::build_tx_subframe(payloads.back(), sci, v.grant.allocation(), {v.id, sf}, pc.grid, *modem_,
                                           tx_dbm));
  }

  std::vector<TxRecord> log;
  for (const auto i : tx) {
    TxRecord rec;
    rec.subframe_idx = sf;
    rec.vehicle_id = vehicles_[i].id;
    rec.grant = vehicles_[i].grant;
    for (const auto j : tx)
      if (j != i && vehicles_[j].grant.allocation().overlaps(rec.grant.allocation())) rec.collided = true;
    rec.receivers = vehicles_.size() - 1;
    log.push_back(rec);
  }
  if (tx.empty()) return log;

  for (std::size_t r = 0; r < vehicles_.size(); ++r) {
    if (std::find(tx.begin(), tx.end(), r) != tx.end()) continue;
    Samples rx(len, cplx(0.0, 0.0));
    for (std::size_t k = 0; k < tx.size(); ++k) {
      Samples s = waves[k];
      if (pc.channel.fades()) {
        auto ch = pc.channel;
        ch.seed = derive_seed(seed_, {0x71u, static_cast<std::uint64_t>(vehicles_[tx[k]].id),
                                      static_cast<std::uint64_t>(vehicles_[r].id)});
        const channel::FadingChannel fading(ch, pc.ofdm.sample_rate(), pc.ofdm.cp_len);
        s = fading.apply(s, sf * static_cast<std::int64_t>(len));
      }
      if (pc.impairments.cfo_enabled) channel::apply_cfo(s, pc.impairments.cfo_hz, pc.ofdm.sample_rate());
      for (std::size_t n = 0; n < len; ++n) rx[n] += s[n];
    }
    Rng nrng(derive_seed(seed_, {0x72u, static_cast<std::uint64_t>(sf), static_cast<std::uint64_t>(vehicles_[r].id)}));
    if (pc.channel.adds_noise()) channel::add_awgn(rx, cfg_.link_snr_db, phy::dbm_to_mw(tx_dbm), nrng);
    const auto res = phy::receive_subframe(rx, pc.grid, *modem_, phy::RxIds{ids, sf}, pc.rx);
    for (std::size_t k = 0; k < tx.size(); ++k) {
      const auto& v = vehicles_[tx[k]];
      for (std::size_t d = 0; d < res.detected_scis.size(); ++d) {
        const auto& det = res.detected_scis[d];
        if (det.vehicle_id != v.id || det.start_subchannel != v.grant.start_subchannel) continue;
        if (res.blocks[d].crc_pass && res.blocks[d].payload == payloads[k]) ++log[k].received;
        break;
      }
    }
  }
  return log;
}

std::vector<Vehicle> make_vehicles(const NetworkConfig& cfg, Policy policy, std::size_t n, std::uint64_t seed,
                                   int first_id) {
  cfg.validate();
  const std::size_t n_res = cfg.pool.n_resources(cfg.grant_width);
  std::vector<Vehicle> vehicles;
  for (std::size_t i = 0; i < n; ++i) {
    const int id = first_id + static_cast<int>(i);
    Vehicle v(id, policy, cfg.pool, derive_seed(seed, {0x60u, static_cast<std::uint64_t>(id)}));
    v.preconfigured = grant_for(i % n_res, cfg.grant_width, cfg.pool);
    v.mcs = cfg.mcs;
    SelectionContext ctx;
    ctx.preconfigured = v.preconfigured;
    // nothing has been sensed yet: every policy but preconfigured starts at random
    v.grant = select_resource(policy == Policy::preconfigured ? policy : Policy::random, v.history, cfg.pool,
                              cfg.grant_width, v.rng, ctx);
    vehicles.push_back(std::move(v));
  }
  return vehicles;
}

std::vector<TxRecord> run_network(const NetworkConfig& cfg, Policy policy, std::size_t n_vehicles,
                                  std::size_t duration_ms, std::uint64_t seed) {
  Network net(cfg, make_vehicles(cfg, policy, n_vehicles, seed), seed);
  std::vector<TxRecord> log;
  for (std::size_t sf = 0; sf < duration_ms; ++sf) {
    auto step = net.step(static_cast<std::int64_t>(sf));
    log.insert(log.end(), step.begin(), step.end());
  }
  return log;
}

double collision_rate(const std::vector<TxRecord>& log) {
  if (log.empty()) return 0.0;
  const auto n = std::count_if(log.begin(), log.end(), [](const TxRecord& r) { return r.collided; });
  return static_cast<double>(n) / static_cast<double>(log.size());
}

double packet_reception_ratio(const std::vector<TxRecord>& log) {
  std::size_t ok = 0, total = 0;
  for (const auto& r : log) {
    ok += r.received;
    total += r.receivers;
  }
  return total ? static_cast<double>(ok) / static_cast<double>(total) : 0.0;
}

}  // namespace slsim::mac
