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

#include "slsim/link.hpp"

#include <cmath>

#include "slsim/coding/modulation.hpp"

#include "slsim/error.hpp"

namespace slsim::link {

namespace {

channel::ChannelConfig with_seed(channel::ChannelConfig c, std::uint64_t seed) {
  c.seed = seed;
  return c;
}

}  // namespace

void LinkConfig::validate() const {
  grid.validate();
  ofdm.validate(grid.total_subcarriers());
  channel.validate(ofdm.cp_len);
  impairments.validate(ofdm.cp_len);
  try {
    alloc.validate(grid);
  } catch (const RangeError& e) {
    throw ConfigError(e.what(), "link.alloc");
  }
}

LinkSimulator::LinkSimulator(const LinkConfig& cfg, std::uint64_t channel_seed)
    : cfg_(cfg),
      modem_((cfg.validate(), cfg.ofdm), cfg.grid.total_subcarriers()),
      fading_(with_seed(cfg.channel, channel_seed), cfg.ofdm.sample_rate(), cfg.ofdm.cp_len) {}

LinkOutcome LinkSimulator::run_subframe(int mcs, double tx_power_dbm, std::int64_t subframe_idx, Rng& rng) {
  const std::size_t tbs = phy::transport_block_bits(cfg_.grid, cfg_.alloc, mcs);
  return run_subframe(random_bits(tbs, rng), mcs, tx_power_dbm, subframe_idx, rng);
}

LinkOutcome LinkSimulator::run_subframe(const Bits& payload, int mcs, double tx_power_dbm, std::int64_t subframe_idx,
                                        Rng& rng) {
  phy::Sci sci;
  sci.mcs = static_cast<std::uint8_t>(mcs);
  sci.n_subchannels = static_cast<std::uint8_t>(cfg_.alloc.n_subchannels);
  const phy::TxIds ids{cfg_.vehicle_id, subframe_idx};

  Samples samples = phy::build_tx_subframe(payload, sci, cfg_.alloc, ids, cfg_.grid, modem_, tx_power_dbm);
  if (cfg_.channel.fades()) {
    const auto origin = subframe_idx * static_cast<std::int64_t>(cfg_.ofdm.subframe_len(cfg_.grid.n_symbols));
    samples = fading_.apply(samples, origin);
  }
  if (cfg_.impairments.cfo_enabled) channel::apply_cfo(samples, cfg_.impairments.cfo_hz, cfg_.ofdm.sample_rate());
  if (cfg_.impairments.timing_enabled)
    samples = channel::apply_timing_offset(samples, cfg_.impairments.timing_offset_samples);
  if (cfg_.channel.adds_noise())
    channel::add_awgn(samples, cfg_.calibration.snr_db(tx_power_dbm), phy::dbm_to_mw(tx_power_dbm), rng);

  const auto rx = phy::receive_subframe(samples, cfg_.grid, modem_, phy::RxIds{{cfg_.vehicle_id}, subframe_idx},
                                        cfg_.rx);
  LinkOutcome out;
  out.tb_bits = payload.size();
  for (std::size_t i = 0; i < rx.detected_scis.size(); ++i) {
    const auto& det = rx.detected_scis[i];
    if (det.vehicle_id != cfg_.vehicle_id || det.start_subchannel != cfg_.alloc.start_subchannel) continue;
    out.sci_detected = true;
    out.sci_exact = det.sci == sci;
    const auto& block = rx.blocks[i];
    out.crc_pass = block.crc_pass;
    out.payload_exact = block.payload == payload;
    break;
  }
  return out;
}

Bits random_bits(std::size_t n, Rng& rng) {
  Bits b(n);
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if ((i & 63u) == 0) word = rng();
    b[i] = static_cast<std::uint8_t>(word & 1u);
    word >>= 1;
  }
  return b;
}

UncodedResult run_uncoded_qpsk(const LinkConfig& cfg, double snr_db, std::size_t n_subframes,
                               std::size_t block_bits, Rng& rng) {
  cfg.validate();
  if (block_bits == 0) throw ContractError("run_uncoded_qpsk: block_bits must be positive");
  phy::OfdmModem modem(cfg.ofdm, cfg.grid.total_subcarriers());
  const std::size_t n_re = grid::pssch_re_count(cfg.grid, cfg.alloc);
  const std::size_t n_ctrl = grid::pscch_re_count(cfg.grid);
  const double ref_mw = 1.0;

  UncodedResult r;
  double es_over_n0 = 0.0;
  for (std::size_t sf = 0; sf < n_subframes; ++sf) {
    const Bits bits = random_bits(2 * n_re, rng);
    const auto data = coding::modulate(bits, coding::Modulation::qpsk);
    const auto ctrl = coding::modulate(random_bits(2 * n_ctrl, rng), coding::Modulation::qpsk);
    const auto dmrs = grid::dmrs_for_allocation(cfg.grid, cfg.alloc, cfg.vehicle_id, static_cast<std::int64_t>(sf));
    Samples samples = modem.modulate(grid::map_subframe(cfg.grid, cfg.alloc, ctrl, data, dmrs));
    const double amp = std::sqrt(ref_mw / phy::mean_power(samples));
    for (auto& x : samples) x *= amp;
    const double noise_var = ref_mw / std::pow(10.0, snr_db / 10.0);
    channel::add_awgn(samples, snr_db, ref_mw, rng);
    const auto rx = grid::extract_subframe(cfg.grid, cfg.alloc, phy::ofdm_demodulate(samples, modem, cfg.grid));
    std::vector<cplx> y(rx.pssch.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = rx.pssch[i] / amp;
    const Bits hard = coding::hard_decision(coding::soft_demod(y, coding::Modulation::qpsk, 1.0));
    std::size_t block_err = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) {
      const bool e = hard[i] != bits[i];
      r.bit_errors += e;
      block_err += e;
      if ((i + 1) % block_bits == 0) {
        ++r.blocks;
        r.block_errors += block_err > 0;
        block_err = 0;
      }
    }
    r.bits += bits.size();
    // unit-energy symbols; noise per bin equals the time-domain variance (unitary FFT)
    es_over_n0 = amp * amp / noise_var;
  }
  r.ebn0_db = 10.0 * std::log10(es_over_n0 / 2.0);
  return r;
}

}  // namespace slsim::link
