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

// Single-link Monte Carlo harness: transmit chain, channel, impairments,
// noise and the buffered receiver for one subframe at a time.

#include <cstdint>
#include <optional>

#include "slsim/channel.hpp"
#include "slsim/grid.hpp"
#include "slsim/ofdm.hpp"
#include "slsim/phy_rx.hpp"
#include "slsim/phy_tx.hpp"
#include "slsim/random.hpp"

namespace slsim::link {

struct LinkConfig {
  grid::GridConfig grid;
  phy::OfdmConfig ofdm;
  channel::ChannelConfig channel;
  channel::ImpairmentConfig impairments;
  channel::PowerCalibration calibration;
  grid::Allocation alloc{0, 6};
  int vehicle_id = 1;
  phy::RxOptions rx;

  /// Throws ConfigError on any inconsistent sub-configuration.
  void validate() const;
};

struct LinkOutcome {
  bool sci_detected = false;  // an SCI from the transmitter was found at the right sub-channel
  bool sci_exact = false;     // ... and all its fields match
  bool crc_pass = false;
  bool payload_exact = false;
  std::size_t tb_bits = 0;

  bool success() const { return crc_pass && payload_exact; }
};

class LinkSimulator {
 public:
  /// `channel_seed` replaces the configured channel seed, one per trial.
  LinkSimulator(const LinkConfig& cfg, std::uint64_t channel_seed);

  /// Transmits one random transport block in absolute subframe `subframe_idx`.
  /// Noise and payload bits are drawn from `rng`.
  LinkOutcome run_subframe(int mcs, double tx_power_dbm, std::int64_t subframe_idx, Rng& rng);

  /// Same, with a caller-supplied payload.
  LinkOutcome run_subframe(const Bits& payload, int mcs, double tx_power_dbm, std::int64_t subframe_idx, Rng& rng);

  const LinkConfig& config() const { return cfg_; }
  phy::OfdmModem& modem() { return modem_; }

 private:
  LinkConfig cfg_;
  phy::OfdmModem modem_;
  channel::FadingChannel fading_;
};

Bits random_bits(std::size_t n, Rng& rng);

struct UncodedResult {
  std::size_t bits = 0;
  std::size_t bit_errors = 0;
  std::size_t blocks = 0;        // blocks of `block_bits` consecutive bits
  std::size_t block_errors = 0;
  double ebn0_db = 0.0;          // per-bit SNR seen by the PSSCH cells

  double ber() const { return bits ? static_cast<double>(bit_errors) / static_cast<double>(bits) : 0.0; }
  double bler() const { return blocks ? static_cast<double>(block_errors) / static_cast<double>(blocks) : 0.0; }
};

/// Test hook: uncoded QPSK on every PSSCH cell of the allocation, sent through
/// the same subframe framing, power scaling and AWGN as the coded link and
/// detected with a genie channel (hard decisions). `snr_db` is the
/// time-domain SNR used by the link.
UncodedResult run_uncoded_qpsk(const LinkConfig& cfg, double snr_db, std::size_t n_subframes,
                               std::size_t block_bits, Rng& rng);

}  // namespace slsim::link
