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

// Transmit chain: SCI and transport-block encoding, grid mapping, OFDM
// modulation and power scaling.

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "slsim/coding/mcs.hpp"
#include "slsim/grid.hpp"
#include "slsim/ofdm.hpp"
#include "slsim/sci.hpp"
#include "slsim/types.hpp"

namespace slsim::phy {

struct TxIds {
  int vehicle_id = 1;
  std::int64_t subframe_idx = 0;
};

/// SCI + CRC-16, convolutional code, rate matching to the PSCCH region,
/// scrambling, QPSK. Returns pscch_re_count(cfg) symbols.
std::vector<cplx> encode_pscch(const Sci& sci, int vehicle_id, std::int64_t subframe_idx,
                               const grid::GridConfig& cfg);

/// Transport block + CRC-24, convolutional code, rate matching to the PSSCH
/// region of `alloc`, scrambling, modulation. `payload` must hold exactly
/// tbs_for(mcs, pssch_re_count(cfg, alloc)) bits.
std::vector<cplx> encode_pssch(std::span<const std::uint8_t> payload, const coding::McsEntry& mcs,
                               const grid::Allocation& alloc, int vehicle_id, std::int64_t subframe_idx,
                               const grid::GridConfig& cfg);

/// Transport block size for an SCI's allocation.
std::size_t transport_block_bits(const grid::GridConfig& cfg, const grid::Allocation& alloc, int mcs_index);

/// Frequency-domain subframe with PSCCH, PSSCH and DMRS in place.
grid::SubframeGrid build_tx_grid(std::span<const std::uint8_t> payload, const Sci& sci,
                                 const grid::Allocation& alloc, const TxIds& ids, const grid::GridConfig& cfg);

/// Time-domain subframe scaled to a mean sample power of `tx_power_dbm` (mW reference).
Samples build_tx_subframe(std::span<const std::uint8_t> payload, const Sci& sci, const grid::Allocation& alloc,
                          const TxIds& ids, const grid::GridConfig& cfg, OfdmModem& modem, double tx_power_dbm);

double mean_power(std::span<const cplx> samples);

/// Rescales in place so the mean sample power is 10^(dbm/10). All-zero input stays zero.
void scale_to_power(std::span<cplx> samples, double dbm);

inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

}  // namespace slsim::phy
