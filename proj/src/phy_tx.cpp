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

#include "slsim/phy_tx.hpp"

#include <cmath>
#include <string>

#include "slsim/coding/conv_code.hpp"
#include "slsim/coding/crc.hpp"
#include "slsim/coding/modulation.hpp"
#include "slsim/coding/rate_match.hpp"
#include "slsim/coding/scrambler.hpp"
#include "slsim/error.hpp"

namespace slsim::phy {

using coding::CrcKind;
using coding::SequenceKind;

std::vector<cplx> encode_pscch(const Sci& sci, int vehicle_id, std::int64_t subframe_idx,
                               const grid::GridConfig& cfg) {
  const std::size_t n_re = grid::pscch_re_count(cfg);
  const Bits with_crc = coding::crc_attach(sci.pack(), CrcKind::control16);
  const Bits coded = coding::conv_encode(with_crc);
  const Bits matched = coding::rate_match(coded, 2 * n_re);
  const Bits scrambled =
      coding::scramble(coding::interleave(matched), coding::sequence_seed(SequenceKind::pscch, vehicle_id, subframe_idx));
  return coding::modulate(scrambled, coding::Modulation::qpsk);
}

std::vector<cplx> encode_pssch(std::span<const std::uint8_t> payload, const coding::McsEntry& mcs,
                               const grid::Allocation& alloc, int vehicle_id, std::int64_t subframe_idx,
                               const grid::GridConfig& cfg) {
  const std::size_t n_re = grid::pssch_re_count(cfg, alloc);
  const std::size_t tbs = coding::tbs_for(mcs, n_re);
  if (payload.size() != tbs)
    throw ContractError("encode_pssch: payload has " + std::to_string(payload.size()) + " bits, TBS is " +
                        std::to_string(tbs));
  const Bits with_crc = coding::crc_attach(payload, CrcKind::data24);
  const Bits coded = coding::conv_encode(with_crc);
  const Bits matched = coding::rate_match(coded, n_re * mcs.bits_per_symbol());
  const Bits scrambled =
      coding::scramble(coding::interleave(matched), coding::sequence_seed(SequenceKind::pssch, vehicle_id, subframe_idx));
  return coding::modulate(scrambled, mcs.modulation);
}

std::size_t transport_block_bits(const grid::GridConfig& cfg, const grid::Allocation& alloc, int mcs_index) {
  return coding::tbs_for(coding::mcs_lookup(mcs_index), grid::pssch_re_count(cfg, alloc));
}

grid::SubframeGrid build_tx_grid(std::span<const std::uint8_t> payload, const Sci& sci,
                                 const grid::Allocation& alloc, const TxIds& ids, const grid::GridConfig& cfg) {
  if (sci.n_subchannels != alloc.n_subchannels)
    throw ContractError("SCI claims " + std::to_string(sci.n_subchannels) + " sub-channels, allocation has " +
                        std::to_string(alloc.n_subchannels));
  const auto pscch = encode_pscch(sci, ids.vehicle_id, ids.subframe_idx, cfg);
  const auto pssch = encode_pssch(payload, coding::mcs_lookup(sci.mcs), alloc, ids.vehicle_id, ids.subframe_idx, cfg);
  const auto dmrs = grid::dmrs_for_allocation(cfg, alloc, ids.vehicle_id, ids.subframe_idx);
  return grid::map_subframe(cfg, alloc, pscch, pssch, dmrs);
}

Samples build_tx_subframe(std::span<const std::uint8_t> payload, const Sci& sci, const grid::Allocation& alloc,
                          const TxIds& ids, const grid::GridConfig& cfg, OfdmModem& modem, double tx_power_dbm) {
  Samples samples = modem.modulate(build_tx_grid(payload, sci, alloc, ids, cfg));
  scale_to_power(samples, tx_power_dbm);
  return samples;
}

double mean_power(std::span<const cplx> samples) {
  if (samples.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& s : samples) acc += std::norm(s);
  return acc / static_cast<double>(samples.size());
}

void scale_to_power(std::span<cplx> samples, double dbm) {
  const double p = mean_power(samples);
  if (p <= 0.0) return;
  const double g = std::sqrt(dbm_to_mw(dbm) / p);
  for (auto& s : samples) s *= g;
}

}  // namespace slsim::phy
