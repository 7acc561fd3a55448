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

// Buffered whole-subframe receiver. The complete subframe is demodulated
// first; control is then searched per sub-channel and data decoded once the
// SCI has fixed the allocation width.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "slsim/coding/mcs.hpp"
#include "slsim/grid.hpp"
#include "slsim/ofdm.hpp"
#include "slsim/sci.hpp"
#include "slsim/types.hpp"

namespace slsim::phy {

/// Identities the receiver tries during blind search.
struct RxIds {
  std::vector<int> vehicle_ids{1};
  std::int64_t subframe_idx = 0;
};

enum class EqualizerKind { mmse, zero_forcing };

struct RxOptions {
  bool cfo_correction = true;
  EqualizerKind equalizer = EqualizerKind::mmse;
};

/// Per-cell channel gains over one allocation, indexed [symbol][subcarrier - first].
struct ChannelEstimate {
  grid::Allocation alloc;
  std::size_t n_symbols = 0;
  std::size_t width = 0;
  std::vector<cplx> gains;
  double noise_var = 0.0;

  const cplx& at(std::size_t symbol, std::size_t k_rel) const { return gains[symbol * width + k_rel]; }
};

struct Equalized {
  std::vector<cplx> symbols;     // MMSE output conj(h) y / (|h|^2 + N0)
  std::vector<double> bias;      // |h|^2 / (|h|^2 + N0)
  std::vector<double> noise_var; // post-equalisation noise variance around bias * s

  /// Bias-removed symbols and their noise variances, for the demapper.
  void unbiased(std::vector<cplx>& symbols_out, std::vector<double>& vars_out) const;
};

struct DetectedSci {
  std::size_t start_subchannel = 0;
  int vehicle_id = 0;
  Sci sci;
};

struct PsschResult {
  Bits payload;
  bool crc_pass = false;
  double cfo_estimate_hz = 0.0;
  double noise_var_estimate = 0.0;
};

struct DecodedBlock {
  int vehicle_id = 0;
  std::size_t start_subchannel = 0;
  Bits payload;
  bool crc_pass = false;
  int mcs = 0;
  std::size_t n_re = 0;
};

struct RxResult {
  std::vector<DetectedSci> detected_scis;
  std::vector<DecodedBlock> blocks;  // blocks[i] belongs to detected_scis[i]
  ChannelEstimate channel_estimate;  // of the first decoded block
  double noise_var_estimate = 0.0;
  double cfo_estimate_hz = 0.0;
};

grid::SubframeGrid ofdm_demodulate(std::span<const cplx> samples, OfdmModem& modem, const grid::GridConfig& cfg);

/// Mean phase advance between successive DMRS columns over `alloc`, as a
/// frequency. Unambiguous while |cfo| < 1 / (2 * DMRS spacing).
double estimate_cfo(const grid::SubframeGrid& grid, const grid::GridConfig& cfg, const grid::Allocation& alloc,
                    std::span<const cplx> dmrs_expected, const OfdmConfig& ofdm);

/// De-rotates every symbol of `alloc` by the phase a `cfo_hz` offset
/// accumulates up to that symbol.
void correct_cfo(grid::SubframeGrid& grid, const grid::GridConfig& cfg, const grid::Allocation& alloc, double cfo_hz,
                 const OfdmConfig& ofdm);

/// Least-squares at DMRS cells, linear interpolation in time between DMRS
/// columns and hold outside them. The noise variance is the mean squared
/// residual of the DMRS estimates around a per-subcarrier straight-line fit
/// in time, corrected for the two fitted parameters.
ChannelEstimate estimate_channel(const grid::SubframeGrid& grid, const grid::GridConfig& cfg,
                                 const grid::Allocation& alloc, std::span<const cplx> dmrs_expected);

Equalized equalize(std::span<const cplx> cells, std::span<const cplx> gains, double noise_var);

/// Gains for the PSSCH cells of the estimate's allocation, in mapping order.
std::vector<cplx> pssch_gains(const ChannelEstimate& est, const grid::GridConfig& cfg);
/// Gains for the PSCCH cells of the estimate's allocation, in mapping order.
std::vector<cplx> pscch_gains(const ChannelEstimate& est, const grid::GridConfig& cfg);

/// Inverse control chain on demapped soft bits.
std::optional<Sci> decode_pscch_llrs(std::span<const double> llrs, int vehicle_id, std::int64_t subframe_idx,
                                     const grid::GridConfig& cfg);

/// Inverse data chain on demapped soft bits.
PsschResult decode_pssch_llrs(std::span<const double> llrs, const coding::McsEntry& mcs,
                              const grid::Allocation& alloc, int vehicle_id, std::int64_t subframe_idx,
                              const grid::GridConfig& cfg);

/// Searches every sub-channel for each candidate identity; keeps CRC-valid
/// SCIs, resolving overlapping claims in favour of the lowest start.
std::vector<DetectedSci> blind_decode_pscch(const grid::SubframeGrid& grid, const grid::GridConfig& cfg,
                                            const OfdmConfig& ofdm, const RxIds& ids, const RxOptions& opts = {});

std::vector<DetectedSci> blind_decode_pscch(const grid::SubframeGrid& grid, const grid::GridConfig& cfg,
                                            const OfdmConfig& ofdm, int vehicle_id, std::int64_t subframe_idx);

PsschResult decode_pssch(const grid::SubframeGrid& grid, const grid::GridConfig& cfg, const OfdmConfig& ofdm,
                         const Sci& sci, std::size_t start_subchannel, int vehicle_id, std::int64_t subframe_idx,
                         const RxOptions& opts = {}, ChannelEstimate* estimate_out = nullptr);

RxResult receive_subframe(std::span<const cplx> samples, const grid::GridConfig& cfg, OfdmModem& modem,
                          const RxIds& ids, const RxOptions& opts = {});

}  // namespace slsim::phy
