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

#include "slsim/phy_rx.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
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

namespace {

constexpr double kTinyGain = 1e-12;

void check_dmrs(const grid::GridConfig& cfg, const grid::Allocation& alloc, std::span<const cplx> dmrs) {
  if (dmrs.size() != grid::dmrs_re_count(cfg, alloc))
    throw ContractError("expected " + std::to_string(grid::dmrs_re_count(cfg, alloc)) + " DMRS values, got " +
                        std::to_string(dmrs.size()));
}

}  // namespace

grid::SubframeGrid ofdm_demodulate(std::span<const cplx> samples, OfdmModem& modem, const grid::GridConfig& cfg) {
  return modem.demodulate(samples, cfg.n_symbols);
}

double estimate_cfo(const grid::SubframeGrid& grid, const grid::GridConfig& cfg, const grid::Allocation& alloc,
                    std::span<const cplx> dmrs_expected, const OfdmConfig& ofdm) {
  const auto& dmrs = cfg.dmrs_symbols;
  if (dmrs.size() < 2) throw ContractError("CFO estimation needs at least two DMRS symbols");
  check_dmrs(cfg, alloc, dmrs_expected);
  const std::size_t k0 = alloc.first_subcarrier(cfg);
  const std::size_t width = alloc.n_subcarriers(cfg);
  const double symbol_time = static_cast<double>(ofdm.symbol_len()) / ofdm.sample_rate();

  double weighted = 0.0;
  double weight = 0.0;
  for (std::size_t i = 0; i + 1 < dmrs.size(); ++i) {
    cplx z{0.0, 0.0};
    for (std::size_t k = 0; k < width; ++k) {
      const cplx a = grid.at(dmrs[i], k0 + k) * std::conj(dmrs_expected[i * width + k]);
      const cplx b = grid.at(dmrs[i + 1], k0 + k) * std::conj(dmrs_expected[(i + 1) * width + k]);
      z += std::conj(a) * b;
    }
    const double dt = static_cast<double>(dmrs[i + 1] - dmrs[i]) * symbol_time;
    const double w = std::abs(z);
    weighted += w * std::arg(z) / (2.0 * std::numbers::pi * dt);
    weight += w;
  }
  return weight > 0.0 ? weighted / weight : 0.0;
}

void correct_cfo(grid::SubframeGrid& grid, const grid::GridConfig& cfg, const grid::Allocation& alloc, double cfo_hz,
                 const OfdmConfig& ofdm) {
  if (cfo_hz == 0.0) return;
  const std::size_t k0 = alloc.first_subcarrier(cfg);
  const std::size_t width = alloc.n_subcarriers(cfg);
  const double symbol_time = static_cast<double>(ofdm.symbol_len()) / ofdm.sample_rate();
  for (std::size_t l = 0; l < grid.n_symbols(); ++l) {
    const cplx rot = std::polar(1.0, -2.0 * std::numbers::pi * cfo_hz * static_cast<double>(l) * symbol_time);
    auto row = grid.row(l);
    for (std::size_t k = k0; k < k0 + width; ++k) row[k] *= rot;
  }
}

ChannelEstimate estimate_channel(const grid::SubframeGrid& grid, const grid::GridConfig& cfg,
                                 const grid::Allocation& alloc, std::span<const cplx> dmrs_expected) {
  const auto& dmrs = cfg.dmrs_symbols;
  if (dmrs.empty()) throw ContractError("channel estimation needs DMRS symbols");
  check_dmrs(cfg, alloc, dmrs_expected);
  const std::size_t k0 = alloc.first_subcarrier(cfg);
  const std::size_t width = alloc.n_subcarriers(cfg);
  const std::size_t nd = dmrs.size();

  // least-squares estimates at the DMRS cells
  std::vector<cplx> ls(nd * width);
  for (std::size_t d = 0; d < nd; ++d)
    for (std::size_t k = 0; k < width; ++k) {
      const cplx ref = dmrs_expected[d * width + k];
      ls[d * width + k] = grid.at(dmrs[d], k0 + k) / ref;
    }

  ChannelEstimate est;
  est.alloc = alloc;
  est.n_symbols = cfg.n_symbols;
  est.width = width;
  est.gains.resize(cfg.n_symbols * width);
  for (std::size_t l = 0; l < cfg.n_symbols; ++l) {
    cplx* out = est.gains.data() + l * width;
    if (l <= dmrs.front()) {
      std::copy_n(ls.begin(), width, out);
    } else if (l >= dmrs.back()) {
      std::copy_n(ls.begin() + static_cast<std::ptrdiff_t>((nd - 1) * width), width, out);
    } else {
      std::size_t i = 0;
      while (dmrs[i + 1] < l) ++i;
      const double frac = static_cast<double>(l - dmrs[i]) / static_cast<double>(dmrs[i + 1] - dmrs[i]);
      const cplx* a = ls.data() + i * width;
      const cplx* b = ls.data() + (i + 1) * width;
      for (std::size_t k = 0; k < width; ++k) out[k] = a[k] + frac * (b[k] - a[k]);
    }
  }

  if (nd > 2) {
    // residual around the per-subcarrier least-squares line through the DMRS columns
    double tm = 0.0;
    for (const auto l : dmrs) tm += static_cast<double>(l);
    tm /= static_cast<double>(nd);
    double sxx = 0.0;
    for (const auto l : dmrs) sxx += (static_cast<double>(l) - tm) * (static_cast<double>(l) - tm);
    double acc = 0.0;
    for (std::size_t k = 0; k < width; ++k) {
      cplx mean{0.0, 0.0};
      cplx sxy{0.0, 0.0};
      for (std::size_t d = 0; d < nd; ++d) mean += ls[d * width + k];
      mean /= static_cast<double>(nd);
      for (std::size_t d = 0; d < nd; ++d) sxy += (static_cast<double>(dmrs[d]) - tm) * (ls[d * width + k] - mean);
      const cplx slope = sxy / sxx;
      for (std::size_t d = 0; d < nd; ++d) {
        const cplx fit = mean + slope * (static_cast<double>(dmrs[d]) - tm);
        acc += std::norm(ls[d * width + k] - fit);
      }
    }
    est.noise_var = acc / static_cast<double>(width * (nd - 2));
  } else {
    // two or fewer columns: adjacent-subcarrier differences
    double acc = 0.0;
    std::size_t n = 0;
    for (std::size_t d = 0; d < nd; ++d)
      for (std::size_t k = 0; k + 1 < width; ++k, ++n) acc += std::norm(ls[d * width + k + 1] - ls[d * width + k]);
    est.noise_var = n ? acc / (2.0 * static_cast<double>(n)) : 0.0;
  }
  return est;
}

void Equalized::unbiased(std::vector<cplx>& symbols_out, std::vector<double>& vars_out) const {
  symbols_out.resize(symbols.size());
  vars_out.resize(symbols.size());
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (bias[i] < kTinyGain) {
      symbols_out[i] = {0.0, 0.0};
      vars_out[i] = 1.0 / kTinyGain;
      continue;
    }
    symbols_out[i] = symbols[i] / bias[i];
    vars_out[i] = noise_var[i] / (bias[i] * bias[i]);
  }
}

Equalized equalize(std::span<const cplx> cells, std::span<const cplx> gains, double noise_var) {
  if (cells.size() != gains.size()) throw ContractError("equalize: one gain per cell");
  Equalized eq;
  eq.symbols.resize(cells.size());
  eq.bias.resize(cells.size());
  eq.noise_var.resize(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const cplx h = gains[i];
    const double p = std::norm(h);
    const double denom = p + noise_var;
    if (denom < kTinyGain) {
      eq.symbols[i] = {0.0, 0.0};
      eq.bias[i] = 0.0;
      eq.noise_var[i] = 1.0;
      continue;
    }
    eq.symbols[i] = std::conj(h) * cells[i] / denom;
    eq.bias[i] = p / denom;
    eq.noise_var[i] = p * noise_var / (denom * denom);
  }
  return eq;
}

std::vector<cplx> pssch_gains(const ChannelEstimate& est, const grid::GridConfig& cfg) {
  std::vector<cplx> out;
  out.reserve(cfg.n_data_symbols() * (est.width - cfg.pscch_width_sc));
  for (const auto l : cfg.data_symbols())
    for (std::size_t k = cfg.pscch_width_sc; k < est.width; ++k) out.push_back(est.at(l, k));
  return out;
}

std::vector<cplx> pscch_gains(const ChannelEstimate& est, const grid::GridConfig& cfg) {
  std::vector<cplx> out;
  out.reserve(grid::pscch_re_count(cfg));
  for (const auto l : cfg.data_symbols())
    for (std::size_t k = 0; k < cfg.pscch_width_sc; ++k) out.push_back(est.at(l, k));
  return out;
}

std::optional<Sci> decode_pscch_llrs(std::span<const double> llrs, int vehicle_id, std::int64_t subframe_idx,
                                     const grid::GridConfig& cfg) {
  if (llrs.size() != 2 * grid::pscch_re_count(cfg)) throw ContractError("PSCCH soft-bit count mismatch");
  Llrs soft(llrs.begin(), llrs.end());
  coding::descramble_llrs(soft, coding::sequence_seed(SequenceKind::pscch, vehicle_id, subframe_idx));
  const std::size_t n_info = Sci::kBits + coding::crc_length(CrcKind::control16);
  const Llrs coded = coding::rate_dematch(coding::deinterleave(soft), coding::conv_coded_length(n_info));
  const Bits decoded = coding::viterbi_decode(coded);
  if (!coding::crc_check(decoded, CrcKind::control16)) return std::nullopt;
  return Sci::unpack(std::span(decoded).first(Sci::kBits));
}

PsschResult decode_pssch_llrs(std::span<const double> llrs, const coding::McsEntry& mcs,
                              const grid::Allocation& alloc, int vehicle_id, std::int64_t subframe_idx,
                              const grid::GridConfig& cfg) {
  const std::size_t n_re = grid::pssch_re_count(cfg, alloc);
  if (llrs.size() != n_re * mcs.bits_per_symbol()) throw ContractError("PSSCH soft-bit count mismatch");
  const std::size_t tbs = coding::tbs_for(mcs, n_re);
  Llrs soft(llrs.begin(), llrs.end());
  coding::descramble_llrs(soft, coding::sequence_seed(SequenceKind::pssch, vehicle_id, subframe_idx));
  const Llrs coded = coding::rate_dematch(coding::deinterleave(soft), coding::conv_coded_length(tbs + coding::crc_length(CrcKind::data24)));
  Bits decoded = coding::viterbi_decode(coded);
  PsschResult r;
  r.crc_pass = coding::crc_check(decoded, CrcKind::data24);
  decoded.resize(tbs);
  r.payload = std::move(decoded);
  return r;
}

namespace {

// CFO-corrected copy of the grid (only `alloc` is touched) plus its channel estimate.
struct Prepared {
  grid::SubframeGrid grid;
  ChannelEstimate est;
  double cfo_hz = 0.0;
};

Prepared prepare(const grid::SubframeGrid& grid, const grid::GridConfig& cfg, const OfdmConfig& ofdm,
                 const grid::Allocation& alloc, std::span<const cplx> dmrs_full, const RxOptions& opts) {
  const auto dmrs = grid::dmrs_slice(cfg, alloc, dmrs_full);
  Prepared p{grid, {}, 0.0};
  if (opts.cfo_correction && cfg.dmrs_symbols.size() >= 2) {
    p.cfo_hz = estimate_cfo(grid, cfg, alloc, dmrs, ofdm);
    correct_cfo(p.grid, cfg, alloc, p.cfo_hz, ofdm);
  }
  p.est = estimate_channel(p.grid, cfg, alloc, dmrs);
  return p;
}

Llrs demap(std::span<const cplx> cells, std::span<const cplx> gains, double noise_var, coding::Modulation mod,
           EqualizerKind kind) {
  std::vector<cplx> symbols;
  std::vector<double> vars;
  if (kind == EqualizerKind::mmse) {
    equalize(cells, gains, noise_var).unbiased(symbols, vars);
  } else {
    // zero forcing: h^-1 y, every cell trusted equally
    equalize(cells, gains, 0.0).unbiased(symbols, vars);
    std::fill(vars.begin(), vars.end(), std::max(noise_var, 1e-6));
  }
  return coding::soft_demod(symbols, mod, vars);
}

}  // namespace

std::vector<DetectedSci> blind_decode_pscch(const grid::SubframeGrid& grid, const grid::GridConfig& cfg,
                                            const OfdmConfig& ofdm, const RxIds& ids, const RxOptions& opts) {
  std::vector<DetectedSci> found;
  for (const int vid : ids.vehicle_ids) {
    const auto dmrs_full = grid::dmrs_full_width(cfg, vid, ids.subframe_idx);
    for (std::size_t s = 0; s < cfg.n_subchannels; ++s) {
      const grid::Allocation one{s, 1};
      const Prepared p = prepare(grid, cfg, ofdm, one, dmrs_full, opts);
      const auto cells = grid::extract_pscch(cfg, s, p.grid);
      const auto llrs = demap(cells, pscch_gains(p.est, cfg), p.est.noise_var, coding::Modulation::qpsk, opts.equalizer);
      const auto sci = decode_pscch_llrs(llrs, vid, ids.subframe_idx, cfg);
      if (!sci || s + sci->n_subchannels > cfg.n_subchannels) continue;
      found.push_back({s, vid, *sci});
    }
  }
  std::stable_sort(found.begin(), found.end(),
                   [](const DetectedSci& a, const DetectedSci& b) { return a.start_subchannel < b.start_subchannel; });
  std::vector<DetectedSci> kept;
  for (const auto& d : found) {
    const grid::Allocation claim{d.start_subchannel, d.sci.n_subchannels};
    const bool clash = std::any_of(kept.begin(), kept.end(), [&](const DetectedSci& k) {
      return claim.overlaps(grid::Allocation{k.start_subchannel, k.sci.n_subchannels});
    });
    if (!clash) kept.push_back(d);
  }
  return kept;
}

std::vector<DetectedSci> blind_decode_pscch(const grid::SubframeGrid& grid, const grid::GridConfig& cfg,
                                            const OfdmConfig& ofdm, int vehicle_id, std::int64_t subframe_idx) {
  return blind_decode_pscch(grid, cfg, ofdm, RxIds{{vehicle_id}, subframe_idx});
}

PsschResult decode_pssch(const grid::SubframeGrid& grid, const grid::GridConfig& cfg, const OfdmConfig& ofdm,
                         const Sci& sci, std::size_t start_subchannel, int vehicle_id, std::int64_t subframe_idx,
                         const RxOptions& opts, ChannelEstimate* estimate_out) {
  const grid::Allocation alloc{start_subchannel, sci.n_subchannels};
  alloc.validate(cfg);
  const auto mcs = coding::mcs_lookup(sci.mcs);
  const auto dmrs_full = grid::dmrs_full_width(cfg, vehicle_id, subframe_idx);
  const Prepared p = prepare(grid, cfg, ofdm, alloc, dmrs_full, opts);
  const auto cells = grid::extract_subframe(cfg, alloc, p.grid).pssch;
  const auto llrs = demap(cells, pssch_gains(p.est, cfg), p.est.noise_var, mcs.modulation, opts.equalizer);
  PsschResult r = decode_pssch_llrs(llrs, mcs, alloc, vehicle_id, subframe_idx, cfg);
  r.cfo_estimate_hz = p.cfo_hz;
  r.noise_var_estimate = p.est.noise_var;
  if (estimate_out) *estimate_out = p.est;
  return r;
}

RxResult receive_subframe(std::span<const cplx> samples, const grid::GridConfig& cfg, OfdmModem& modem,
                          const RxIds& ids, const RxOptions& opts) {
  const auto grid = ofdm_demodulate(samples, modem, cfg);
  RxResult result;
  result.detected_scis = blind_decode_pscch(grid, cfg, modem.config(), ids, opts);
  for (const auto& det : result.detected_scis) {
    ChannelEstimate est;
    PsschResult r = decode_pssch(grid, cfg, modem.config(), det.sci, det.start_subchannel, det.vehicle_id,
                                 ids.subframe_idx, opts, &est);
    const grid::Allocation alloc{det.start_subchannel, det.sci.n_subchannels};
    if (result.blocks.empty()) {
      result.channel_estimate = std::move(est);
      result.noise_var_estimate = r.noise_var_estimate;
      result.cfo_estimate_hz = r.cfo_estimate_hz;
    }
    result.blocks.push_back({det.vehicle_id, det.start_subchannel, std::move(r.payload), r.crc_pass, det.sci.mcs,
                             grid::pssch_re_count(cfg, alloc)});
  }
  return result;
}

}  // namespace slsim::phy
