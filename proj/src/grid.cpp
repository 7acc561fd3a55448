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

#include "slsim/grid.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "slsim/coding/modulation.hpp"
#include "slsim/coding/scrambler.hpp"
#include "slsim/error.hpp"

namespace slsim::grid {

void GridConfig::validate() const {
  if (n_symbols == 0) throw ConfigError("must be positive", "grid.n_symbols");
  if (sc_per_subchannel == 0) throw ConfigError("must be positive", "grid.sc_per_subchannel");
  if (n_subchannels == 0) throw ConfigError("must be at least 1", "grid.n_subchannels");
  if (pscch_width_sc > sc_per_subchannel)
    throw ConfigError("PSCCH wider than a sub-channel", "grid.pscch_width_sc");
  if (agc_symbol >= n_symbols) throw ConfigError("index out of range", "grid.agc_symbol");
  if (guard_symbol >= n_symbols) throw ConfigError("index out of range", "grid.guard_symbol");
  if (agc_symbol == guard_symbol) throw ConfigError("AGC and guard symbols coincide", "grid.guard_symbol");
  std::set<std::size_t> seen;
  for (const auto d : dmrs_symbols) {
    if (d >= n_symbols) throw ConfigError("DMRS symbol index out of range", "grid.dmrs_symbols");
    if (d == agc_symbol || d == guard_symbol)
      throw ConfigError("DMRS symbol collides with AGC or guard", "grid.dmrs_symbols");
    if (!seen.insert(d).second) throw ConfigError("duplicate DMRS symbol", "grid.dmrs_symbols");
  }
  if (!std::is_sorted(dmrs_symbols.begin(), dmrs_symbols.end()))
    throw ConfigError("DMRS symbols must be ascending", "grid.dmrs_symbols");
  if (n_symbols < 3 + dmrs_symbols.size()) throw ConfigError("no data symbols left", "grid.n_symbols");
  if (agc_source_symbol() >= n_symbols || agc_source_symbol() == guard_symbol)
    throw ConfigError("AGC symbol has no following symbol to duplicate", "grid.agc_symbol");
}

std::vector<std::size_t> GridConfig::data_symbols() const {
  std::vector<std::size_t> out;
  out.reserve(n_data_symbols());
  for (std::size_t l = 0; l < n_symbols; ++l)
    if (l != agc_symbol && l != guard_symbol && !is_dmrs(l)) out.push_back(l);
  return out;
}

std::size_t GridConfig::agc_source_symbol() const { return agc_symbol + 1; }

bool GridConfig::is_dmrs(std::size_t symbol) const {
  return std::find(dmrs_symbols.begin(), dmrs_symbols.end(), symbol) != dmrs_symbols.end();
}

void Allocation::validate(const GridConfig& cfg) const {
  if (n_subchannels == 0) throw RangeError("allocation must span at least one sub-channel");
  if (start_subchannel + n_subchannels > cfg.n_subchannels)
    throw RangeError("allocation [" + std::to_string(start_subchannel) + ", " +
                     std::to_string(start_subchannel + n_subchannels) + ") exceeds " +
                     std::to_string(cfg.n_subchannels) + " sub-channels");
}

double SubframeGrid::energy() const {
  double e = 0.0;
  for (const auto& c : cells_) e += std::norm(c);
  return e;
}

std::size_t pssch_re_count(const GridConfig& cfg, const Allocation& alloc) {
  alloc.validate(cfg);
  return cfg.n_data_symbols() * (alloc.n_subcarriers(cfg) - cfg.pscch_width_sc);
}

std::size_t pscch_re_count(const GridConfig& cfg) { return cfg.n_data_symbols() * cfg.pscch_width_sc; }

std::size_t dmrs_re_count(const GridConfig& cfg, const Allocation& alloc) {
  return cfg.dmrs_symbols.size() * alloc.n_subcarriers(cfg);
}

namespace {

void check_dims(const GridConfig& cfg, const SubframeGrid& grid) {
  if (grid.n_symbols() != cfg.n_symbols || grid.n_subcarriers() != cfg.total_subcarriers())
    throw ContractError("grid dimensions do not match the configuration");
}

// Visits every region cell in mapping order. The callbacks receive (symbol, subcarrier).
template <typename PscchFn, typename PsschFn, typename DmrsFn>
void walk_regions(const GridConfig& cfg, const Allocation& alloc, PscchFn&& on_pscch, PsschFn&& on_pssch,
                  DmrsFn&& on_dmrs) {
  const std::size_t k0 = alloc.first_subcarrier(cfg);
  const std::size_t k_end = k0 + alloc.n_subcarriers(cfg);
  const std::size_t k_pscch_end = k0 + cfg.pscch_width_sc;
  const auto data = cfg.data_symbols();
  for (const auto l : data)
    for (std::size_t k = k0; k < k_pscch_end; ++k) on_pscch(l, k);
  for (const auto l : data)
    for (std::size_t k = k_pscch_end; k < k_end; ++k) on_pssch(l, k);
  for (const auto l : cfg.dmrs_symbols)
    for (std::size_t k = k0; k < k_end; ++k) on_dmrs(l, k);
}

}  // namespace

SubframeGrid map_subframe(const GridConfig& cfg, const Allocation& alloc, std::span<const cplx> pscch_syms,
                          std::span<const cplx> pssch_syms, std::span<const cplx> dmrs_seq) {
  cfg.validate();
  alloc.validate(cfg);
  if (pscch_syms.size() != pscch_re_count(cfg))
    throw ContractError("map_subframe: PSCCH length " + std::to_string(pscch_syms.size()) + ", expected " +
                        std::to_string(pscch_re_count(cfg)));
  if (pssch_syms.size() != pssch_re_count(cfg, alloc))
    throw ContractError("map_subframe: PSSCH length " + std::to_string(pssch_syms.size()) + ", expected " +
                        std::to_string(pssch_re_count(cfg, alloc)));
  if (dmrs_seq.size() != dmrs_re_count(cfg, alloc))
    throw ContractError("map_subframe: DMRS length " + std::to_string(dmrs_seq.size()) + ", expected " +
                        std::to_string(dmrs_re_count(cfg, alloc)));

  SubframeGrid grid(cfg);
  std::size_t ic = 0;
  std::size_t id = 0;
  std::size_t ir = 0;
  walk_regions(
      cfg, alloc, [&](std::size_t l, std::size_t k) { grid.at(l, k) = pscch_syms[ic++]; },
      [&](std::size_t l, std::size_t k) { grid.at(l, k) = pssch_syms[id++]; },
      [&](std::size_t l, std::size_t k) { grid.at(l, k) = dmrs_seq[ir++]; });

  const std::size_t k0 = alloc.first_subcarrier(cfg);
  const std::size_t k_end = k0 + alloc.n_subcarriers(cfg);
  const std::size_t src = cfg.agc_source_symbol();
  for (std::size_t k = k0; k < k_end; ++k) grid.at(cfg.agc_symbol, k) = grid.at(src, k);
  return grid;
}

ExtractedSubframe extract_subframe(const GridConfig& cfg, const Allocation& alloc, const SubframeGrid& grid) {
  cfg.validate();
  alloc.validate(cfg);
  check_dims(cfg, grid);
  ExtractedSubframe out;
  out.pscch.reserve(pscch_re_count(cfg));
  out.pssch.reserve(pssch_re_count(cfg, alloc));
  out.dmrs.reserve(dmrs_re_count(cfg, alloc));
  walk_regions(
      cfg, alloc, [&](std::size_t l, std::size_t k) { out.pscch.push_back(grid.at(l, k)); },
      [&](std::size_t l, std::size_t k) { out.pssch.push_back(grid.at(l, k)); },
      [&](std::size_t l, std::size_t k) { out.dmrs.push_back(grid.at(l, k)); });
  return out;
}

std::vector<cplx> extract_pscch(const GridConfig& cfg, std::size_t subchannel, const SubframeGrid& grid) {
  check_dims(cfg, grid);
  const Allocation one{subchannel, 1};
  one.validate(cfg);
  std::vector<cplx> out;
  out.reserve(pscch_re_count(cfg));
  const std::size_t k0 = one.first_subcarrier(cfg);
  for (const auto l : cfg.data_symbols())
    for (std::size_t k = k0; k < k0 + cfg.pscch_width_sc; ++k) out.push_back(grid.at(l, k));
  return out;
}

std::vector<cplx> dmrs_sequence(int vehicle_id, std::int64_t subframe_idx, std::size_t length) {
  if (length == 0) throw ContractError("dmrs_sequence: zero length");
  coding::Lfsr31 lfsr(coding::sequence_seed(coding::SequenceKind::dmrs, vehicle_id, subframe_idx));
  Bits bits(2 * length);
  for (auto& b : bits) b = lfsr.next();
  return coding::modulate(bits, coding::Modulation::qpsk);
}

std::vector<cplx> dmrs_full_width(const GridConfig& cfg, int vehicle_id, std::int64_t subframe_idx) {
  return dmrs_sequence(vehicle_id, subframe_idx, cfg.dmrs_symbols.size() * cfg.total_subcarriers());
}

std::vector<cplx> dmrs_slice(const GridConfig& cfg, const Allocation& alloc, std::span<const cplx> full_width) {
  alloc.validate(cfg);
  const std::size_t width = cfg.total_subcarriers();
  if (full_width.size() != cfg.dmrs_symbols.size() * width) throw ContractError("dmrs_slice: not a full-width sequence");
  const std::size_t k0 = alloc.first_subcarrier(cfg);
  const std::size_t n = alloc.n_subcarriers(cfg);
  std::vector<cplx> out;
  out.reserve(cfg.dmrs_symbols.size() * n);
  for (std::size_t d = 0; d < cfg.dmrs_symbols.size(); ++d) {
    const auto row = full_width.subspan(d * width + k0, n);
    out.insert(out.end(), row.begin(), row.end());
  }
  return out;
}

std::vector<cplx> dmrs_for_allocation(const GridConfig& cfg, const Allocation& alloc, int vehicle_id,
                                      std::int64_t subframe_idx) {
  return dmrs_slice(cfg, alloc, dmrs_full_width(cfg, vehicle_id, subframe_idx));
}

}  // namespace slsim::grid
