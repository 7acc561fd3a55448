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

// Sidelink subframe geometry: symbol roles, sub-channel layout and the
// PSCCH / PSSCH / DMRS resource element regions inside one allocation.

#include <cstddef>
#include <span>
#include <vector>

#include "slsim/types.hpp"

namespace slsim::grid {

struct GridConfig {
  std::size_t n_symbols = 14;
  std::size_t sc_per_subchannel = 48;
  std::size_t n_subchannels = 6;
  std::vector<std::size_t> dmrs_symbols{2, 5, 8, 11};
  std::size_t agc_symbol = 0;
  std::size_t guard_symbol = 13;
  std::size_t pscch_width_sc = 12;

  /// Throws ConfigError when symbol roles overlap or indices are out of range.
  void validate() const;

  std::size_t total_subcarriers() const { return sc_per_subchannel * n_subchannels; }
  std::size_t n_data_symbols() const { return n_symbols - 2 - dmrs_symbols.size(); }

  /// Data-carrying symbols in ascending order (neither AGC, guard nor DMRS).
  std::vector<std::size_t> data_symbols() const;

  /// Symbol whose row is duplicated into the AGC symbol.
  std::size_t agc_source_symbol() const;

  bool is_dmrs(std::size_t symbol) const;
};

/// Consecutive run of sub-channels.
struct Allocation {
  std::size_t start_subchannel = 0;
  std::size_t n_subchannels = 1;

  /// Throws RangeError if the allocation does not fit the grid.
  void validate(const GridConfig& cfg) const;

  std::size_t first_subcarrier(const GridConfig& cfg) const { return start_subchannel * cfg.sc_per_subchannel; }
  std::size_t n_subcarriers(const GridConfig& cfg) const { return n_subchannels * cfg.sc_per_subchannel; }

  bool overlaps(const Allocation& other) const {
    return start_subchannel < other.start_subchannel + other.n_subchannels &&
           other.start_subchannel < start_subchannel + n_subchannels;
  }

  friend bool operator==(const Allocation&, const Allocation&) = default;
};

/// Complex amplitude per (symbol, subcarrier), row-major by symbol.
class SubframeGrid {
 public:
  SubframeGrid() = default;
  SubframeGrid(std::size_t n_symbols, std::size_t n_subcarriers)
      : n_symbols_(n_symbols), n_subcarriers_(n_subcarriers), cells_(n_symbols * n_subcarriers) {}
  explicit SubframeGrid(const GridConfig& cfg) : SubframeGrid(cfg.n_symbols, cfg.total_subcarriers()) {}

  std::size_t n_symbols() const { return n_symbols_; }
  std::size_t n_subcarriers() const { return n_subcarriers_; }

  cplx& at(std::size_t symbol, std::size_t subcarrier) { return cells_[symbol * n_subcarriers_ + subcarrier]; }
  const cplx& at(std::size_t symbol, std::size_t subcarrier) const {
    return cells_[symbol * n_subcarriers_ + subcarrier];
  }

  std::span<cplx> row(std::size_t symbol) { return {cells_.data() + symbol * n_subcarriers_, n_subcarriers_}; }
  std::span<const cplx> row(std::size_t symbol) const {
    return {cells_.data() + symbol * n_subcarriers_, n_subcarriers_};
  }

  std::span<cplx> cells() { return cells_; }
  std::span<const cplx> cells() const { return cells_; }

  /// Sum of |cell|^2.
  double energy() const;

 private:
  std::size_t n_symbols_ = 0;
  std::size_t n_subcarriers_ = 0;
  std::vector<cplx> cells_;
};

/// Data resource elements of the PSSCH inside `alloc`.
std::size_t pssch_re_count(const GridConfig& cfg, const Allocation& alloc);

/// Control resource elements of one PSCCH.
std::size_t pscch_re_count(const GridConfig& cfg);

/// DMRS cells covering `alloc`.
std::size_t dmrs_re_count(const GridConfig& cfg, const Allocation& alloc);

/// Places PSCCH, PSSCH and DMRS symbols on a fresh grid. Each region is filled
/// frequency-first then time; the AGC row copies its source row and the guard
/// row stays zero.
SubframeGrid map_subframe(const GridConfig& cfg, const Allocation& alloc, std::span<const cplx> pscch_syms,
                          std::span<const cplx> pssch_syms, std::span<const cplx> dmrs_seq);

struct ExtractedSubframe {
  std::vector<cplx> pscch;
  std::vector<cplx> pssch;
  std::vector<cplx> dmrs;
};

/// Inverse of map_subframe.
ExtractedSubframe extract_subframe(const GridConfig& cfg, const Allocation& alloc, const SubframeGrid& grid);

/// PSCCH cells of the sub-channel starting at `subchannel`, in mapping order.
std::vector<cplx> extract_pscch(const GridConfig& cfg, std::size_t subchannel, const SubframeGrid& grid);

/// Unit-magnitude QPSK reference sequence drawn from the scrambling LFSR.
std::vector<cplx> dmrs_sequence(int vehicle_id, std::int64_t subframe_idx, std::size_t length);

/// Slice of the vehicle's full-width DMRS sequence that falls on `alloc`,
/// ordered DMRS symbol first then subcarrier.
std::vector<cplx> dmrs_for_allocation(const GridConfig& cfg, const Allocation& alloc, int vehicle_id,
                                      std::int64_t subframe_idx);

/// Full-width DMRS sequence of a vehicle in a subframe.
std::vector<cplx> dmrs_full_width(const GridConfig& cfg, int vehicle_id, std::int64_t subframe_idx);

/// The part of a full-width sequence that falls on `alloc`.
std::vector<cplx> dmrs_slice(const GridConfig& cfg, const Allocation& alloc, std::span<const cplx> full_width);

}  // namespace slsim::grid
