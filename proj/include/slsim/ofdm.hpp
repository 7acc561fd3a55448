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

#include <cstddef>
#include <memory>
#include <span>

#include "slsim/grid.hpp"
#include "slsim/types.hpp"

namespace slsim::phy {

struct OfdmConfig {
  std::size_t fft_size = 512;
  std::size_t cp_len = 64;
  double subcarrier_spacing_hz = 15e3;

  double sample_rate() const { return static_cast<double>(fft_size) * subcarrier_spacing_hz; }
  std::size_t symbol_len() const { return fft_size + cp_len; }
  std::size_t subframe_len(std::size_t n_symbols) const { return n_symbols * symbol_len(); }

  /// Throws ConfigError if `n_active` subcarriers (plus the unused DC bin) do
  /// not fit the FFT or the CP is not shorter than the FFT.
  void validate(std::size_t n_active) const;
};

/// Unitary OFDM modulator/demodulator with a flat cyclic prefix. Active
/// subcarriers sit symmetrically around an unused DC bin; grid column 0 is
/// the lowest frequency.
///
/// Holds FFT plans and scratch buffers: one instance per thread.
class OfdmModem {
 public:
  OfdmModem(const OfdmConfig& cfg, std::size_t n_active);
  ~OfdmModem();
  OfdmModem(const OfdmModem&) = delete;
  OfdmModem& operator=(const OfdmModem&) = delete;
  OfdmModem(OfdmModem&&) noexcept;
  OfdmModem& operator=(OfdmModem&&) noexcept;

  const OfdmConfig& config() const { return cfg_; }
  std::size_t n_active() const { return n_active_; }

  /// FFT bin carrying grid column `k`.
  std::size_t bin_of(std::size_t k) const;

  Samples modulate(const grid::SubframeGrid& grid);

  /// Removes each CP and transforms; sample count must be n_symbols * (fft + cp).
  grid::SubframeGrid demodulate(std::span<const cplx> samples, std::size_t n_symbols);

 private:
  struct Plans;
  OfdmConfig cfg_;
  std::size_t n_active_ = 0;
  std::unique_ptr<Plans> plans_;
};

}  // namespace slsim::phy
