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

#include "slsim/ofdm.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>
#include <string>

#include "slsim/error.hpp"

namespace slsim::phy {

namespace {

// The FFTW planner is not re-entrant; execution on distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

void OfdmConfig::validate(std::size_t n_active) const {
  if (fft_size < 2) throw ConfigError("must be at least 2", "ofdm.fft_size");
  if (n_active + 1 > fft_size)
    throw ConfigError(std::to_string(n_active) + " active subcarriers do not fit the FFT", "ofdm.fft_size");
  if (cp_len >= fft_size) throw ConfigError("cyclic prefix must be shorter than the FFT", "ofdm.cp_len");
  if (!(subcarrier_spacing_hz > 0)) throw ConfigError("must be positive", "ofdm.subcarrier_spacing_hz");
}

struct OfdmModem::Plans {
  fftw_complex* freq = nullptr;
  fftw_complex* time = nullptr;
  fftw_plan inverse = nullptr;
  fftw_plan forward = nullptr;

  explicit Plans(std::size_t n) {
    std::lock_guard lock(planner_mutex());
    freq = fftw_alloc_complex(n);
    time = fftw_alloc_complex(n);
    inverse = fftw_plan_dft_1d(static_cast<int>(n), freq, time, FFTW_BACKWARD, FFTW_ESTIMATE);
    forward = fftw_plan_dft_1d(static_cast<int>(n), time, freq, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(inverse);
    fftw_destroy_plan(forward);
    fftw_free(freq);
    fftw_free(time);
  }
};

OfdmModem::OfdmModem(const OfdmConfig& cfg, std::size_t n_active) : cfg_(cfg), n_active_(n_active) {
  cfg_.validate(n_active_);
  plans_ = std::make_unique<Plans>(cfg_.fft_size);
}

OfdmModem::~OfdmModem() = default;
OfdmModem::OfdmModem(OfdmModem&&) noexcept = default;
OfdmModem& OfdmModem::operator=(OfdmModem&&) noexcept = default;

std::size_t OfdmModem::bin_of(std::size_t k) const {
  const std::size_t half = n_active_ / 2;
  return k < half ? cfg_.fft_size - half + k : k - half + 1;
}

Samples OfdmModem::modulate(const grid::SubframeGrid& grid) {
  if (grid.n_subcarriers() != n_active_) throw ContractError("modulate: grid width differs from modem");
  const std::size_t n = cfg_.fft_size;
  const std::size_t cp = cfg_.cp_len;
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  Samples out(grid.n_symbols() * (n + cp));
  auto* freq = reinterpret_cast<cplx*>(plans_->freq);
  const auto* time = reinterpret_cast<const cplx*>(plans_->time);
  for (std::size_t l = 0; l < grid.n_symbols(); ++l) {
    std::memset(static_cast<void*>(freq), 0, n * sizeof(cplx));
    const auto row = grid.row(l);
    for (std::size_t k = 0; k < n_active_; ++k) freq[bin_of(k)] = row[k];
    fftw_execute(plans_->inverse);
    cplx* sym = out.data() + l * (n + cp);
    for (std::size_t i = 0; i < cp; ++i) sym[i] = time[n - cp + i] * scale;
    for (std::size_t i = 0; i < n; ++i) sym[cp + i] = time[i] * scale;
  }
  return out;
}

grid::SubframeGrid OfdmModem::demodulate(std::span<const cplx> samples, std::size_t n_symbols) {
  const std::size_t n = cfg_.fft_size;
  const std::size_t cp = cfg_.cp_len;
  if (samples.size() != n_symbols * (n + cp))
    throw ContractError("demodulate: expected " + std::to_string(n_symbols * (n + cp)) + " samples, got " +
                        std::to_string(samples.size()));
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  grid::SubframeGrid grid(n_symbols, n_active_);
  auto* time = reinterpret_cast<cplx*>(plans_->time);
  const auto* freq = reinterpret_cast<const cplx*>(plans_->freq);
  for (std::size_t l = 0; l < n_symbols; ++l) {
    std::memcpy(static_cast<void*>(time), samples.data() + l * (n + cp) + cp, n * sizeof(cplx));
    fftw_execute(plans_->forward);
    auto row = grid.row(l);
    for (std::size_t k = 0; k < n_active_; ++k) row[k] = freq[bin_of(k)] * scale;
  }
  return grid;
}

}  // namespace slsim::phy
