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

#include "slsim/coding/modulation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "slsim/error.hpp"

namespace slsim::coding {

namespace {

// Floor on the noise variance handed to the demapper, so noiseless links
// produce large but finite LLRs.
constexpr double kMinNoiseVar = 1e-6;

struct PamTable {
  std::size_t bits = 1;                  // bits per dimension
  std::array<double, 8> level{};         // amplitude indexed by the dimension's bit pattern
};

// Bit pattern of a dimension is (sign, m1, m2) read MSB first.
PamTable pam_for(Modulation mod) {
  PamTable t;
  switch (mod) {
    case Modulation::qpsk: {
      const double s = 1.0 / std::sqrt(2.0);
      t.bits = 1;
      t.level = {s, -s};
      break;
    }
    case Modulation::qam16: {
      const double s = 1.0 / std::sqrt(10.0);
      t.bits = 2;
      t.level = {1 * s, 3 * s, -1 * s, -3 * s};
      break;
    }
    case Modulation::qam64: {
      const double s = 1.0 / std::sqrt(42.0);
      t.bits = 3;
      t.level = {3 * s, 1 * s, 5 * s, 7 * s, -3 * s, -1 * s, -5 * s, -7 * s};
      break;
    }
  }
  return t;
}

}  // namespace

std::vector<cplx> modulate(std::span<const std::uint8_t> bits, Modulation mod) {
  const std::size_t bps = bits_per_symbol(mod);
  if (bits.size() % bps != 0) throw ContractError("modulate: bit count not a multiple of bits/symbol");
  const PamTable pam = pam_for(mod);
  std::vector<cplx> out(bits.size() / bps);
  for (std::size_t s = 0; s < out.size(); ++s) {
    const std::uint8_t* b = bits.data() + s * bps;
    unsigned pi = 0;
    unsigned pq = 0;
    for (std::size_t j = 0; j < pam.bits; ++j) {
      pi = (pi << 1) | (b[2 * j] & 1u);
      pq = (pq << 1) | (b[2 * j + 1] & 1u);
    }
    out[s] = {pam.level[pi], pam.level[pq]};
  }
  return out;
}

Llrs soft_demod(std::span<const cplx> symbols, Modulation mod, double noise_var) {
  const std::vector<double> vars(symbols.size(), noise_var);
  return soft_demod(symbols, mod, vars);
}

Llrs soft_demod(std::span<const cplx> symbols, Modulation mod, std::span<const double> noise_vars) {
  if (noise_vars.size() != symbols.size()) throw ContractError("soft_demod: one noise variance per symbol");
  const std::size_t bps = bits_per_symbol(mod);
  const PamTable pam = pam_for(mod);
  const std::size_t n_levels = std::size_t{1} << pam.bits;
  constexpr double kInf = std::numeric_limits<double>::infinity();

  Llrs llrs(symbols.size() * bps);
  std::array<double, 8> dist{};
  for (std::size_t s = 0; s < symbols.size(); ++s) {
    const double inv_var = 1.0 / std::max(noise_vars[s], kMinNoiseVar);
    for (int dim = 0; dim < 2; ++dim) {
      const double y = dim == 0 ? symbols[s].real() : symbols[s].imag();
      for (std::size_t p = 0; p < n_levels; ++p) {
        const double d = y - pam.level[p];
        dist[p] = d * d;
      }
      for (std::size_t j = 0; j < pam.bits; ++j) {
        const unsigned mask = 1u << (pam.bits - 1 - j);
        double d0 = kInf;
        double d1 = kInf;
        for (std::size_t p = 0; p < n_levels; ++p) {
          if (p & mask)
            d1 = std::min(d1, dist[p]);
          else
            d0 = std::min(d0, dist[p]);
        }
        llrs[s * bps + 2 * j + dim] = (d1 - d0) * inv_var;
      }
    }
  }
  return llrs;
}

Bits hard_decision(std::span<const double> llrs) {
  Bits out(llrs.size());
  std::transform(llrs.begin(), llrs.end(), out.begin(), [](double l) { return static_cast<std::uint8_t>(l < 0.0); });
  return out;
}

}  // namespace slsim::coding
