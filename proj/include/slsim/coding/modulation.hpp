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

// Gray-mapped QPSK / 16QAM / 64QAM with unit average power and max-log
// soft demapping. Bits alternate between I and Q; the first bit of each
// dimension carries the sign (0 -> positive).

#include <span>
#include <vector>

#include "slsim/coding/mcs.hpp"
#include "slsim/types.hpp"

namespace slsim::coding {

std::vector<cplx> modulate(std::span<const std::uint8_t> bits, Modulation mod);

/// Max-log LLRs with a common complex noise variance.
Llrs soft_demod(std::span<const cplx> symbols, Modulation mod, double noise_var);

/// Max-log LLRs with one noise variance per symbol.
Llrs soft_demod(std::span<const cplx> symbols, Modulation mod, std::span<const double> noise_vars);

/// Hard decision helper: bit = llr < 0.
Bits hard_decision(std::span<const double> llrs);

}  // namespace slsim::coding
