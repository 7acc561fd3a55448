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

// Rate-1/3, constraint-length-7 convolutional code (generators 133/171/165
// octal), zero-tailed, with a soft-input Viterbi decoder.

#include <cstddef>
#include <span>

#include "slsim/types.hpp"

namespace slsim::coding {

inline constexpr int kConstraintLength = 7;
inline constexpr std::size_t kTailBits = kConstraintLength - 1;
inline constexpr std::size_t kCodeRateInverse = 3;

/// Output length for `n_info` information bits, tail included.
constexpr std::size_t conv_coded_length(std::size_t n_info) { return kCodeRateInverse * (n_info + kTailBits); }

/// Appends the zero tail and encodes. Output is interleaved per input bit:
/// (g0, g1, g2), (g0, g1, g2), ...
Bits conv_encode(std::span<const std::uint8_t> bits);

/// Maximum-likelihood decode of `llrs` (positive favours 0). The trellis starts
/// and ends in the zero state; tail bits are stripped from the result.
Bits viterbi_decode(std::span<const double> llrs);

}  // namespace slsim::coding
