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
#include <span>
#include <vector>

#include "slsim/types.hpp"

namespace slsim::coding {

/// Stretches or shrinks `coded` to `target_len` bits. Longer targets read the
/// source as a circular buffer; shorter targets keep positions
/// floor(i * source / target), dropping the rest evenly.
Bits rate_match(std::span<const std::uint8_t> coded, std::size_t target_len);

/// Receiver side: sums LLRs of repeated positions and leaves punctured
/// positions at zero. Returns `source_len` LLRs.
Llrs rate_dematch(std::span<const double> llrs, std::size_t source_len);

/// Row-column bit interleaver: written row-wise into 32 columns, columns
/// permuted in bit-reversed order, read column-wise. Entry j is the input
/// position sent to output position j.
std::vector<std::size_t> interleaver_pattern(std::size_t n);

Bits interleave(std::span<const std::uint8_t> bits);
Llrs deinterleave(std::span<const double> llrs);

}  // namespace slsim::coding
