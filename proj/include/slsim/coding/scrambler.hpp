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

#include <cstdint>
#include <span>

#include "slsim/types.hpp"

namespace slsim::coding {

/// Fibonacci LFSR for x^31 + x^3 + 1. Output is bit 0 of the state; one
/// shift per output bit.
class Lfsr31 {
 public:
  /// Throws ContractError for a zero seed (the all-zero state never leaves zero).
  explicit Lfsr31(std::uint32_t seed);

  std::uint8_t next() {
    const std::uint32_t out = state_ & 1u;
    const std::uint32_t fb = (state_ ^ (state_ >> 3)) & 1u;
    state_ = (state_ >> 1) | (fb << 30);
    return static_cast<std::uint8_t>(out);
  }

  std::uint32_t state() const { return state_; }

 private:
  std::uint32_t state_;
};

/// XOR with the LFSR stream. Self-inverse.
Bits scramble(std::span<const std::uint8_t> bits, std::uint32_t seed);

/// Applies the same stream to soft values (sign flip where the stream is 1).
void descramble_llrs(std::span<double> llrs, std::uint32_t seed);

enum class SequenceKind : std::uint32_t { pscch = 1, pssch = 2, dmrs = 3 };

/// Non-zero 31-bit seed for a (sequence kind, vehicle, subframe) triple.
std::uint32_t sequence_seed(SequenceKind kind, int vehicle_id, std::int64_t subframe_idx);

}  // namespace slsim::coding
