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

#include "slsim/coding/scrambler.hpp"

#include "slsim/error.hpp"

namespace slsim::coding {

Lfsr31::Lfsr31(std::uint32_t seed) : state_(seed & 0x7FFFFFFFu) {
  if (state_ == 0) throw ContractError("LFSR seed must be non-zero in its low 31 bits");
}

Bits scramble(std::span<const std::uint8_t> bits, std::uint32_t seed) {
  Lfsr31 lfsr(seed);
  Bits out(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) out[i] = static_cast<std::uint8_t>((bits[i] ^ lfsr.next()) & 1u);
  return out;
}

void descramble_llrs(std::span<double> llrs, std::uint32_t seed) {
  Lfsr31 lfsr(seed);
  for (auto& l : llrs)
    if (lfsr.next()) l = -l;
}

std::uint32_t sequence_seed(SequenceKind kind, int vehicle_id, std::int64_t subframe_idx) {
  // sidelink subframe numbering wraps every 10240 subframes
  std::int64_t sf = subframe_idx % 10240;
  if (sf < 0) sf += 10240;
  std::uint64_t x = (static_cast<std::uint64_t>(kind) << 56) ^
                    (static_cast<std::uint64_t>(static_cast<std::uint32_t>(vehicle_id)) << 16) ^
                    static_cast<std::uint64_t>(sf);
  // splitmix64 finaliser
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  x ^= x >> 31;
  const auto seed = static_cast<std::uint32_t>(x & 0x7FFFFFFFu);
  return seed == 0 ? 1u : seed;
}

}  // namespace slsim::coding
