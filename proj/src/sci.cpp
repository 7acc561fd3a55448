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

#include "slsim/sci.hpp"

#include <array>
#include <string>

#include "slsim/error.hpp"

namespace slsim::phy {

namespace {

constexpr std::array<int, 6> kRriMs{0, 1, 10, 20, 50, 100};

void push_field(Bits& out, unsigned value, unsigned width) {
  for (unsigned i = width; i-- > 0;) out.push_back(static_cast<std::uint8_t>((value >> i) & 1u));
}

unsigned read_field(std::span<const std::uint8_t> bits, std::size_t& pos, unsigned width) {
  unsigned v = 0;
  for (unsigned i = 0; i < width; ++i) v = (v << 1) | (bits[pos++] & 1u);
  return v;
}

}  // namespace

void Sci::validate() const {
  if (mcs > 28) throw ContractError("SCI mcs " + std::to_string(mcs) + " above 28");
  if (n_subchannels < 1 || n_subchannels > 15) throw ContractError("SCI n_subchannels must be 1..15");
  if (rri_code > 5) throw ContractError("SCI rri_code above 5");
  if (priority > 7) throw ContractError("SCI priority above 7");
}

Bits Sci::pack() const {
  validate();
  Bits out;
  out.reserve(kBits);
  push_field(out, mcs, 5);
  push_field(out, n_subchannels, 4);
  push_field(out, rri_code, 4);
  push_field(out, priority, 3);
  push_field(out, 0, 16);
  return out;
}

std::optional<Sci> Sci::unpack(std::span<const std::uint8_t> bits) {
  if (bits.size() != kBits) return std::nullopt;
  std::size_t pos = 0;
  Sci s;
  s.mcs = static_cast<std::uint8_t>(read_field(bits, pos, 5));
  s.n_subchannels = static_cast<std::uint8_t>(read_field(bits, pos, 4));
  s.rri_code = static_cast<std::uint8_t>(read_field(bits, pos, 4));
  s.priority = static_cast<std::uint8_t>(read_field(bits, pos, 3));
  if (read_field(bits, pos, 16) != 0) return std::nullopt;
  if (s.mcs > 28 || s.n_subchannels < 1 || s.rri_code > 5) return std::nullopt;
  return s;
}

int Sci::rri_ms() const { return rri_code < kRriMs.size() ? kRriMs[rri_code] : 0; }

std::uint8_t Sci::rri_code_for(int period_ms) {
  for (std::size_t i = 0; i < kRriMs.size(); ++i)
    if (kRriMs[i] == period_ms) return static_cast<std::uint8_t>(i);
  throw ContractError("unsupported reservation interval " + std::to_string(period_ms) + " ms");
}

}  // namespace slsim::phy
