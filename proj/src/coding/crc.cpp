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

#include "slsim/coding/crc.hpp"

#include "slsim/error.hpp"

namespace slsim::coding {

namespace {

struct CrcSpec {
  std::size_t length;
  std::uint32_t poly;  // without the leading x^length term
};

CrcSpec spec_for(CrcKind kind) {
  switch (kind) {
    case CrcKind::data24:
      return {24, 0x864CFBu};
    case CrcKind::control16:
      return {16, 0x1021u};
  }
  throw ContractError("unknown CRC kind");
}

}  // namespace

std::size_t crc_length(CrcKind kind) { return spec_for(kind).length; }

std::uint32_t crc_remainder(std::span<const std::uint8_t> bits, CrcKind kind) {
  const auto [len, poly] = spec_for(kind);
  const std::uint32_t mask = (len == 32) ? 0xFFFFFFFFu : ((1u << len) - 1u);
  std::uint32_t reg = 0;
  for (const auto b : bits) {
    const std::uint32_t top = ((reg >> (len - 1)) & 1u) ^ (b & 1u);
    reg = (reg << 1) & mask;
    if (top) reg ^= poly;
  }
  return reg;
}

Bits crc_attach(std::span<const std::uint8_t> bits, CrcKind kind) {
  const std::size_t len = crc_length(kind);
  const std::uint32_t crc = crc_remainder(bits, kind);
  Bits out(bits.begin(), bits.end());
  out.reserve(bits.size() + len);
  for (std::size_t i = 0; i < len; ++i) out.push_back(static_cast<std::uint8_t>((crc >> (len - 1 - i)) & 1u));
  return out;
}

bool crc_check(std::span<const std::uint8_t> bits, CrcKind kind) {
  if (bits.size() < crc_length(kind)) return false;
  return crc_remainder(bits, kind) == 0;
}

}  // namespace slsim::coding
