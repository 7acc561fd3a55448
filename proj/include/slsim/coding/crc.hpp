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

/// data24: CRC-24 0x1864CFB. control16: CRC-16 0x1021. Both zero-initialised, MSB first.
enum class CrcKind { data24, control16 };

std::size_t crc_length(CrcKind kind);

/// Remainder of `bits` as an integer, highest-order bit first.
std::uint32_t crc_remainder(std::span<const std::uint8_t> bits, CrcKind kind);

/// Returns `bits` followed by its CRC.
Bits crc_attach(std::span<const std::uint8_t> bits, CrcKind kind);

/// True if the trailing CRC of `bits` matches its payload.
bool crc_check(std::span<const std::uint8_t> bits, CrcKind kind);

}  // namespace slsim::coding
