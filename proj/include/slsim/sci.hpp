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
#include <optional>
#include <span>

#include "slsim/types.hpp"

namespace slsim::phy {

/// Sidelink control information. Packed MSB first as
/// mcs(5) | n_subchannels(4) | rri_code(4) | priority(3) | reserved(16).
struct Sci {
  static constexpr std::size_t kBits = 32;

  std::uint8_t mcs = 0;
  std::uint8_t n_subchannels = 1;
  /// 0 none, 1 -> 1 ms, 2 -> 10 ms, 3 -> 20 ms, 4 -> 50 ms, 5 -> 100 ms.
  std::uint8_t rri_code = 0;
  std::uint8_t priority = 0;

  /// Throws ContractError if a field does not fit or is out of range.
  void validate() const;

  Bits pack() const;

  /// Empty if the bits decode to an invalid field combination.
  static std::optional<Sci> unpack(std::span<const std::uint8_t> bits);

  /// Reservation interval in milliseconds, 0 when none.
  int rri_ms() const;

  /// Code for a reservation interval in ms; throws ContractError for unsupported values.
  static std::uint8_t rri_code_for(int period_ms);

  friend bool operator==(const Sci&, const Sci&) = default;
};

}  // namespace slsim::phy
