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
#include <stdexcept>

namespace slsim::coding {

enum class Modulation { qpsk = 2, qam16 = 4, qam64 = 6 };

constexpr std::size_t bits_per_symbol(Modulation m) { return static_cast<std::size_t>(m); }

const char* to_string(Modulation m);

inline constexpr int kMaxMcs = 28;

struct McsEntry {
  int index = 0;
  Modulation modulation = Modulation::qpsk;
  double code_rate = 0.1;

  std::size_t bits_per_symbol() const { return coding::bits_per_symbol(modulation); }
};

/// Simulator MCS table:
///   0..9   QPSK   R = 0.10 + 0.05 (i)
///   10..16 16QAM  R = 0.33 + 0.045 (i - 10)
///   17..28 64QAM  R = 0.43 + 0.0455 (i - 17)
McsEntry mcs_lookup(int index);

/// Thrown when an allocation cannot carry the 8-bit minimum transport block.
class AllocationTooSmall : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Transport block size in bits: the largest multiple of 8 not above
/// n_re * bits/symbol * R - 24.
std::size_t tbs_for(const McsEntry& mcs, std::size_t n_re);

}  // namespace slsim::coding
