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

#include "slsim/coding/mcs.hpp"

#include <cmath>
#include <string>

#include "slsim/error.hpp"

namespace slsim::coding {

const char* to_string(Modulation m) {
  switch (m) {
    case Modulation::qpsk:
      return "QPSK";
    case Modulation::qam16:
      return "16QAM";
    case Modulation::qam64:
      return "64QAM";
  }
  return "?";
}

McsEntry mcs_lookup(int index) {
  if (index < 0 || index > kMaxMcs) throw RangeError("MCS index " + std::to_string(index) + " outside 0..28");
  if (index <= 9) return {index, Modulation::qpsk, 0.10 + 0.05 * index};
  if (index <= 16) return {index, Modulation::qam16, 0.33 + 0.045 * (index - 10)};
  return {index, Modulation::qam64, 0.43 + 0.0455 * (index - 17)};
}

std::size_t tbs_for(const McsEntry& mcs, std::size_t n_re) {
  if (n_re == 0) throw ContractError("tbs_for: zero resource elements");
  const double capacity = static_cast<double>(n_re * mcs.bits_per_symbol()) * mcs.code_rate - 24.0;
  // the epsilon keeps exact multiples of 8 from rounding down
  const double bytes = std::floor(capacity / 8.0 + 1e-9);
  if (bytes < 1.0)
    throw AllocationTooSmall("allocation of " + std::to_string(n_re) + " RE too small for MCS " +
                             std::to_string(mcs.index));
  return static_cast<std::size_t>(bytes) * 8;
}

}  // namespace slsim::coding
