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

#include "slsim/coding/rate_match.hpp"

#include "slsim/error.hpp"

namespace slsim::coding {

namespace {

// Source position feeding output position i.
inline std::size_t source_index(std::size_t i, std::size_t source_len, std::size_t target_len) {
  if (target_len >= source_len) return i % source_len;
  return static_cast<std::size_t>((static_cast<unsigned __int128>(i) * source_len) / target_len);
}

}  // namespace

Bits rate_match(std::span<const std::uint8_t> coded, std::size_t target_len) {
  if (coded.empty()) throw ContractError("rate_match: empty input");
  Bits out(target_len);
  for (std::size_t i = 0; i < target_len; ++i) out[i] = coded[source_index(i, coded.size(), target_len)];
  return out;
}

Llrs rate_dematch(std::span<const double> llrs, std::size_t source_len) {
  if (source_len == 0) throw ContractError("rate_dematch: empty source");
  Llrs out(source_len, 0.0);
  for (std::size_t i = 0; i < llrs.size(); ++i) out[source_index(i, source_len, llrs.size())] += llrs[i];
  return out;
}

std::vector<std::size_t> interleaver_pattern(std::size_t n) {
  static constexpr std::size_t kColumns = 32;
  static constexpr std::size_t kPerm[kColumns] = {0, 16, 8, 24, 4, 20, 12, 28, 2, 18, 10, 26, 6, 22, 14, 30,
                                                  1, 17, 9, 25, 5, 21, 13, 29, 3, 19, 11, 27, 7, 23, 15, 31};
  const std::size_t rows = (n + kColumns - 1) / kColumns;
  std::vector<std::size_t> pattern;
  pattern.reserve(n);
  for (const std::size_t c : kPerm)
    for (std::size_t r = 0; r < rows; ++r) {
      const std::size_t i = r * kColumns + c;
      if (i < n) pattern.push_back(i);
    }
  return pattern;
}

Bits interleave(std::span<const std::uint8_t> bits) {
  const auto pattern = interleaver_pattern(bits.size());
  Bits out(bits.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = bits[pattern[j]];
  return out;
}

Llrs deinterleave(std::span<const double> llrs) {
  const auto pattern = interleaver_pattern(llrs.size());
  Llrs out(llrs.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[pattern[j]] = llrs[j];
  return out;
}

}  // namespace slsim::coding
