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

#include "slsim/coding/conv_code.hpp"

#include <algorithm>
#include <array>
#include <bit>

#include "slsim/error.hpp"

namespace slsim::coding {

namespace {

constexpr std::array<unsigned, 3> kGenerators{0133, 0171, 0165};
constexpr unsigned kStates = 1u << (kConstraintLength - 1);

// Output triple for each 7-bit register value, g0 in bit 2.
constexpr std::array<std::uint8_t, 2 * kStates> make_output_table() {
  std::array<std::uint8_t, 2 * kStates> table{};
  for (unsigned reg = 0; reg < 2 * kStates; ++reg) {
    unsigned out = 0;
    for (const unsigned g : kGenerators) out = (out << 1) | (std::popcount(reg & g) & 1u);
    table[reg] = static_cast<std::uint8_t>(out);
  }
  return table;
}

constexpr auto kOutput = make_output_table();

}  // namespace

Bits conv_encode(std::span<const std::uint8_t> bits) {
  Bits out;
  out.reserve(conv_coded_length(bits.size()));
  unsigned state = 0;  // bit 5 holds the most recent input
  auto push = [&](unsigned u) {
    const unsigned reg = (u << 6) | state;
    const unsigned o = kOutput[reg];
    out.push_back(static_cast<std::uint8_t>((o >> 2) & 1u));
    out.push_back(static_cast<std::uint8_t>((o >> 1) & 1u));
    out.push_back(static_cast<std::uint8_t>(o & 1u));
    state = reg >> 1;
  };
  for (const auto b : bits) push(b & 1u);
  for (std::size_t i = 0; i < kTailBits; ++i) push(0);
  return out;
}

Bits viterbi_decode(std::span<const double> llrs) {
  if (llrs.size() % kCodeRateInverse != 0) throw ContractError("viterbi_decode: LLR count not a multiple of 3");
  const std::size_t n_steps = llrs.size() / kCodeRateInverse;
  if (n_steps < kTailBits) throw ContractError("viterbi_decode: block shorter than the code tail");

  // Every generator taps both the newest and the oldest register bit, so the
  // two branches into a butterfly carry complementary outputs and one branch
  // metric per butterfly suffices.
  static_assert(std::all_of(kGenerators.begin(), kGenerators.end(),
                            [](unsigned g) { return (g & 1u) && (g & (1u << (kConstraintLength - 1))); }));
  constexpr unsigned kHalf = kStates / 2;

  constexpr float kNegInf = -1e30f;
  alignas(32) std::array<float, kStates> metric;
  alignas(32) std::array<float, kStates> next;
  alignas(32) std::array<float, kHalf> branch;
  metric.fill(kNegInf);
  metric[0] = 0.0f;

  // decisions[t * 64 + n] = 1 when state n was reached from its odd predecessor
  std::vector<std::uint8_t> decisions(n_steps * kStates);
  std::array<float, 8> bm;

  for (std::size_t t = 0; t < n_steps; ++t) {
    const float l0 = static_cast<float>(llrs[3 * t]);
    const float l1 = static_cast<float>(llrs[3 * t + 1]);
    const float l2 = static_cast<float>(llrs[3 * t + 2]);
    // correlation metric: +llr when the branch bit is 0, -llr when it is 1
    for (unsigned o = 0; o < 8; ++o)
      bm[o] = ((o & 4u) ? -l0 : l0) + ((o & 2u) ? -l1 : l1) + ((o & 1u) ? -l2 : l2);
    for (unsigned i = 0; i < kHalf; ++i) branch[i] = bm[kOutput[2 * i]];

    std::uint8_t* dec = decisions.data() + t * kStates;
    for (unsigned i = 0; i < kHalf; ++i) {
      const float a = metric[2 * i];
      const float b = metric[2 * i + 1];
      const float x = branch[i];
      const float m00 = a + x;
      const float m01 = b - x;
      const float m10 = a - x;
      const float m11 = b + x;
      next[i] = m01 > m00 ? m01 : m00;
      next[i + kHalf] = m11 > m10 ? m11 : m10;
      dec[i] = m01 > m00;
      dec[i + kHalf] = m11 > m10;
    }
    metric = next;
    if ((t & 31u) == 31u) {
      const float top = *std::max_element(metric.begin(), metric.end());
      for (auto& m : metric) m -= top;
    }
  }

  Bits decoded(n_steps);
  unsigned state = 0;
  for (std::size_t t = n_steps; t-- > 0;) {
    const unsigned d = decisions[t * kStates + state];
    decoded[t] = static_cast<std::uint8_t>(state >> 5);
    state = ((state & 31u) << 1) | d;
  }
  decoded.resize(n_steps - kTailBits);
  return decoded;
}

}  // namespace slsim::coding
