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

#include <complex>
#include <cstdint>
#include <vector>

namespace slsim {

using cplx = std::complex<double>;

/// One bit per element, values 0 or 1.
using Bits = std::vector<std::uint8_t>;

/// Log-likelihood ratios, positive means bit 0 is more likely.
using Llrs = std::vector<double>;

using Samples = std::vector<cplx>;

}  // namespace slsim
