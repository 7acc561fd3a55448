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


#include <doctest.h>

#include <cmath>
#include <set>

#include "slsim/error.hpp"
#include "slsim/grid.hpp"
#include "slsim/random.hpp"

using namespace slsim;
using namespace slsim::grid;

namespace {

std::vector<cplx> random_symbols(std::size_t n, Rng& rng) {
  std::normal_distribution<double> nd;
  std::vector<cplx> v(n);
  for (auto& x : v) x = {nd(rng), nd(rng)};
  return v;
}

// Independent enumeration of the region layout: walks every cell of the grid
// and classifies it from first principles.
struct Census {
  std::size_t pscch = 0, pssch = 0, dmrs = 0, agc = 0, guard = 0;
};

Census census(const GridConfig& cfg, const Allocation& a) {
  Census c;
  const std::size_t k0 = a.start_subchannel * cfg.sc_per_subchannel;
  const std::size_t k1 = k0 + a.n_subchannels * cfg.sc_per_subchannel;
  for (std::size_t l = 0; l < cfg.n_symbols; ++l)
    for (std::size_t k = k0; k < k1; ++k) {
      const bool dmrs = std::find(cfg.dmrs_symbols.begin(), cfg.dmrs_symbols.end(), l) != cfg.dmrs_symbols.end();
      if (l == cfg.agc_symbol)
        ++c.agc;
      else if (l == cfg.guard_symbol)
        ++c.guard;
      else if (dmrs)
        ++c.dmrs;
      else if (k < k0 + cfg.pscch_width_sc)
        ++c.pscch;
      else
        ++c.pssch;
    }
  return c;
}

}  // namespace

TEST_SUITE("grid") {
  TEST_CASE("default geometry") {
    GridConfig cfg;
    CHECK(cfg.n_data_symbols() == 8);
    CHECK(cfg.data_symbols() == std::vector<std::size_t>{1, 3, 4, 6, 7, 9, 10, 12});
    CHECK(cfg.total_subcarriers() == 288);
  }

  TEST_CASE("RE counts match enumeration") {
    GridConfig cfg;
    CHECK(pssch_re_count(cfg, {0, 1}) == 288);
    CHECK(pssch_re_count(cfg, {0, 2}) == 672);
    CHECK(pssch_re_count(cfg, {0, 6}) == 2208);
    CHECK(pscch_re_count(cfg) == 96);
    for (std::size_t s = 0; s < cfg.n_subchannels; ++s)
      for (std::size_t n = 1; s + n <= cfg.n_subchannels; ++n) {
        const Allocation a{s, n};
        const auto c = census(cfg, a);
        CHECK(pssch_re_count(cfg, a) == c.pssch);
        CHECK(pscch_re_count(cfg) == c.pscch);
        CHECK(dmrs_re_count(cfg, a) == c.dmrs);
        CHECK(c.pscch + c.pssch + c.dmrs + c.agc + c.guard == cfg.n_symbols * a.n_subcarriers(cfg));
        // additivity
        CHECK(pssch_re_count(cfg, a) == pssch_re_count(cfg, {0, 1}) + (n - 1) * 8 * 48);
      }
  }

  TEST_CASE("PSCCH count for other shapes") {
    GridConfig cfg;
    cfg.pscch_width_sc = 0;
    CHECK(pscch_re_count(cfg) == 0);
    GridConfig ten;
    ten.n_symbols = 10;
    ten.dmrs_symbols = {3, 6};
    ten.guard_symbol = 9;
    ten.validate();
    CHECK(pscch_re_count(ten) == 72);
  }

  TEST_CASE("invalid configs and allocations") {
    GridConfig cfg;
    CHECK_THROWS_AS((Allocation{5, 2}.validate(cfg)), RangeError);
    CHECK_THROWS_AS(pssch_re_count(cfg, {6, 1}), RangeError);
    CHECK_THROWS_AS(pssch_re_count(cfg, {0, 0}), RangeError);
    GridConfig bad = cfg;
    bad.dmrs_symbols = {0, 5};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = cfg;
    bad.pscch_width_sc = 49;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = cfg;
    bad.guard_symbol = 14;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
  }

  TEST_CASE("map/extract roundtrip and mapping order") {
    GridConfig cfg;
    Rng rng(3);
    for (const Allocation a : {Allocation{0, 1}, Allocation{2, 3}, Allocation{0, 6}, Allocation{5, 1}}) {
      const auto ctrl = random_symbols(pscch_re_count(cfg), rng);
      const auto data = random_symbols(pssch_re_count(cfg, a), rng);
      const auto dmrs = random_symbols(dmrs_re_count(cfg, a), rng);
      const auto g = map_subframe(cfg, a, ctrl, data, dmrs);
      const auto x = extract_subframe(cfg, a, g);
      CHECK(x.pscch == ctrl);
      CHECK(x.pssch == data);
      CHECK(x.dmrs == dmrs);
      // guard row zero, AGC row copies symbol 1
      for (std::size_t k = 0; k < cfg.total_subcarriers(); ++k) {
        CHECK(g.at(cfg.guard_symbol, k) == cplx(0, 0));
        CHECK(g.at(cfg.agc_symbol, k) == g.at(1, k));
      }
      // outside the allocation nothing is written
      for (std::size_t l = 0; l < cfg.n_symbols; ++l)
        for (std::size_t k = 0; k < cfg.total_subcarriers(); ++k)
          if (k < a.first_subcarrier(cfg) || k >= a.first_subcarrier(cfg) + a.n_subcarriers(cfg))
            CHECK(g.at(l, k) == cplx(0, 0));
    }
  }

  TEST_CASE("first PSSCH symbol lands at (1, pscch_width)") {
    GridConfig cfg;
    const Allocation a{0, 1};
    std::vector<cplx> data(pssch_re_count(cfg, a));
    data[0] = {1.0, 0.0};
    const std::vector<cplx> ctrl(pscch_re_count(cfg)), dmrs(dmrs_re_count(cfg, a));
    const auto g = map_subframe(cfg, a, ctrl, data, dmrs);
    CHECK(g.at(1, cfg.pscch_width_sc) == cplx(1, 0));
    // second symbol is frequency-first: next subcarrier of the same symbol
    data[0] = {0, 0};
    data[1] = {2, 0};
    const auto g2 = map_subframe(cfg, a, ctrl, data, dmrs);
    CHECK(g2.at(1, cfg.pscch_width_sc + 1) == cplx(2, 0));
  }

  TEST_CASE("all-zero inputs leave only DMRS cells") {
    GridConfig cfg;
    const Allocation a{1, 2};
    const std::vector<cplx> ctrl(pscch_re_count(cfg)), data(pssch_re_count(cfg, a));
    const auto dmrs = dmrs_for_allocation(cfg, a, 4, 9);
    const auto g = map_subframe(cfg, a, ctrl, data, dmrs);
    for (std::size_t l = 0; l < cfg.n_symbols; ++l)
      for (std::size_t k = 0; k < cfg.total_subcarriers(); ++k) {
        const bool in_alloc = k >= 48 && k < 144;
        if (cfg.is_dmrs(l) && in_alloc)
          CHECK(std::abs(std::abs(g.at(l, k)) - 1.0) < 1e-12);
        else
          CHECK(g.at(l, k) == cplx(0, 0));
      }
    const auto x = extract_subframe(cfg, a, SubframeGrid(cfg.n_symbols, cfg.total_subcarriers()));
    for (const auto& v : x.pssch) CHECK(v == cplx(0, 0));
  }

  TEST_CASE("length mismatch is a contract error") {
    GridConfig cfg;
    const Allocation a{0, 1};
    const std::vector<cplx> ctrl(pscch_re_count(cfg)), data(pssch_re_count(cfg, a) - 1), dmrs(dmrs_re_count(cfg, a));
    CHECK_THROWS_AS(map_subframe(cfg, a, ctrl, data, dmrs), ContractError);
    CHECK_THROWS_AS(extract_subframe(cfg, a, SubframeGrid(13, 288)), ContractError);
  }

  TEST_CASE("DMRS sequence") {
    const auto a = dmrs_sequence(1, 0, 192);
    CHECK(a == dmrs_sequence(1, 0, 192));
    CHECK(a != dmrs_sequence(2, 0, 192));
    CHECK(a != dmrs_sequence(1, 1, 192));
    for (const auto& x : a) CHECK(std::abs(std::abs(x) - 1.0) < 1e-12);
    // golden: the LFSR seeded for (dmrs, id 1, subframe 0) starts with bits 1, 0
    CHECK(a[0].real() == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(a[0].imag() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK_THROWS_AS(dmrs_sequence(1, 0, 0), ContractError);

    GridConfig cfg;
    const auto full = dmrs_full_width(cfg, 3, 5);
    const auto slice = dmrs_slice(cfg, {2, 2}, full);
    CHECK(slice == dmrs_for_allocation(cfg, {2, 2}, 3, 5));
    CHECK(slice[0] == full[96]);
  }
}
