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
#include <numbers>
#include <random>

#include "slsim/channel.hpp"
#include "slsim/coding/mcs.hpp"
#include "slsim/error.hpp"
#include "slsim/grid.hpp"
#include "slsim/link.hpp"
#include "slsim/ofdm.hpp"
#include "slsim/phy_rx.hpp"
#include "slsim/phy_tx.hpp"
#include "slsim/sci.hpp"

using namespace slsim;
using namespace slsim::phy;

namespace {

grid::SubframeGrid random_grid(const grid::GridConfig& cfg, Rng& rng) {
  std::normal_distribution<double> nd;
  grid::SubframeGrid g(cfg);
  for (auto& c : g.cells()) c = {nd(rng), nd(rng)};
  return g;
}

Bits payload_for(const grid::GridConfig& cfg, const grid::Allocation& a, int mcs, Rng& rng) {
  return link::random_bits(transport_block_bits(cfg, a, mcs), rng);
}

}  // namespace

TEST_SUITE("ofdm") {
  TEST_CASE("roundtrip, unitarity and cyclic prefix") {
    grid::GridConfig cfg;
    OfdmModem modem(OfdmConfig{}, cfg.total_subcarriers());
    Rng rng(1);
    const auto g = random_grid(cfg, rng);
    const auto s = modem.modulate(g);
    REQUIRE(s.size() == 14 * 576);
    // CP is a copy of the symbol tail
    for (std::size_t l = 0; l < 14; ++l)
      for (std::size_t i = 0; i < 64; ++i) CHECK(std::abs(s[l * 576 + i] - s[l * 576 + 512 + i]) < 1e-12);
    // Parseval on the useful part
    double e_time = 0;
    for (std::size_t l = 0; l < 14; ++l)
      for (std::size_t i = 64; i < 576; ++i) e_time += std::norm(s[l * 576 + i]);
    CHECK(e_time == doctest::Approx(g.energy()).epsilon(1e-10));
    const auto back = modem.demodulate(s, 14);
    for (std::size_t i = 0; i < g.cells().size(); ++i) CHECK(std::abs(back.cells()[i] - g.cells()[i]) < 1e-10);
  }

  TEST_CASE("single subcarrier is a complex exponential at its bin") {
    grid::GridConfig cfg;
    OfdmModem modem(OfdmConfig{}, cfg.total_subcarriers());
    grid::SubframeGrid g(cfg);
    const std::size_t k = 200;
    g.at(3, k) = {1.0, 0.0};
    const auto s = modem.modulate(g);
    const double n = 512.0;
    const std::size_t bin = modem.bin_of(k);
    for (std::size_t i = 0; i < 512; ++i) {
      const cplx want = std::polar(1.0 / std::sqrt(n), 2 * std::numbers::pi * static_cast<double>(bin * i) / n);
      CHECK(std::abs(s[3 * 576 + 64 + i] - want) < 1e-12);
    }
    // bins avoid DC and are symmetric
    CHECK(modem.bin_of(0) == 512 - 144);
    CHECK(modem.bin_of(143) == 511);
    CHECK(modem.bin_of(144) == 1);
    CHECK(modem.bin_of(287) == 144);
  }

  TEST_CASE("invalid sizes") {
    CHECK_THROWS_AS(OfdmModem(OfdmConfig{.fft_size = 256}, 288), ConfigError);
    CHECK_THROWS_AS(OfdmModem(OfdmConfig{.fft_size = 512, .cp_len = 512}, 288), ConfigError);
    grid::GridConfig cfg;
    OfdmModem modem(OfdmConfig{}, cfg.total_subcarriers());
    CHECK_THROWS_AS(modem.demodulate(Samples(100), 14), ContractError);
  }
}

TEST_SUITE("phy_tx") {
  TEST_CASE("SCI pack/unpack") {
    Sci s{.mcs = 27, .n_subchannels = 6, .rri_code = 5, .priority = 3};
    const auto b = s.pack();
    CHECK(b.size() == 32);
    CHECK(Sci::unpack(b) == s);
    // mcs in the top five bits
    CHECK(b[0] == 1);
    CHECK(b[4] == 1);
    CHECK(s.rri_ms() == 100);
    CHECK(Sci::rri_code_for(20) == 3);
    CHECK_THROWS_AS(Sci::rri_code_for(7), ContractError);
    CHECK_THROWS_AS((Sci{.mcs = 29}.pack()), ContractError);
    Bits bad(32, 1);
    CHECK_FALSE(Sci::unpack(bad).has_value());
  }

  TEST_CASE("encoded lengths") {
    grid::GridConfig cfg;
    Rng rng(2);
    CHECK(encode_pscch(Sci{}, 1, 0, cfg).size() == 96);
    for (int m : {0, 10, 28})
      for (std::size_t w : {1u, 2u, 6u}) {
        const grid::Allocation a{0, w};
        const auto syms = encode_pssch(payload_for(cfg, a, m, rng), coding::mcs_lookup(m), a, 1, 0, cfg);
        CHECK(syms.size() == grid::pssch_re_count(cfg, a));
      }
    CHECK_THROWS_AS(encode_pssch(Bits(5), coding::mcs_lookup(0), {0, 1}, 1, 0, cfg), ContractError);
    CHECK_THROWS_AS(build_tx_grid(Bits(32), Sci{.n_subchannels = 2}, {0, 1}, {}, cfg), ContractError);
  }

  TEST_CASE("power scaling") {
    grid::GridConfig cfg;
    OfdmModem modem(OfdmConfig{}, cfg.total_subcarriers());
    Rng rng(3);
    const grid::Allocation a{1, 2};
    const auto s = build_tx_subframe(payload_for(cfg, a, 4, rng), Sci{.mcs = 4, .n_subchannels = 2}, a, {}, cfg,
                                     modem, -7.0);
    CHECK(10 * std::log10(mean_power(s)) == doctest::Approx(-7.0).epsilon(1e-9));
    Samples zero(10);
    scale_to_power(zero, 0.0);
    CHECK(mean_power(zero) == 0.0);
  }

  TEST_CASE("different vehicles scramble differently") {
    grid::GridConfig cfg;
    Rng rng(4);
    const grid::Allocation a{0, 1};
    const auto p = payload_for(cfg, a, 0, rng);
    CHECK(encode_pssch(p, coding::mcs_lookup(0), a, 1, 0, cfg) != encode_pssch(p, coding::mcs_lookup(0), a, 2, 0, cfg));
    CHECK(encode_pssch(p, coding::mcs_lookup(0), a, 1, 0, cfg) != encode_pssch(p, coding::mcs_lookup(0), a, 1, 1, cfg));
  }
}

TEST_SUITE("phy_rx") {
  TEST_CASE("noiseless loopback for every MCS and width") {
    grid::GridConfig cfg;
    OfdmModem modem(OfdmConfig{}, cfg.total_subcarriers());
    Rng rng(5);
    for (int m = 0; m <= coding::kMaxMcs; m += 4)
      for (std::size_t w : {1u, 2u, 6u}) {
        const grid::Allocation a{6 - w, w};
        const Sci sci{.mcs = static_cast<std::uint8_t>(m), .n_subchannels = static_cast<std::uint8_t>(w)};
        const auto p = payload_for(cfg, a, m, rng);
        const auto s = build_tx_subframe(p, sci, a, {7, 33}, cfg, modem, 0.0);
        const auto rx = receive_subframe(s, cfg, modem, RxIds{{7}, 33});
        REQUIRE(rx.blocks.size() == 1);
        CHECK(rx.detected_scis[0].sci == sci);
        CHECK(rx.detected_scis[0].start_subchannel == a.start_subchannel);
        CHECK(rx.blocks[0].crc_pass);
        CHECK(rx.blocks[0].payload == p);
      }
  }

  TEST_CASE("wrong vehicle id finds nothing") {
    grid::GridConfig cfg;
    OfdmModem modem(OfdmConfig{}, cfg.total_subcarriers());
    Rng rng(6);
    const grid::Allocation a{0, 1};
    const auto s = build_tx_subframe(payload_for(cfg, a, 0, rng), Sci{}, a, {3, 0}, cfg, modem, 0.0);
    CHECK(receive_subframe(s, cfg, modem, RxIds{{4}, 0}).blocks.empty());
    CHECK(receive_subframe(s, cfg, modem, RxIds{{3}, 1}).blocks.empty());
  }

  TEST_CASE("two vehicles on disjoint sub-channels decode together") {
    grid::GridConfig cfg;
    OfdmModem modem(OfdmConfig{}, cfg.total_subcarriers());
    Rng rng(7);
    const grid::Allocation a{0, 2}, b{3, 3};
    const auto pa = payload_for(cfg, a, 5, rng), pb = payload_for(cfg, b, 12, rng);
    auto sa = build_tx_subframe(pa, Sci{.mcs = 5, .n_subchannels = 2}, a, {1, 9}, cfg, modem, 0.0);
    const auto sb = build_tx_subframe(pb, Sci{.mcs = 12, .n_subchannels = 3}, b, {2, 9}, cfg, modem, 0.0);
    for (std::size_t i = 0; i < sa.size(); ++i) sa[i] += sb[i];
    const auto rx = receive_subframe(sa, cfg, modem, RxIds{{1, 2}, 9});
    REQUIRE(rx.blocks.size() == 2);
    for (const auto& blk : rx.blocks) {
      CHECK(blk.crc_pass);
      CHECK(blk.payload == (blk.vehicle_id == 1 ? pa : pb));
      CHECK(blk.start_subchannel == (blk.vehicle_id == 1 ? 0u : 3u));
    }
  }

  TEST_CASE("channel estimate of a flat gain and unbiased noise variance") {
    grid::GridConfig cfg;
    const grid::Allocation a{0, 6};
    const auto dmrs = grid::dmrs_for_allocation(cfg, a, 1, 0);
    Rng rng(8);
    const cplx h = std::polar(0.8, 1.1);
    const double var = 0.01;
    std::normal_distribution<double> nd(0.0, std::sqrt(var / 2));
    double acc = 0;
    const int reps = 200;
    for (int r = 0; r < reps; ++r) {
      grid::SubframeGrid g(cfg);
      const std::vector<cplx> ctrl(96), data(grid::pssch_re_count(cfg, a));
      g = grid::map_subframe(cfg, a, ctrl, data, dmrs);
      for (auto& c : g.cells()) c = h * c + cplx(nd(rng), nd(rng));
      const auto est = estimate_channel(g, cfg, a, dmrs);
      acc += est.noise_var;
      if (r == 0) {
        double err = 0;
        for (const auto& x : est.gains) err = std::max(err, std::abs(x - h));
        CHECK(err < 0.5);
      }
    }
    // 200 * 288 * 2 degrees of freedom: relative sd about 0.3%
    CHECK(acc / reps == doctest::Approx(var).epsilon(0.02));
  }

  TEST_CASE("CFO estimate recovers an injected offset") {
    grid::GridConfig cfg;
    OfdmConfig ocfg;
    OfdmModem modem(ocfg, cfg.total_subcarriers());
    Rng rng(9);
    const grid::Allocation a{0, 6};
    for (double cfo : {-800.0, 0.0, 300.0, 1200.0}) {
      auto s = build_tx_subframe(payload_for(cfg, a, 0, rng), Sci{.n_subchannels = 6}, a, {}, cfg, modem, 0.0);
      channel::apply_cfo(s, cfo, ocfg.sample_rate());
      const auto g = ofdm_demodulate(s, modem, cfg);
      const double est = estimate_cfo(g, cfg, a, grid::dmrs_for_allocation(cfg, a, 1, 0), ocfg);
      CHECK(std::abs(est - cfo) < 20.0);
    }
  }

  TEST_CASE("equalizer arithmetic") {
    const std::vector<cplx> y{{1.0, 0.0}}, h{{0.0, 2.0}};
    const auto eq = equalize(y, h, 1.0);
    // conj(h) y / (|h|^2 + N0)
    CHECK(std::abs(eq.symbols[0] - cplx(0.0, -2.0) / 5.0) < 1e-15);
    CHECK(eq.bias[0] == doctest::Approx(0.8));
    std::vector<cplx> s;
    std::vector<double> v;
    eq.unbiased(s, v);
    CHECK(std::abs(s[0] - cplx(0.0, -0.5)) < 1e-15);
  }
}

TEST_SUITE("link") {
  TEST_CASE("AWGN at high SNR decodes, at very low SNR fails") {
    link::LinkConfig cfg;
    link::LinkSimulator sim(cfg, 1);
    Rng rng(10);
    int ok_hi = 0, ok_lo = 0;
    for (int i = 0; i < 20; ++i) {
      ok_hi += sim.run_subframe(10, 10.0, i, rng).success();
      ok_lo += sim.run_subframe(10, -30.0, i, rng).success();
    }
    CHECK(ok_hi == 20);
    CHECK(ok_lo == 0);
  }

  TEST_CASE("timing offset inside the CP is tolerated") {
    link::LinkConfig cfg;
    cfg.channel.model = channel::ChannelModel::ideal;
    cfg.impairments.timing_enabled = true;
    cfg.impairments.timing_offset_samples = 0;
    link::LinkSimulator sim(cfg, 1);
    Rng rng(11);
    CHECK(sim.run_subframe(20, 0.0, 0, rng).success());
    cfg.impairments.timing_offset_samples = 64;
    CHECK_THROWS_AS(link::LinkSimulator(cfg, 1), ConfigError);
  }

  TEST_CASE("uncoded hook reports Eb/N0") {
    link::LinkConfig cfg;
    Rng rng(12);
    const auto r = link::run_uncoded_qpsk(cfg, 10.0, 2, 100, rng);
    CHECK(r.bits == 2 * 2 * grid::pssch_re_count(cfg.grid, cfg.alloc));
    CHECK(r.ber() < 0.2);
    CHECK(std::isfinite(r.ebn0_db));
  }
}
