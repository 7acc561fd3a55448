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

#include <algorithm>
#include <cmath>
#include <numbers>

#include "slsim/channel.hpp"
#include "slsim/error.hpp"

using namespace slsim;
using namespace slsim::channel;

namespace {

constexpr double kFs = 7.68e6;

ChannelConfig flat(double doppler, std::uint64_t seed) {
  ChannelConfig c;
  c.model = ChannelModel::rayleigh_flat;
  c.doppler_hz = doppler;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_SUITE("channel") {
  TEST_CASE("config validation") {
    ChannelConfig c = ChannelConfig::indoor_v2v();
    CHECK_NOTHROW(c.validate(64));
    c.taps[2].delay_samples = 64;
    CHECK_THROWS_AS(c.validate(64), ConfigError);
    c = ChannelConfig::indoor_v2v();
    c.taps[0].power = 0.5;
    CHECK_THROWS_AS(c.validate(64), ConfigError);
    c.doppler_hz = -1;
    CHECK_THROWS_AS(c.validate(64), ConfigError);
    CHECK_THROWS_AS(channel_model_from_string("rician"), ConfigError);
    CHECK(channel_model_from_string("rayleigh_tdl") == ChannelModel::rayleigh_tdl);
    ImpairmentConfig imp;
    imp.timing_enabled = true;
    imp.timing_offset_samples = -64;
    CHECK_THROWS_AS(imp.validate(64), ConfigError);
  }

  TEST_CASE("ideal and awgn models pass samples through") {
    Samples x{{1, 2}, {3, 4}};
    ChannelConfig c;
    const auto out = apply_channel(x, c, kFs, 64, 0);
    CHECK(out.samples == x);
    CHECK(out.trace.gains[0][1] == cplx(1, 0));
  }

  TEST_CASE("applied gains follow the direct sum of sinusoids") {
    const FadingChannel ch(ChannelConfig{.model = ChannelModel::rayleigh_tdl,
                                         .doppler_hz = 150.0,
                                         .taps = {{0, 0.6}, {3, 0.4}},
                                         .seed = 4},
                           kFs, 64);
    const Samples x(1000, cplx(1.0, 0.0));
    ChannelTrace tr;
    const std::int64_t origin = 123456789;
    const auto y = ch.apply(x, origin, &tr);
    for (std::size_t t = 0; t < 2; ++t)
      for (std::size_t i = 0; i < 1000; i += 37)
        // interpolation error is at most (2 pi 150 * 32 / fs)^2 / 8 = 1.9e-6 times
        // the sum of the sinusoid magnitudes, a few units here
        CHECK(std::abs(tr.gains[t][i] - ch.tap_gain(t, static_cast<double>(origin + static_cast<long>(i)) / kFs)) < 1e-5);
    for (std::size_t i = 0; i < 1000; i += 32)
      CHECK(std::abs(tr.gains[0][i] - ch.tap_gain(0, static_cast<double>(origin + static_cast<long>(i)) / kFs)) < 1e-11);
    // convolution: tap 1 only contributes from sample 3 on
    CHECK(std::abs(y[1] - tr.gains[0][1]) < 1e-12);
    CHECK(std::abs(y[10] - tr.gains[0][10] - tr.gains[1][10]) < 1e-12);
  }

  TEST_CASE("continuity across consecutive calls") {
    const FadingChannel ch(flat(60.0, 2), kFs, 64);
    ChannelTrace a, b;
    const Samples x(500, cplx(1, 0));
    ch.apply(x, 0, &a);
    ch.apply(x, 500, &b);
    CHECK(std::abs(a.gains[0][499] - b.gains[0][0]) < 1e-3);
  }

  TEST_CASE("ensemble power per tap") {
    double acc = 0;
    const int n = 4000;
    for (int s = 0; s < n; ++s) acc += std::norm(FadingChannel(flat(60.0, s + 1), kFs, 64).tap_gain(0, 0.0));
    // exponential with mean 1: sd of the mean is 1/sqrt(n)
    CHECK(std::abs(acc / n - 1.0) < 4.0 / std::sqrt(n));
  }

  TEST_CASE("AWGN variance and mean") {
    Samples x(200000, cplx(0, 0));
    Rng rng(3);
    add_awgn(x, 10.0, 2.0, rng);
    double p = 0;
    cplx m{0, 0};
    for (auto& v : x) p += std::norm(v), m += v;
    p /= static_cast<double>(x.size());
    m /= static_cast<double>(x.size());
    CHECK(p == doctest::Approx(0.2).epsilon(0.01));
    CHECK(std::abs(m) < 0.005);
    Samples y(4, cplx(1, 1));
    add_awgn(y, std::numeric_limits<double>::infinity(), 1.0, rng);
    CHECK(y == Samples(4, cplx(1, 1)));
  }

  TEST_CASE("CFO rotation and timing shift") {
    Samples x(1000, cplx(1, 0));
    apply_cfo(x, 300.0, kFs);
    for (std::size_t i = 0; i < x.size(); i += 11)
      CHECK(std::abs(x[i] - std::polar(1.0, 2 * std::numbers::pi * 300.0 * static_cast<double>(i) / kFs)) < 1e-12);
    const Samples s{{0, 0}, {1, 0}, {2, 0}, {3, 0}};
    CHECK(apply_timing_offset(s, 1) == Samples{{3, 0}, {0, 0}, {1, 0}, {2, 0}});
    CHECK(apply_timing_offset(s, -1) == Samples{{1, 0}, {2, 0}, {3, 0}, {0, 0}});
  }

  TEST_CASE("power calibration") {
    PowerCalibration c;
    CHECK(c.snr_db(-10.0) == doctest::Approx(8.0));
  }
}
