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
#include <numeric>
#include <random>
#include <thread>

#include "slsim/coding/mcs.hpp"
#include "slsim/error.hpp"
#include "slsim/evaluator.hpp"
#include "slsim/random.hpp"
#include "slsim/sweep.hpp"

using namespace slsim;
using namespace slsim::eval;

TEST_SUITE("evaluator") {
  TEST_CASE("hand examples") {
    std::vector<double> s(99, 0.0);
    s.push_back(1.0);
    const auto st = bler_stats(s);
    CHECK(st.mean == doctest::Approx(0.01));
    CHECK(st.std == doctest::Approx(0.1));
    CHECK(st.q99 == 0.0);
    CHECK(st.n_samples == 100);
    CHECK_FALSE(st.low_confidence);
    const std::vector<double> c(7, 0.25);
    const auto cs = bler_stats(c);
    CHECK(cs.mean == 0.25);
    CHECK(cs.std == 0.0);
    CHECK(cs.q99 == 0.25);
    CHECK(cs.low_confidence);
    CHECK(bler_stats(std::vector<double>{0.5}).std == 0.0);
    CHECK_THROWS_AS(bler_stats(std::vector<double>{}), ContractError);
    CHECK(nearest_rank(std::vector<double>{5, 1, 4, 2, 3}, 50) == 3);
    CHECK(nearest_rank(std::vector<double>{5, 1, 4, 2, 3}, 100) == 5);
    CHECK(nearest_rank(std::vector<double>{5, 1, 4, 2, 3}, 1) == 1);
  }

  TEST_CASE("permutation invariance and q99 >= median") {
    Rng rng(1);
    std::uniform_real_distribution<double> u;
    for (int t = 0; t < 200; ++t) {
      std::vector<double> s(1 + rng() % 300);
      for (auto& x : s) x = std::pow(u(rng), 3);
      const auto a = bler_stats(s);
      std::shuffle(s.begin(), s.end(), rng);
      const auto b = bler_stats(s);
      CHECK(a.q99 == b.q99);
      CHECK(a.median == b.median);
      CHECK(a.mean == b.mean);
      CHECK(a.std == b.std);
      CHECK(a.q99 >= a.median);
    }
  }

  TEST_CASE("cache rejects duplicates and snapshot order ignores append order") {
    DecodeCache a, b;
    std::vector<DecodeRecord> recs;
    for (std::uint32_t t = 0; t < 3; ++t)
      for (std::uint32_t sf = 0; sf < 20; ++sf)
        for (int m : {0, 5}) recs.push_back({t, sf, -10.0, m, (sf * 7 + t) % 3 != 0, 32});
    for (const auto& r : recs) a.record(r);
    CHECK(a.size() == recs.size());
    CHECK_THROWS_AS(a.record(recs[4]), DuplicateRecordError);
    // same trial/subframe at another power is a different key
    auto other = recs[4];
    other.tx_power_dbm = -8.0;
    CHECK_NOTHROW(a.record(other));
    // concurrent appends in a shuffled order
    Rng rng(2);
    std::shuffle(recs.begin(), recs.end(), rng);
    {
      std::vector<std::jthread> th;
      for (int w = 0; w < 4; ++w)
        th.emplace_back([&, w] {
          for (std::size_t i = static_cast<std::size_t>(w); i < recs.size(); i += 4) b.record(recs[i]);
        });
    }
    b.record(other);
    const auto sa = a.snapshot(), sb = b.snapshot();
    REQUIRE(sa.size() == sb.size());
    for (std::size_t i = 0; i < sa.size(); ++i) {
      CHECK(sa[i].trial_idx == sb[i].trial_idx);
      CHECK(sa[i].subframe_idx == sb[i].subframe_idx);
      CHECK(sa[i].crc_pass == sb[i].crc_pass);
    }
    CHECK(window_samples(sa, 5) == window_samples(sb, 5));
  }

  TEST_CASE("windowing") {
    std::vector<DecodeRecord> recs;
    for (std::uint32_t sf = 0; sf < 25; ++sf) recs.push_back({0, sf, 0.0, 0, sf % 4 != 0, 8});
    const auto w = window_samples(recs, 10);
    REQUIRE(w.size() == 2);  // trailing 5 dropped
    CHECK(w[0].n_blocks == 10);
    CHECK(w[0].n_errors == 3);  // 0, 4, 8
    CHECK(w[1].n_errors == 2);  // 12, 16
    CHECK(w[1].window_idx == 1);
    CHECK(w[0].bler() == doctest::Approx(0.3));
  }

  TEST_CASE("backoff on constructed curves") {
    // straight lines in log BLER: mean crosses 1e-2 at -12, q99 at -9
    std::vector<CurvePoint> mean, q99;
    for (double p = -20; p <= 0; p += 2) {
      mean.push_back({p, std::pow(10.0, -2.0 - (p + 12.0) / 4.0)});
      q99.push_back({p, std::pow(10.0, -2.0 - (p + 9.0) / 4.0)});
    }
    CHECK(backoff_db(mean, q99, 1e-2) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(backoff_db(mean, mean, 1e-2) == 0.0);
    // crossing between grid points, by hand:
    // (-10, 0.05) -> (-8, 0.002): log10 from -1.30103 to -2.69897, target -2
    // power = -10 + 2 * (-1.30103 + 2) / (2.69897 - 1.30103)
    const std::vector<CurvePoint> c{{-12, 0.3}, {-10, 0.05}, {-8, 0.002}, {-6, 0.0}};
    const double hand = -10.0 + 2.0 * (std::log10(0.05) + 2.0) / (std::log10(0.05) - std::log10(0.002));
    CHECK(std::abs(crossing_power(c, 1e-2, "mean") - hand) < 1e-9);
    // zero BLER clamps to the floor: 0.002 -> 1e-6 between -8 and -6, target 1e-4
    const double hand2 = -8.0 + 2.0 * (std::log10(0.002) + 4.0) / (std::log10(0.002) + 6.0);
    CHECK(std::abs(crossing_power(c, 1e-4, "mean") - hand2) < 1e-9);
    // first downward crossing only
    const std::vector<CurvePoint> bump{{0, 0.5}, {1, 0.005}, {2, 0.05}, {3, 0.001}};
    CHECK(crossing_power(bump, 1e-2, "x") < 1.0);
    // a point exactly at the target
    const std::vector<CurvePoint> exact{{0, 0.1}, {1, 0.01}, {2, 0.001}};
    CHECK(crossing_power(exact, 1e-2, "x") == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("not crossed names the curve") {
    const std::vector<CurvePoint> flat{{0, 0.5}, {2, 0.4}};
    const std::vector<CurvePoint> good{{0, 0.5}, {2, 0.001}};
    try {
      backoff_db(good, flat, 1e-2);
      FAIL("expected NotCrossedError");
    } catch (const NotCrossedError& e) {
      CHECK(e.curve() == "q99");
    }
    try {
      backoff_db(flat, good, 1e-2);
      FAIL("expected NotCrossedError");
    } catch (const NotCrossedError& e) {
      CHECK(e.curve() == "mean");
    }
    const std::vector<CurvePoint> unsorted{{2, 0.5}, {0, 0.001}};
    CHECK_THROWS_AS(crossing_power(unsorted, 1e-2, "x"), ContractError);
  }

  TEST_CASE("throughput") {
    grid::GridConfig cfg;
    const grid::Allocation full{0, 6};
    const double z = throughput_bps(0.0, 0, full, cfg);
    CHECK(z == 1000.0 * static_cast<double>(coding::tbs_for(coding::mcs_lookup(0), 2208)));
    CHECK(throughput_bps(1.0, 0, full, cfg) == 0.0);
    CHECK(throughput_bps(0.5, 0, full, cfg) == doctest::Approx(z / 2));
  }

  TEST_CASE("confidence half-width") {
    BlerStats s;
    s.std = 0.1;
    s.n_samples = 100;
    CHECK(mean_ci_halfwidth(s, 0.99) == doctest::Approx(2.5758293 * 0.01).epsilon(1e-6));
  }
}

TEST_SUITE("sweep") {
  TEST_CASE("shape, ideal channel and worker independence") {
    sweep::SweepSpec spec;
    spec.link.channel.model = channel::ChannelModel::ideal;
    spec.tx_power_dbm = {-10, -5};
    spec.mcs = {0, 20};
    spec.trials = 3;
    spec.window_blocks = 4;
    const auto r = sweep::run_bler_sweep(spec);
    CHECK(r.cells.size() == 4);
    CHECK(r.samples.size() == 12);
    for (const auto& c : r.cells) CHECK(c.stats.mean == 0.0);

    spec.link.channel = channel::ChannelConfig::indoor_v2v();
    spec.window_blocks = 3;
    const auto one = sweep::run_bler_sweep(spec);
    spec.workers = 3;
    const auto three = sweep::run_bler_sweep(spec);
    CHECK(one.samples == three.samples);
    spec.master_seed = 2;
    CHECK(sweep::run_bler_sweep(spec).samples != one.samples);
  }

  TEST_CASE("spec validation") {
    sweep::SweepSpec spec;
    spec.tx_power_dbm = {};
    spec.mcs = {0};
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    spec.tx_power_dbm = {0};
    spec.mcs = {29};
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    spec.mcs = {0};
    spec.trials = 0;
    CHECK_THROWS_AS(spec.validate(), ConfigError);
  }
}
