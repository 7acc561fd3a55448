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

#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include "slsim/config.hpp"
#include "slsim/csv.hpp"
#include "slsim/error.hpp"
#include "slsim/experiments.hpp"
#include "slsim/traffic.hpp"

using namespace slsim;
using namespace slsim::io;

namespace {

std::string line_of(const std::string& body, std::size_t n) {
  std::istringstream in(body);
  std::string l;
  for (std::size_t i = 0; i <= n; ++i) std::getline(in, l);
  return l;
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("parse text, comments, later keys win") {
    const auto m = parse_config_text("# hello\n\nscenario = indoor_v2v\n trials=5 # five\ntrials = 7\n");
    CHECK(m.at("scenario") == "indoor_v2v");
    CHECK(m.at("trials") == "7");
    CHECK_THROWS_AS(parse_config_text("oops\n"), ConfigError);
    ConfigMap o;
    apply_override(o, "channel.doppler_hz=120");
    CHECK(o.at("channel.doppler_hz") == "120");
    CHECK_THROWS_AS(apply_override(o, "novalue"), ConfigError);
  }

  TEST_CASE("scenarios and overrides") {
    auto cfg = experiment_from_map({{"scenario", "indoor_v2v"}, {"channel.doppler_hz", "120"}});
    CHECK(cfg.link.channel.model == channel::ChannelModel::rayleigh_tdl);
    CHECK(cfg.link.channel.doppler_hz == 120.0);
    CHECK(cfg.link.impairments.cfo_enabled);
    CHECK(cfg.link.impairments.cfo_hz == 300.0);
    cfg = experiment_from_map({{"sweep.tx_power_dbm", "-20:-6:2"}, {"sweep.mcs", "1, 2,3"}});
    CHECK(cfg.tx_power_dbm == std::vector<double>{-20, -18, -16, -14, -12, -10, -8, -6});
    CHECK(cfg.mcs == std::vector<int>{1, 2, 3});
    CHECK_NOTHROW(experiment_from_map({{"manifest.seed", "3"}}));
  }

  TEST_CASE("defaults") {
    ExperimentConfig d;
    CHECK(d.tx_power_dbm.size() == 8);
    CHECK(d.mcs == std::vector<int>{0, 5, 10, 15});
    CHECK(d.trials == 100);
    CHECK(d.window_blocks == 1000);
    CHECK(d.pool.sensing_window_ms == 100);
    CHECK(d.pool.keep_fraction == 0.2);
  }

  TEST_CASE("field-level errors") {
    auto field_of = [](const ConfigMap& m) {
      try {
        experiment_from_map(m);
      } catch (const ConfigError& e) {
        return e.field();
      }
      return std::string("none");
    };
    CHECK(field_of({{"channel.doppler_hz", "fast"}}) == "channel.doppler_hz");
    CHECK(field_of({{"bogus.key", "1"}}) == "bogus.key");
    CHECK(field_of({{"sweep.mcs", "40"}}) == "sweep.mcs");
    CHECK(field_of({{"trials", "0"}}) == "trials");
    CHECK(field_of({{"scenario", "mars"}}) == "scenario");
    CHECK(field_of({{"pool.selection_period_ms", "30"}}) == "pool.selection_period_ms");
    CHECK(field_of({{"channel.model", "rayleigh_tdl"}, {"channel.taps", "0:0.5, 70:0.5"}}) == "channel.taps");
  }

  TEST_CASE("config text round trip") {
    auto cfg = experiment_from_map({{"scenario", "indoor_v2v"},
                                    {"trials", "17"},
                                    {"sweep.mcs", "3,4"},
                                    {"pool.rssi_threshold", "-inf"},
                                    {"calibration.gain_offset_db", "12.5"},
                                    {"rx.equalizer", "zf"}});
    const auto text = to_config_text(cfg);
    const auto again = experiment_from_map(parse_config_text(text));
    CHECK(to_config_text(again) == text);
    CHECK(again.trials == 17);
    CHECK(again.link.rx.equalizer == phy::EqualizerKind::zero_forcing);
    CHECK(std::isinf(again.pool.rssi_threshold));
    CHECK(format_double(0.1) == "0.1");
    CHECK(parse_double(format_double(1.0 / 3.0), "x") == 1.0 / 3.0);
  }
}

TEST_SUITE("csv") {
  TEST_CASE("round trips") {
    Rng rng(1);
    std::uniform_real_distribution<double> u;
    std::vector<sweep::SweepCell> cells;
    for (int i = 0; i < 20; ++i)
      cells.push_back({-20.0 + i * 0.5, i % 29, {.mean = u(rng), .std = u(rng), .q99 = u(rng), .n_samples = 100}});
    const auto text = sweep_csv(cells);
    CHECK(line_of(text, 0) == "tx_power_dbm,mcs,n_samples,bler_mean,bler_std,bler_q99");
    const auto back = parse_sweep_csv(text);
    REQUIRE(back.size() == cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      CHECK(back[i].tx_power_dbm == cells[i].tx_power_dbm);
      CHECK(back[i].stats.mean == cells[i].stats.mean);
      CHECK(back[i].stats.q99 == cells[i].stats.q99);
      CHECK(back[i].stats.n_samples == 100);
    }
    std::vector<eval::WindowSample> ws{{0, -10.5, 3, 0, 1000, 7}, {4, -8.0, 15, 2, 1000, 0}};
    CHECK(line_of(samples_csv(ws), 0) == "trial,tx_power_dbm,mcs,window_idx,n_blocks,n_errors");
    CHECK(parse_samples_csv(samples_csv(ws)) == ws);
    std::vector<SpsRow> sps{{"random", 0.5, 0.123456789, 0.9}, {"sensing", 0.25, 0.0, 1.0}};
    CHECK(line_of(sps_csv(sps), 0) == "policy,load,collision_rate,prr");
    CHECK(parse_sps_csv(sps_csv(sps)) == sps);
    std::vector<sweep::ThroughputRow> tp{{-4.0, 7, 1000, 0.25, 750000.0}};
    CHECK(parse_throughput_csv(throughput_csv(tp)) == tp);
    CHECK_THROWS(parse_sps_csv("wrong,header\n"));
  }
}

TEST_SUITE("traffic") {
  TEST_CASE("parse and emit") {
    const auto ev = parse_pkt_line("PKT 1000 3 8 DEADBEEFDEADBEEF");
    CHECK(ev.arrival_time_us == 1000);
    CHECK(ev.priority == 3);
    CHECK(ev.payload_len == 8);
    CHECK(ev.payload[0] == 0xDE);
    CHECK(ev.payload[7] == 0xEF);
    CHECK(parse_pkt_line("PKT 5 0 2 00ff").payload[1] == 0xFF);
    CHECK_THROWS_AS(parse_pkt_line("PKT 1000 3 9 DEADBEEFDEADBEEF"), ProtocolError);
    CHECK_THROWS_AS(parse_pkt_line("PKT 1000 8 1 00"), ProtocolError);
    CHECK_THROWS_AS(parse_pkt_line("PKT x 1 1 00"), ProtocolError);
    CHECK_THROWS_AS(parse_pkt_line("PKT 1 1 1 zz"), ProtocolError);
    CHECK_THROWS_AS(parse_pkt_line("GET /"), ProtocolError);
    CHECK(emit_outcome(1000, PacketStatus::ok) == "RES 1000 ok");
    CHECK(emit_outcome(7, PacketStatus::crc_fail) == "RES 7 crc_fail");
  }

  TEST_CASE("segmentation") {
    CHECK(blocks_for_packet(300, 32) == 75);
    CHECK(blocks_for_packet(1, 32) == 1);
    CHECK(blocks_for_packet(4, 32) == 1);
    CHECK(blocks_for_packet(5, 32) == 2);
    const auto segs = segment_packet({0x80, 0x01, 0xFF}, 16);
    REQUIRE(segs.size() == 2);
    CHECK(segs[0][0] == 1);
    CHECK(segs[0][15] == 1);
    CHECK(segs[1][7] == 1);
    CHECK(segs[1][8] == 0);  // zero padded
  }

  TEST_CASE("adapter: 300 bytes at MCS 0 on one sub-channel is 75 blocks and arrives") {
    auto cfg = experiment_from_map({{"scenario", "ideal"}, {"link.n_subchannels", "1"}});
    TrafficAdapter ad(cfg);
    CHECK(ad.tbs_bits() == 32);
    std::string hex(600, 'a');
    CHECK(ad.handle_line("PKT 10 1 300 " + hex) == "RES 10 ok");
    CHECK(ad.handle_line("PKT 5 1 1 00").rfind("ERR ", 0) == 0);  // time went backwards
    CHECK(ad.handle_line("garbage").rfind("ERR ", 0) == 0);
    CHECK(ad.handle_line("PKT 20 1 1 00") == "RES 20 ok");
  }

  TEST_CASE("adapter reports crc failures at hopeless SNR") {
    auto cfg = experiment_from_map({{"scenario", "awgn"}, {"traffic.tx_power_dbm", "-60"}});
    TrafficAdapter ad(cfg);
    CHECK(ad.handle_line("PKT 1 0 4 01020304") == "RES 1 crc_fail");
  }

  TEST_CASE("adapter with background vehicles") {
    auto cfg = experiment_from_map({{"scenario", "ideal"},
                                    {"traffic.background_vehicles", "30"},
                                    {"traffic.policy", "random"},
                                    {"link.n_subchannels", "1"}});
    TrafficAdapter ad(cfg);
    int ok = 0, coll = 0;
    for (int i = 0; i < 60; ++i) {
      const auto r = ad.handle_line("PKT " + std::to_string(i * 100) + " 0 2 abcd");
      ok += r.ends_with(" ok");
      coll += r.ends_with(" collision");
    }
    CHECK(ok + coll == 60);
    CHECK(coll > 0);
  }

  TEST_CASE("stdio stream") {
    auto cfg = experiment_from_map({{"scenario", "ideal"}});
    TrafficAdapter ad(cfg);
    std::istringstream in("PKT 1 0 1 aa\n\nbad line\nPKT 2 0 1 bb\n");
    std::ostringstream out;
    serve_stream(in, out, ad);
    CHECK(out.str().starts_with("RES 1 ok\nERR "));
    CHECK(out.str().ends_with("RES 2 ok\n"));
  }

  TEST_CASE("tcp loopback") {
    auto cfg = experiment_from_map({{"scenario", "ideal"}});
    TrafficAdapter ad(cfg);
    std::promise<int> port_p;
    auto port_f = port_p.get_future();
    std::thread server([&] { serve_tcp(0, ad, [&](int p) { port_p.set_value(p); }); });
    const int port = port_f.get();
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(static_cast<std::uint16_t>(port));
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    REQUIRE(::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0);
    const std::string req = "PKT 3 0 2 beef\n";
    REQUIRE(::write(fd, req.data(), req.size()) == static_cast<ssize_t>(req.size()));
    ::shutdown(fd, SHUT_WR);
    std::string got;
    char buf[256];
    ssize_t n;
    while ((n = ::read(fd, buf, sizeof buf)) > 0) got.append(buf, static_cast<std::size_t>(n));
    ::close(fd);
    server.join();
    CHECK(got == "RES 3 ok\n");
  }
}

TEST_SUITE("experiments") {
  TEST_CASE("manifest reproduces the config") {
    auto cfg = experiment_from_map({{"scenario", "indoor_v2v"}, {"trials", "9"}});
    const auto text = manifest_text(cfg, "bler-sweep");
    CHECK(text.find("manifest.code_version") != std::string::npos);
    const auto again = experiment_from_map(parse_config_text(text));
    CHECK(to_config_text(again) == to_config_text(cfg));
  }

  TEST_CASE("selftest passes") {
    ExperimentConfig cfg;
    const auto cases = run_selftest(cfg, 2);
    CHECK(cases.size() == 87);
    for (const auto& c : cases) CHECK_MESSAGE(c.pass, c.name << ": " << c.detail);
  }

  TEST_CASE("backoff table from cells") {
    std::vector<sweep::SweepCell> cells;
    for (double p = -20; p <= 0; p += 2) {
      cells.push_back({p, 0, {.mean = std::pow(10.0, -2.0 - (p + 12.0) / 4.0), .q99 = std::pow(10.0, -2.0 - (p + 10.0) / 4.0)}});
    }
    const auto rows = backoff_table(cells, 1e-2, 1e-6);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].backoff_db == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rows[0].mean_crossing_dbm == doctest::Approx(-12.0).epsilon(1e-12));
  }
}
