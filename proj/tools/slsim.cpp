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


// slsim: command-line front end for sweeps, SPS runs, back-off analysis, the
// loopback self test and the traffic adapter.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "slsim/config.hpp"
#include "slsim/csv.hpp"
#include "slsim/error.hpp"
#include "slsim/evaluator.hpp"
#include "slsim/experiments.hpp"
#include "slsim/sweep.hpp"
#include "slsim/traffic.hpp"

namespace fs = std::filesystem;
using namespace slsim;

namespace {

struct Options {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::size_t workers = 1;
  std::string traffic;
  std::string input;
  std::size_t selftest_subframes = 20;
};

io::ExperimentConfig load(const Options& o) {
  io::ConfigMap map;
  if (!o.config_path.empty()) map = io::load_config_file(o.config_path);
  for (const auto& s : o.overrides) io::apply_override(map, s);
  if (o.seed) map["master_seed"] = std::to_string(*o.seed);
  return io::experiment_from_map(map);
}

std::string out_path(const Options& o, const std::string& name) {
  fs::create_directories(o.out_dir);
  return (fs::path(o.out_dir) / name).string();
}

void write_manifest(const Options& o, const io::ExperimentConfig& cfg, const std::string& command) {
  io::write_file(out_path(o, "manifest.txt"), io::manifest_text(cfg, command));
}

int cmd_bler_sweep(const Options& o) {
  const auto cfg = load(o);
  const auto res = sweep::run_bler_sweep(io::bler_sweep_spec(cfg, o.workers));
  io::write_file(out_path(o, "sweep.csv"), io::sweep_csv(res.cells));
  io::write_file(out_path(o, "samples.csv"), io::samples_csv(res.samples));
  write_manifest(o, cfg, "bler-sweep");
  for (const auto& c : res.cells)
    fmt::print("power {:>6} dBm  mcs {:>2}  mean {:.4g}  std {:.4g}  q99 {:.4g}{}\n", c.tx_power_dbm, c.mcs,
               c.stats.mean, c.stats.std, c.stats.q99, c.stats.low_confidence ? "  (fewer than 100 windows)" : "");
  return 0;
}

int cmd_throughput(const Options& o) {
  const auto cfg = load(o);
  const auto res = sweep::run_bler_sweep(io::throughput_sweep_spec(cfg, o.workers));
  const auto rows = sweep::throughput_table(res, cfg.link);
  io::write_file(out_path(o, "throughput.csv"), io::throughput_csv(rows));
  write_manifest(o, cfg, "throughput-sweep");
  for (const auto& r : rows)
    fmt::print("mcs {:>2}  tbs {:>5}  bler {:.4g}  throughput {:.6g} bit/s\n", r.mcs, r.tbs_bits, r.bler_mean,
               r.throughput_bps);
  return 0;
}

int cmd_sps(const Options& o) {
  const auto cfg = load(o);
  const auto rows = io::run_sps_experiment(cfg);
  io::write_file(out_path(o, "sps.csv"), io::sps_csv(rows));
  write_manifest(o, cfg, "sps-sim");
  for (const auto& r : rows)
    fmt::print("{:<13} load {:.3g}  collision rate {:.4f}  prr {:.4f}\n", r.policy, r.load, r.collision_rate, r.prr);
  return 0;
}

int cmd_backoff(const Options& o) {
  const auto cfg = load(o);
  const std::string input = o.input.empty() ? (fs::path(o.out_dir) / "sweep.csv").string() : o.input;
  if (!fs::exists(input)) {
    fmt::print(stderr, "error: sweep table '{}' not found\n", input);
    return 1;
  }
  const auto cells = io::parse_sweep_csv(io::read_file(input));
  const auto rows = io::backoff_table(cells, cfg.target_bler, cfg.log_floor);
  io::write_file(out_path(o, "backoff.csv"), io::backoff_csv(rows));
  for (const auto& r : rows)
    fmt::print("mcs {:>2}  mean crosses at {:.3f} dBm  q99 at {:.3f} dBm  back-off {:.3f} dB\n", r.mcs,
               r.mean_crossing_dbm, r.q99_crossing_dbm, r.backoff_db);
  return 0;
}

int cmd_selftest(const Options& o) {
  const auto cfg = load(o);
  const auto cases = io::run_selftest(cfg, o.selftest_subframes);
  std::size_t failed = 0;
  for (const auto& c : cases) {
    fmt::print("{} {}: {}\n", c.pass ? "PASS" : "FAIL", c.name, c.detail);
    failed += !c.pass;
  }
  fmt::print("{} of {} cases passed\n", cases.size() - failed, cases.size());
  return failed == 0 ? 0 : 1;
}

int cmd_traffic(const Options& o) {
  const auto cfg = load(o);
  io::TrafficAdapter adapter(cfg);
  if (o.traffic == "stdio") {
    io::serve_stream(std::cin, std::cout, adapter);
    return 0;
  }
  if (o.traffic.rfind("tcp:", 0) == 0) {
    const int port = static_cast<int>(io::parse_int(o.traffic.substr(4), "--traffic"));
    io::serve_tcp(port, adapter, [](int p) { fmt::print(stderr, "listening on 127.0.0.1:{}\n", p); });
    return 0;
  }
  throw ConfigError("expected stdio or tcp:<port>, got '" + o.traffic + "'", "--traffic");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sidelink link-level simulator"};
  app.set_version_flag("--version", std::string(io::code_version()));
  app.fallthrough();
  Options o;
  app.add_option("--config", o.config_path, "Config file (key = value lines)");
  app.add_option("--set", o.overrides, "Override a config key, key=value (repeatable)");
  app.add_option("--seed", o.seed, "Master seed");
  app.add_option("--out-dir", o.out_dir, "Directory for CSV outputs and the manifest");
  app.add_option("--workers", o.workers, "Worker threads for sweeps")->check(CLI::PositiveNumber);
  app.add_option("--traffic", o.traffic, "Serve the packet protocol on stdio or tcp:<port>");

  auto* bler = app.add_subcommand("bler-sweep", "BLER statistics over power and MCS");
  auto* tput = app.add_subcommand("throughput-sweep", "Throughput versus MCS at one power");
  auto* sps = app.add_subcommand("sps-sim", "Collision rate and PRR of the resource selection policies");
  auto* backoff = app.add_subcommand("backoff", "Back-off of the q99 curve from a sweep table");
  backoff->add_option("--input", o.input, "Sweep CSV (default <out-dir>/sweep.csv)");
  auto* self = app.add_subcommand("selftest", "Ideal-channel loopback of every MCS");
  self->add_option("--subframes", o.selftest_subframes, "Subframes per case")->check(CLI::PositiveNumber);
  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*bler) return cmd_bler_sweep(o);
    if (*tput) return cmd_throughput(o);
    if (*sps) return cmd_sps(o);
    if (*backoff) return cmd_backoff(o);
    if (*self) return cmd_selftest(o);
    if (!o.traffic.empty()) return cmd_traffic(o);
    std::cerr << app.help();
    return 2;
  } catch (const ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return 2;
  } catch (const eval::NotCrossedError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
}
