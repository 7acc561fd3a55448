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


#include "slsim/config.hpp"

#include <fmt/format.h>

#include <cerrno>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "slsim/coding/mcs.hpp"
#include "slsim/error.hpp"

namespace slsim::io {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

bool parse_bool(const std::string& v, const std::string& field) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("expected a boolean, got '" + v + "'", field);
}

std::size_t parse_count(const std::string& v, const std::string& field) {
  const auto n = parse_int(v, field);
  if (n < 0) throw ConfigError("must be non-negative", field);
  return static_cast<std::size_t>(n);
}

// Comma list; an item `a:b:step` expands to a..b inclusive.
std::vector<double> parse_double_list(const std::string& v, const std::string& field) {
  std::vector<double> out;
  for (const auto& item : split(v, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() == 1) {
      out.push_back(parse_double(parts[0], field));
      continue;
    }
    if (parts.size() != 3) throw ConfigError("expected value or start:stop:step, got '" + item + "'", field);
    const double a = parse_double(parts[0], field), b = parse_double(parts[1], field),
                 step = parse_double(parts[2], field);
    if (!(step > 0.0) || b < a) throw ConfigError("range needs start <= stop and a positive step", field);
    for (std::size_t i = 0;; ++i) {
      const double x = a + static_cast<double>(i) * step;
      if (x > b + 1e-9 * step) break;
      out.push_back(x);
    }
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& v, const std::string& field) {
  std::vector<int> out;
  for (const double d : parse_double_list(v, field)) {
    if (d != std::floor(d)) throw ConfigError("expected integers", field);
    out.push_back(static_cast<int>(d));
  }
  return out;
}

template <typename T>
std::string join(const std::vector<T>& v, auto fmt_one) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt_one(v[i]);
  return s;
}

std::string fmt_int(auto v) { return std::to_string(v); }
std::string fmt_bool(bool b) { return b ? "true" : "false"; }

struct Field {
  const char* key;
  std::function<void(ExperimentConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

#define SLSIM_DOUBLE(key, member)                                                                          \
  Field {                                                                                                  \
    key, [](ExperimentConfig& c, const std::string& v, const std::string& f) { c.member = parse_double(v, f); }, \
        [](const ExperimentConfig& c) { return format_double(c.member); }                                  \
  }
#define SLSIM_COUNT(key, member)                                                                           \
  Field {                                                                                                  \
    key, [](ExperimentConfig& c, const std::string& v, const std::string& f) { c.member = parse_count(v, f); }, \
        [](const ExperimentConfig& c) { return fmt_int(c.member); }                                        \
  }
#define SLSIM_INT(key, member, type)                                                                       \
  Field {                                                                                                  \
    key,                                                                                                   \
        [](ExperimentConfig& c, const std::string& v, const std::string& f) {                              \
          c.member = static_cast<type>(parse_int(v, f));                                                   \
        },                                                                                                 \
        [](const ExperimentConfig& c) { return fmt_int(c.member); }                                        \
  }
#define SLSIM_BOOL(key, member)                                                                            \
  Field {                                                                                                  \
    key, [](ExperimentConfig& c, const std::string& v, const std::string& f) { c.member = parse_bool(v, f); }, \
        [](const ExperimentConfig& c) { return fmt_bool(c.member); }                                       \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      {"scenario", [](ExperimentConfig& c, const std::string& v, const std::string&) { c.scenario = v; },
       [](const ExperimentConfig& c) { return c.scenario; }},
      {"master_seed",
       [](ExperimentConfig& c, const std::string& v, const std::string& f) {
         std::uint64_t s = 0;
         const auto r = std::from_chars(v.data(), v.data() + v.size(), s);
         if (r.ec != std::errc{} || r.ptr != v.data() + v.size()) throw ConfigError("expected an unsigned integer", f);
         c.master_seed = s;
       },
       [](const ExperimentConfig& c) { return fmt_int(c.master_seed); }},
      SLSIM_COUNT("trials", trials),
      SLSIM_COUNT("window_blocks", window_blocks),
      {"sweep.tx_power_dbm",
       [](ExperimentConfig& c, const std::string& v, const std::string& f) { c.tx_power_dbm = parse_double_list(v, f); },
       [](const ExperimentConfig& c) { return join(c.tx_power_dbm, format_double); }},
      {"sweep.mcs", [](ExperimentConfig& c, const std::string& v, const std::string& f) { c.mcs = parse_int_list(v, f); },
       [](const ExperimentConfig& c) { return join(c.mcs, [](int m) { return fmt_int(m); }); }},

      SLSIM_COUNT("grid.n_symbols", link.grid.n_symbols),
      SLSIM_COUNT("grid.sc_per_subchannel", link.grid.sc_per_subchannel),
      SLSIM_COUNT("grid.n_subchannels", link.grid.n_subchannels),
      {"grid.dmrs_symbols",
       [](ExperimentConfig& c, const std::string& v, const std::string& f) {
         c.link.grid.dmrs_symbols.clear();
         for (const int s : parse_int_list(v, f)) {
           if (s < 0) throw ConfigError("must be non-negative", f);
           c.link.grid.dmrs_symbols.push_back(static_cast<std::size_t>(s));
         }
       },
       [](const ExperimentConfig& c) { return join(c.link.grid.dmrs_symbols, [](std::size_t s) { return fmt_int(s); }); }},
      SLSIM_COUNT("grid.agc_symbol", link.grid.agc_symbol),
      SLSIM_COUNT("grid.guard_symbol", link.grid.guard_symbol),
      SLSIM_COUNT("grid.pscch_width_sc", link.grid.pscch_width_sc),

      SLSIM_COUNT("ofdm.fft_size", link.ofdm.fft_size),
      SLSIM_COUNT("ofdm.cp_len", link.ofdm.cp_len),
      SLSIM_DOUBLE("ofdm.subcarrier_spacing_hz", link.ofdm.subcarrier_spacing_hz),

      {"channel.model",
       [](ExperimentConfig& c, const std::string& v, const std::string&) {
         c.link.channel.model = channel::channel_model_from_string(v);
       },
       [](const ExperimentConfig& c) { return std::string(channel::to_string(c.link.channel.model)); }},
      SLSIM_DOUBLE("channel.doppler_hz", link.channel.doppler_hz),
      {"channel.taps",
       [](ExperimentConfig& c, const std::string& v, const std::string& f) {
         c.link.channel.taps.clear();
         for (const auto& item : split(v, ',')) {
           const auto parts = split(item, ':');
           if (parts.size() != 2) throw ConfigError("expected delay:power pairs, got '" + item + "'", f);
           channel::Tap t;
           t.delay_samples = parse_count(parts[0], f);
           t.power = parse_double(parts[1], f);
           c.link.channel.taps.push_back(t);
         }
       },
       [](const ExperimentConfig& c) {
         return join(c.link.channel.taps,
                     [](const channel::Tap& t) { return fmt_int(t.delay_samples) + ":" + format_double(t.power); });
       }},

      SLSIM_DOUBLE("impairments.cfo_hz", link.impairments.cfo_hz),
      SLSIM_BOOL("impairments.cfo_enabled", link.impairments.cfo_enabled),
      SLSIM_INT("impairments.timing_offset_samples", link.impairments.timing_offset_samples, long),
      SLSIM_BOOL("impairments.timing_enabled", link.impairments.timing_enabled),

      SLSIM_DOUBLE("calibration.gain_offset_db", link.calibration.gain_offset_db),

      SLSIM_COUNT("link.start_subchannel", link.alloc.start_subchannel),
      SLSIM_COUNT("link.n_subchannels", link.alloc.n_subchannels),
      SLSIM_INT("link.vehicle_id", link.vehicle_id, int),
      SLSIM_BOOL("rx.cfo_correction", link.rx.cfo_correction),
      {"rx.equalizer",
       [](ExperimentConfig& c, const std::string& v, const std::string& f) {
         if (v == "mmse")
           c.link.rx.equalizer = phy::EqualizerKind::mmse;
         else if (v == "zf" || v == "zero_forcing")
           c.link.rx.equalizer = phy::EqualizerKind::zero_forcing;
         else
           throw ConfigError("expected mmse or zf, got '" + v + "'", f);
       },
       [](const ExperimentConfig& c) {
         return std::string(c.link.rx.equalizer == phy::EqualizerKind::mmse ? "mmse" : "zf");
       }},

      SLSIM_DOUBLE("throughput.tx_power_dbm", throughput_tx_power_dbm),
      {"throughput.mcs",
       [](ExperimentConfig& c, const std::string& v, const std::string& f) { c.throughput_mcs = parse_int_list(v, f); },
       [](const ExperimentConfig& c) { return join(c.throughput_mcs, [](int m) { return fmt_int(m); }); }},

      SLSIM_DOUBLE("backoff.target_bler", target_bler),
      SLSIM_DOUBLE("backoff.log_floor", log_floor),

      SLSIM_COUNT("pool.n_subchannels", pool.n_subchannels),
      SLSIM_INT("pool.selection_period_ms", pool.selection_period_ms, int),
      SLSIM_COUNT("pool.sensing_window_ms", pool.sensing_window_ms),
      SLSIM_DOUBLE("pool.keep_fraction", pool.keep_fraction),
      SLSIM_DOUBLE("pool.rssi_threshold", pool.rssi_threshold),
      SLSIM_INT("pool.counter_min", pool.counter_min, int),
      SLSIM_INT("pool.counter_max", pool.counter_max, int),

      {"sps.policies",
       [](ExperimentConfig& c, const std::string& v, const std::string&) {
         c.sps_policies.clear();
         for (const auto& p : split(v, ',')) c.sps_policies.push_back(mac::policy_from_string(p));
       },
       [](const ExperimentConfig& c) {
         return join(c.sps_policies, [](mac::Policy p) { return std::string(mac::to_string(p)); });
       }},
      {"sps.loads",
       [](ExperimentConfig& c, const std::string& v, const std::string& f) { c.sps_loads = parse_double_list(v, f); },
       [](const ExperimentConfig& c) { return join(c.sps_loads, format_double); }},
      SLSIM_COUNT("sps.duration_ms", sps_duration_ms),
      SLSIM_DOUBLE("sps.link_snr_db", sps_link_snr_db),
      {"sps.mode",
       [](ExperimentConfig& c, const std::string& v, const std::string&) { c.sps_mode = mac::phy_mode_from_string(v); },
       [](const ExperimentConfig& c) { return std::string(mac::to_string(c.sps_mode)); }},
      SLSIM_COUNT("sps.grant_width", sps_grant_width),
      SLSIM_INT("sps.mcs", sps_mcs, int),

      SLSIM_INT("traffic.mcs", traffic_mcs, int),
      SLSIM_DOUBLE("traffic.tx_power_dbm", traffic_tx_power_dbm),
      SLSIM_COUNT("traffic.background_vehicles", traffic_background_vehicles),
      {"traffic.policy",
       [](ExperimentConfig& c, const std::string& v, const std::string&) { c.traffic_policy = mac::policy_from_string(v); },
       [](const ExperimentConfig& c) { return std::string(mac::to_string(c.traffic_policy)); }},
  };
  return table;
}

#undef SLSIM_DOUBLE
#undef SLSIM_COUNT
#undef SLSIM_INT
#undef SLSIM_BOOL

}  // namespace

std::string format_double(double v) { return fmt::format("{}", v); }

double parse_double(const std::string& text, const std::string& field) {
  const std::string t = trim(text);
  if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
  if (t == "-inf") return -std::numeric_limits<double>::infinity();
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE || std::isnan(v))
    throw ConfigError("expected a number, got '" + text + "'", field);
  return v;
}

long long parse_int(const std::string& text, const std::string& field) {
  const std::string t = trim(text);
  long long v = 0;
  const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || r.ec != std::errc{} || r.ptr != t.data() + t.size())
    throw ConfigError("expected an integer, got '" + text + "'", field);
  return v;
}

ConfigMap parse_config_text(const std::string& text) {
  ConfigMap map;
  std::istringstream in(text);
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(no) + ": empty key");
    map[key] = trim(line.substr(eq + 1));
  }
  return map;
}

ConfigMap load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file '" + path + "'", "config");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

void apply_override(ConfigMap& map, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not key=value", "--set");
  const std::string key = trim(assignment.substr(0, eq));
  if (key.empty()) throw ConfigError("override '" + assignment + "' has an empty key", "--set");
  map[key] = trim(assignment.substr(eq + 1));
}

void apply_scenario(ExperimentConfig& cfg, const std::string& name) {
  if (name == "ideal") {
    cfg.link.channel = channel::ChannelConfig{};
    cfg.link.channel.model = channel::ChannelModel::ideal;
    cfg.link.impairments = channel::ImpairmentConfig{};
  } else if (name == "awgn") {
    cfg.link.channel = channel::ChannelConfig{};
    cfg.link.impairments = channel::ImpairmentConfig{};
  } else if (name == "indoor_v2v") {
    cfg.link.channel = channel::ChannelConfig::indoor_v2v();
    cfg.link.impairments = channel::ImpairmentConfig::indoor_v2v();
  } else {
    throw ConfigError("unknown scenario '" + name + "' (ideal, awgn, indoor_v2v)", "scenario");
  }
  cfg.scenario = name;
}

void ExperimentConfig::validate() const {
  link.validate();
  if (tx_power_dbm.empty()) throw ConfigError("needs at least one power", "sweep.tx_power_dbm");
  if (mcs.empty()) throw ConfigError("needs at least one MCS", "sweep.mcs");
  for (const int m : mcs)
    if (m < 0 || m > coding::kMaxMcs) throw ConfigError("MCS " + std::to_string(m) + " out of range", "sweep.mcs");
  for (const int m : throughput_mcs)
    if (m < 0 || m > coding::kMaxMcs)
      throw ConfigError("MCS " + std::to_string(m) + " out of range", "throughput.mcs");
  if (trials < 1) throw ConfigError("must be at least 1", "trials");
  if (window_blocks < 1) throw ConfigError("must be at least 1", "window_blocks");
  if (!(target_bler > 0.0 && target_bler < 1.0)) throw ConfigError("must lie in (0, 1)", "backoff.target_bler");
  if (!(log_floor > 0.0 && log_floor < target_bler)) throw ConfigError("must lie in (0, target)", "backoff.log_floor");
  pool.validate();
  if (sps_policies.empty()) throw ConfigError("needs at least one policy", "sps.policies");
  for (const double l : sps_loads)
    if (!(l > 0.0)) throw ConfigError("loads must be positive", "sps.loads");
  if (sps_grant_width < 1 || sps_grant_width > pool.n_subchannels)
    throw ConfigError("must lie in [1, pool.n_subchannels]", "sps.grant_width");
  if (sps_mcs < 0 || sps_mcs > coding::kMaxMcs) throw ConfigError("out of range", "sps.mcs");
  if (traffic_mcs < 0 || traffic_mcs > coding::kMaxMcs) throw ConfigError("out of range", "traffic.mcs");
}

ExperimentConfig experiment_from_map(const ConfigMap& map) {
  ExperimentConfig cfg;
  if (const auto it = map.find("scenario"); it != map.end())
    apply_scenario(cfg, it->second);
  else
    apply_scenario(cfg, cfg.scenario);
  for (const auto& [key, value] : map) {
    if (key == "scenario" || key.rfind("manifest.", 0) == 0) continue;
    const auto& table = fields();
    const auto f = std::find_if(table.begin(), table.end(), [&](const Field& x) { return key == x.key; });
    if (f == table.end()) throw ConfigError("unknown key", key);
    f->set(cfg, value, key);
  }
  cfg.validate();
  return cfg;
}

std::string to_config_text(const ExperimentConfig& cfg) {
  std::string out;
  for (const auto& f : fields()) out += std::string(f.key) + " = " + f.get(cfg) + "\n";
  return out;
}

}  // namespace slsim::io
