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

// Stochastic stand-in for the over-the-air link: tapped-delay-line fading
// with a sum-of-sinusoids Doppler process, AWGN, carrier frequency offset
// and timing offset, plus the transmit-power to SNR calibration.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "slsim/random.hpp"
#include "slsim/types.hpp"

namespace slsim::channel {

enum class ChannelModel { ideal, awgn, rayleigh_flat, rayleigh_tdl };

const char* to_string(ChannelModel m);
/// Throws ConfigError for unknown names.
ChannelModel channel_model_from_string(const std::string& name);

struct Tap {
  std::size_t delay_samples = 0;
  double power = 1.0;  // fraction of total mean power
};

struct ChannelConfig {
  ChannelModel model = ChannelModel::awgn;
  double doppler_hz = 0.0;
  std::vector<Tap> taps{{0, 1.0}};
  std::uint64_t seed = 1;

  /// Throws ConfigError for delays not below the CP or powers not summing to 1.
  void validate(std::size_t cp_len) const;

  bool fades() const { return model == ChannelModel::rayleigh_flat || model == ChannelModel::rayleigh_tdl; }
  bool adds_noise() const { return model != ChannelModel::ideal; }

  /// Taps actually used: a single unit tap for the flat model.
  std::vector<Tap> effective_taps() const;

  /// Three taps at 0/4/9 samples with powers 0.7/0.2/0.1 and 60 Hz Doppler.
  static ChannelConfig indoor_v2v();
};

struct ImpairmentConfig {
  double cfo_hz = 0.0;
  long timing_offset_samples = 0;
  bool cfo_enabled = false;
  bool timing_enabled = false;

  void validate(std::size_t cp_len) const;

  /// 300 Hz CFO, no timing offset.
  static ImpairmentConfig indoor_v2v();
};

/// SNR_dB = tx_power_dbm + gain_offset_db.
struct PowerCalibration {
  double gain_offset_db = 18.0;
  double snr_db(double tx_power_dbm) const { return tx_power_dbm + gain_offset_db; }
};

/// True complex gain of every tap at every output sample: gains[tap][sample].
struct ChannelTrace {
  std::vector<Tap> taps;
  std::vector<std::vector<cplx>> gains;
};

/// One link's fading process. Tap gains are a deterministic function of
/// absolute time once constructed, so consecutive subframes see a
/// continuous Doppler evolution.
class FadingChannel {
 public:
  static constexpr std::size_t kSinusoids = 16;

  FadingChannel(const ChannelConfig& cfg, double sample_rate, std::size_t cp_len);

  /// Convolves `in` with the time-varying taps. `time_origin` is the absolute
  /// sample index of in[0]. Gains are exact every 32 samples and linearly
  /// interpolated in between; the trace holds the gains actually applied.
  Samples apply(std::span<const cplx> in, std::int64_t time_origin, ChannelTrace* trace = nullptr) const;

  /// Tap gain at absolute time `t_seconds`.
  cplx tap_gain(std::size_t tap, double t_seconds) const;

  const ChannelConfig& config() const { return cfg_; }
  const std::vector<Tap>& taps() const { return taps_; }

 private:
  struct Sinusoid {
    cplx weight;
    double doppler_hz;  // f_d cos(alpha_k)
  };
  ChannelConfig cfg_;
  double sample_rate_;
  std::vector<Tap> taps_;
  static constexpr std::size_t kKnotSpacing = 32;
  std::vector<std::vector<Sinusoid>> sinusoids_;  // per tap
};

struct ChannelOutput {
  Samples samples;
  ChannelTrace trace;
};

/// One-shot form of FadingChannel::apply returning the true tap trace.
ChannelOutput apply_channel(std::span<const cplx> samples, const ChannelConfig& cfg, double sample_rate,
                            std::size_t cp_len, std::int64_t time_origin);

/// Adds complex Gaussian noise of variance reference_power / 10^(snr_db/10).
/// An infinite SNR leaves the samples untouched.
void add_awgn(std::span<cplx> samples, double snr_db, double reference_power, Rng& rng);

/// Multiplies sample n by exp(j 2 pi cfo n / fs).
void apply_cfo(std::span<cplx> samples, double cfo_hz, double sample_rate);

/// Circular shift by `offset` samples; positive delays the signal.
Samples apply_timing_offset(std::span<const cplx> samples, long offset);

}  // namespace slsim::channel
