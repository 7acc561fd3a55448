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

#include "slsim/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "slsim/error.hpp"

namespace slsim::channel {

const char* to_string(ChannelModel m) {
  switch (m) {
    case ChannelModel::ideal:
      return "ideal";
    case ChannelModel::awgn:
      return "awgn";
    case ChannelModel::rayleigh_flat:
      return "rayleigh_flat";
    case ChannelModel::rayleigh_tdl:
      return "rayleigh_tdl";
  }
  return "?";
}

ChannelModel channel_model_from_string(const std::string& name) {
  if (name == "ideal") return ChannelModel::ideal;
  if (name == "awgn") return ChannelModel::awgn;
  if (name == "rayleigh_flat") return ChannelModel::rayleigh_flat;
  if (name == "rayleigh_tdl") return ChannelModel::rayleigh_tdl;
  throw ConfigError("unknown channel model '" + name + "'", "channel.model");
}

void ChannelConfig::validate(std::size_t cp_len) const {
  if (!(doppler_hz >= 0.0)) throw ConfigError("must be non-negative", "channel.doppler_hz");
  if (model != ChannelModel::rayleigh_tdl) return;
  if (taps.empty()) throw ConfigError("tapped-delay-line model needs at least one tap", "channel.taps");
  double total = 0.0;
  for (const auto& t : taps) {
    if (t.delay_samples >= cp_len)
      throw ConfigError("tap delay " + std::to_string(t.delay_samples) + " not below CP length " +
                            std::to_string(cp_len),
                        "channel.taps");
    if (!(t.power >= 0.0)) throw ConfigError("tap power must be non-negative", "channel.taps");
    total += t.power;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ConfigError("tap powers must sum to 1", "channel.taps");
}

std::vector<Tap> ChannelConfig::effective_taps() const {
  if (model == ChannelModel::rayleigh_tdl) return taps;
  return {{0, 1.0}};
}

ChannelConfig ChannelConfig::indoor_v2v() {
  ChannelConfig c;
  c.model = ChannelModel::rayleigh_tdl;
  c.doppler_hz = 60.0;
  c.taps = {{0, 0.7}, {4, 0.2}, {9, 0.1}};
  return c;
}

void ImpairmentConfig::validate(std::size_t cp_len) const {
  if (timing_enabled && static_cast<std::size_t>(std::labs(timing_offset_samples)) >= cp_len)
    throw ConfigError("timing offset must stay inside the cyclic prefix", "impairments.timing_offset_samples");
}

ImpairmentConfig ImpairmentConfig::indoor_v2v() {
  ImpairmentConfig i;
  i.cfo_hz = 300.0;
  i.cfo_enabled = true;
  return i;
}

FadingChannel::FadingChannel(const ChannelConfig& cfg, double sample_rate, std::size_t cp_len)
    : cfg_(cfg), sample_rate_(sample_rate), taps_(cfg.effective_taps()) {
  cfg_.validate(cp_len);
  if (!cfg_.fades()) return;
  Rng rng(cfg_.seed);
  std::uniform_real_distribution<double> uniform(-std::numbers::pi, std::numbers::pi);
  // Complex Gaussian weights of variance 1/M per sinusoid make every marginal
  // exactly complex Gaussian; the angle offset theta0 randomises the arrival
  // directions so the ensemble autocorrelation is J0(2 pi f_d tau).
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5 / kSinusoids));
  sinusoids_.resize(taps_.size());
  for (std::size_t t = 0; t < taps_.size(); ++t) {
    const double theta0 = uniform(rng);
    const double amp = std::sqrt(taps_[t].power);
    for (std::size_t k = 0; k < kSinusoids; ++k) {
      const double alpha = (2.0 * std::numbers::pi * static_cast<double>(k) + theta0) / kSinusoids;
      const double re = normal(rng);
      const double im = normal(rng);
      sinusoids_[t].push_back({cplx(re, im) * amp, cfg_.doppler_hz * std::cos(alpha)});
    }
  }
}

cplx FadingChannel::tap_gain(std::size_t tap, double t_seconds) const {
  if (!cfg_.fades()) return tap == 0 ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
  cplx g{0.0, 0.0};
  for (const auto& s : sinusoids_[tap]) g += s.weight * std::polar(1.0, 2.0 * std::numbers::pi * s.doppler_hz * t_seconds);
  return g;
}

Samples FadingChannel::apply(std::span<const cplx> in, std::int64_t time_origin, ChannelTrace* trace) const {
  const std::size_t n = in.size();
  if (!cfg_.fades()) {
    if (trace) {
      trace->taps = {{0, 1.0}};
      trace->gains.assign(1, std::vector<cplx>(n, cplx(1.0, 0.0)));
    }
    return Samples(in.begin(), in.end());
  }

  Samples out(n, cplx(0.0, 0.0));
  if (trace) {
    trace->taps = taps_;
    trace->gains.assign(taps_.size(), std::vector<cplx>(n));
  }
  const double t0 = static_cast<double>(time_origin) / sample_rate_;
  std::vector<cplx> gain(n);
  constexpr std::size_t L = kKnotSpacing;
  const std::size_t n_knots = (n + L - 1) / L + 1;
  std::vector<cplx> knots(n_knots);
  for (std::size_t t = 0; t < taps_.size(); ++t) {
    // exact gains every L samples, linear in between; the curvature error is
    // about (2 pi f_d L / fs)^2 / 8 of the tap amplitude
    std::fill(knots.begin(), knots.end(), cplx(0.0, 0.0));
    for (const auto& s : sinusoids_[t]) {
      const double w = 2.0 * std::numbers::pi * s.doppler_hz;
      cplx p = s.weight * std::polar(1.0, w * t0);
      const cplx jump = std::polar(1.0, w * static_cast<double>(L) / sample_rate_);
      for (std::size_t b = 0; b < n_knots; ++b) {
        knots[b] += p;
        p *= jump;
      }
    }
    for (std::size_t b = 0; b + 1 < n_knots; ++b) {
      const cplx g0 = knots[b];
      const cplx step = (knots[b + 1] - g0) / static_cast<double>(L);
      const std::size_t end = std::min(n, (b + 1) * L);
      for (std::size_t i = b * L, j = 0; i < end; ++i, ++j) gain[i] = g0 + static_cast<double>(j) * step;
    }
    const std::size_t d = taps_[t].delay_samples;
    for (std::size_t i = d; i < n; ++i) out[i] += gain[i] * in[i - d];
    if (trace) trace->gains[t] = gain;
  }
  return out;
}

ChannelOutput apply_channel(std::span<const cplx> samples, const ChannelConfig& cfg, double sample_rate,
                            std::size_t cp_len, std::int64_t time_origin) {
  const FadingChannel ch(cfg, sample_rate, cp_len);
  ChannelOutput out;
  out.samples = ch.apply(samples, time_origin, &out.trace);
  return out;
}

void add_awgn(std::span<cplx> samples, double snr_db, double reference_power, Rng& rng) {
  if (std::isinf(snr_db) && snr_db > 0) return;
  const double var = reference_power / std::pow(10.0, snr_db / 10.0);
  std::normal_distribution<double> normal(0.0, std::sqrt(var / 2.0));
  for (auto& s : samples) {
    const double re = normal(rng);
    const double im = normal(rng);
    s += cplx(re, im);
  }
}

void apply_cfo(std::span<cplx> samples, double cfo_hz, double sample_rate) {
  if (cfo_hz == 0.0) return;
  const double w = 2.0 * std::numbers::pi * cfo_hz / sample_rate;
  // exact phase every 64 samples, recursion in between
  const cplx step = std::polar(1.0, w);
  for (std::size_t start = 0; start < samples.size(); start += 64) {
    cplx rot = std::polar(1.0, w * static_cast<double>(start));
    const std::size_t end = std::min(samples.size(), start + 64);
    for (std::size_t i = start; i < end; ++i) {
      samples[i] *= rot;
      rot *= step;
    }
  }
}

Samples apply_timing_offset(std::span<const cplx> samples, long offset) {
  const auto n = static_cast<long>(samples.size());
  Samples out(samples.size());
  if (n == 0) return out;
  for (long i = 0; i < n; ++i) {
    long src = (i - offset) % n;
    if (src < 0) src += n;
    out[static_cast<std::size_t>(i)] = samples[static_cast<std::size_t>(src)];
  }
  return out;
}

}  // namespace slsim::channel
