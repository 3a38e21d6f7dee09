// Copyright 2026 The dccrn-cpp Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dccrn/synth.hpp"

#include <cmath>

namespace dccrn {

namespace {
constexpr double kTwoPi = 6.283185307179586;
}

std::vector<float> synth_tonal_speech(Rng& rng, size_t len, int sample_rate) {
  std::vector<float> out(len, 0.0f);
  const double f0 = rng.uniform(100.0, 320.0);
  const double drift = rng.uniform(-30.0, 30.0);  // Hz over the whole clip
  const int harmonics = 2 + static_cast<int>(rng.uniform_index(3));
  const double env_rate = rng.uniform(1.5, 5.0);
  const double env_phase = rng.uniform(0.0, kTwoPi);
  std::vector<double> amps(harmonics), phases(harmonics);
  for (int h = 0; h < harmonics; ++h) {
    amps[h] = rng.uniform(0.3, 1.0) / (h + 1);
    phases[h] = rng.uniform(0.0, kTwoPi);
  }
  double norm = 0.0;
  for (double a : amps) norm += a;
  for (size_t i = 0; i < len; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    const double inst_f0 = f0 + drift * t;
    const double env =
        0.55 + 0.45 * std::sin(kTwoPi * env_rate * t + env_phase);
    double v = 0.0;
    for (int h = 0; h < harmonics; ++h) {
      v += amps[h] * std::sin(kTwoPi * inst_f0 * (h + 1) * t + phases[h]);
    }
    out[i] = static_cast<float>(0.6 * env * v / norm);
  }
  return out;
}

std::vector<float> synth_chirp(Rng& rng, size_t len, int sample_rate) {
  std::vector<float> out(len);
  const double f_start = rng.uniform(200.0, 1200.0);
  const double f_end = rng.uniform(400.0, 3500.0);
  const double amp = rng.uniform(0.3, 0.6);
  const double dur = static_cast<double>(len) / sample_rate;
  for (size_t i = 0; i < len; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    const double f = f_start + (f_end - f_start) * t / (2.0 * dur);
    out[i] = static_cast<float>(amp * std::sin(kTwoPi * f * t));
  }
  return out;
}

std::vector<float> synth_white_noise(Rng& rng, size_t len, double amplitude) {
  std::vector<float> out(len);
  for (size_t i = 0; i < len; ++i) {
    out[i] = static_cast<float>(amplitude * rng.normal());
  }
  return out;
}

std::vector<float> synth_babble_noise(Rng& rng, size_t len, int sample_rate) {
  std::vector<float> out(len, 0.0f);
  const int voices = 8;
  for (int v = 0; v < voices; ++v) {
    const double f = rng.uniform(120.0, 900.0);
    const double drift = rng.uniform(-80.0, 80.0);
    const double amp = rng.uniform(0.05, 0.15);
    const double phase = rng.uniform(0.0, kTwoPi);
    const double am = rng.uniform(2.0, 9.0);
    for (size_t i = 0; i < len; ++i) {
      const double t = static_cast<double>(i) / sample_rate;
      const double env = 0.5 + 0.5 * std::sin(kTwoPi * am * t + phase);
      out[i] += static_cast<float>(
          amp * env * std::sin(kTwoPi * (f + drift * t) * t + phase));
    }
  }
  // low-pass noise bed: one-pole smoothing of white noise
  double state = 0.0;
  for (size_t i = 0; i < len; ++i) {
    state = 0.96 * state + 0.04 * rng.normal();
    out[i] += static_cast<float>(0.6 * state);
  }
  return out;
}

}  // namespace dccrn
