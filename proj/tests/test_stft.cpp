// Copyright 2026 The dccrn-cpp Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "dccrn/stft.hpp"
#include "dccrn/synth.hpp"
#include "dccrn/targets.hpp"

using namespace dccrn;

namespace {
constexpr double kPi = 3.14159265358979323846;

std::vector<float> random_wave(Rng& rng, size_t len) {
  std::vector<float> w(len);
  for (auto& v : w) v = static_cast<float>(rng.uniform(-0.8, 0.8));
  return w;
}
}  // namespace

TEST_CASE("config defaults match the 16 kHz / 25 ms / 6.25 ms / 512 setup") {
  StftConfig c;
  CHECK(c.sample_rate == 16000);
  CHECK(c.win_len == 400);
  CHECK(c.hop == 100);
  CHECK(c.fft_len == 512);
  CHECK(c.bins() == 257);
}

TEST_CASE("non-overlap-add window/hop pair is rejected at construction") {
  StftConfig c;
  c.hop = 150;  // does not divide 400
  CHECK_THROWS_AS(StftTransform<float>{c}, DataError);
  StftConfig c2;
  c2.hop = 500;  // hop > win
  CHECK_THROWS_AS(StftTransform<float>{c2}, DataError);
}

TEST_CASE("all-zero wave gives an all-zero spectrogram") {
  StftTransform<float> stft{StftConfig{}};
  std::vector<float> wave(1600, 0.0f);
  auto spec = stft.analyze(wave);
  for (size_t i = 0; i < spec.bins.numel(); ++i) {
    CHECK(spec.bins.re[i] == 0.0f);
    CHECK(spec.bins.im[i] == 0.0f);
  }
}

TEST_CASE("1 kHz tone peaks at bin 32") {
  StftTransform<float> stft{StftConfig{}};
  std::vector<float> wave(16000);
  for (size_t i = 0; i < wave.size(); ++i) {
    wave[i] = static_cast<float>(std::sin(2.0 * kPi * 1000.0 * i / 16000.0));
  }
  auto spec = stft.analyze(wave);
  const size_t frames = spec.frames();
  for (size_t t = 0; t < frames; ++t) {
    size_t argmax = 0;
    double best = -1;
    for (size_t k = 0; k < spec.freq_bins(); ++k) {
      const double m = std::hypot(spec.bins.re[k * frames + t],
                                  spec.bins.im[k * frames + t]);
      if (m > best) {
        best = m;
        argmax = k;
      }
    }
    CHECK(argmax == 32);  // 1000/16000*512
  }
}

TEST_CASE("analyze matches a naive per-bin DFT loop") {
  Rng rng(3);
  StftConfig cfg;
  StftTransform<double> stft(cfg);
  std::vector<double> wave(2000);
  for (auto& v : wave) v = rng.uniform(-1, 1);
  ag::NoGradGuard guard;
  auto spec = stft.analyze(
      ag::constant(ComplexTensor<double>::from_real({1, wave.size()}, wave)));
  const size_t frames = spec->value.dim(2);
  const auto& win = stft.analysis_window();
  double peak = 0;
  for (double v : spec->value.re) peak = std::max(peak, std::abs(v));
  for (size_t t = 0; t < frames; ++t) {
    for (size_t k = 0; k < cfg.bins(); k += 17) {
      std::complex<double> acc(0, 0);
      for (int n = 0; n < cfg.win_len; ++n) {
        const double ang = -2.0 * kPi * k * n / cfg.fft_len;
        acc += wave[t * cfg.hop + n] * win[n] *
               std::complex<double>(std::cos(ang), std::sin(ang));
      }
      const double dr = spec->value.re[k * frames + t] - acc.real();
      const double di = spec->value.im[k * frames + t] - acc.imag();
      CHECK(std::abs(dr) <= 1e-5 * std::max(1.0, peak));
      CHECK(std::abs(di) <= 1e-5 * std::max(1.0, peak));
    }
  }
}

TEST_CASE("round-trip recovers the wave away from the edges") {
  Rng rng(4);
  StftTransform<float> stft{StftConfig{}};
  std::vector<float> wave = random_wave(rng, 16000);
  auto spec = stft.analyze(wave);
  std::vector<float> back = stft.synthesize(spec, wave.size());
  REQUIRE(back.size() == wave.size());
  float worst = 0;
  for (size_t i = 400; i + 400 < wave.size(); ++i) {
    worst = std::max(worst, std::abs(back[i] - wave[i]));
  }
  CHECK(worst <= 1e-5f);
}

TEST_CASE("round-trip SI-SNR on a speech-like wave is at least 60 dB") {
  Rng rng(5);
  StftTransform<float> stft{StftConfig{}};
  std::vector<float> wave = synth_tonal_speech(rng, 16000, 16000);
  auto spec = stft.analyze(wave);
  std::vector<float> back = stft.synthesize(spec, wave.size());
  std::vector<float> mid(back.begin() + 400, back.end() - 400);
  std::vector<float> ref(wave.begin() + 400, wave.end() - 400);
  CHECK(si_snr_db(mid, ref) >= 60.0);
}

TEST_CASE("analyze is linear") {
  Rng rng(6);
  StftTransform<float> stft{StftConfig{}};
  std::vector<float> x = random_wave(rng, 4000);
  std::vector<float> y = random_wave(rng, 4000);
  const float a = 0.7f, b = -1.3f;
  std::vector<float> mix(4000);
  for (size_t i = 0; i < mix.size(); ++i) mix[i] = a * x[i] + b * y[i];
  auto sx = stft.analyze(x);
  auto sy = stft.analyze(y);
  auto sm = stft.analyze(mix);
  double peak = 0;
  for (float v : sm.bins.re) peak = std::max(peak, std::abs((double)v));
  for (size_t i = 0; i < sm.bins.numel(); ++i) {
    CHECK(std::abs(sm.bins.re[i] - (a * sx.bins.re[i] + b * sy.bins.re[i])) <=
          1e-6 * std::max(1.0, peak));
    CHECK(std::abs(sm.bins.im[i] - (a * sx.bins.im[i] + b * sy.bins.im[i])) <=
          1e-6 * std::max(1.0, peak));
  }
}

TEST_CASE("frame count follows floor((len - win)/hop) + 1") {
  StftTransform<float> stft{StftConfig{}};
  CHECK(stft.frame_count(400) == 1);
  CHECK(stft.frame_count(499) == 1);
  CHECK(stft.frame_count(500) == 2);
  CHECK(stft.frame_count(16000) == 157);
  std::vector<float> wave(777, 0.1f);
  auto spec = stft.analyze(wave);
  CHECK(spec.frames() == (777 - 400) / 100 + 1);
}

TEST_CASE("wave shorter than one window becomes a single zero-padded frame") {
  StftTransform<float> stft{StftConfig{}};
  std::vector<float> wave(150, 0.5f);
  auto spec = stft.analyze(wave);
  CHECK(spec.frames() == 1);
  // equal to analyzing the explicitly padded wave
  std::vector<float> padded(400, 0.0f);
  std::copy(wave.begin(), wave.end(), padded.begin());
  auto spec2 = stft.analyze(padded);
  for (size_t i = 0; i < spec.bins.numel(); ++i) {
    CHECK(spec.bins.re[i] == spec2.bins.re[i]);
    CHECK(spec.bins.im[i] == spec2.bins.im[i]);
  }
}

TEST_CASE("non-finite samples are rejected") {
  StftTransform<float> stft{StftConfig{}};
  std::vector<float> wave(500, 0.0f);
  wave[100] = std::numeric_limits<float>::quiet_NaN();
  CHECK_THROWS_AS(stft.analyze(wave), DataError);
}

TEST_CASE("Parseval-style energy consistency per frame") {
  Rng rng(7);
  StftConfig cfg;
  StftTransform<double> stft(cfg);
  std::vector<double> wave(1200);
  for (auto& v : wave) v = rng.uniform(-1, 1);
  ag::NoGradGuard guard;
  auto spec = stft.analyze(
      ag::constant(ComplexTensor<double>::from_real({1, wave.size()}, wave)));
  const size_t frames = spec->value.dim(2);
  const size_t freq = cfg.bins();
  const auto& win = stft.analysis_window();
  for (size_t t = 0; t < frames; ++t) {
    double time_energy = 0;
    for (int n = 0; n < cfg.win_len; ++n) {
      const double v = wave[t * cfg.hop + n] * win[n];
      time_energy += v * v;
    }
    // one-sided accounting: DC and Nyquist once, everything else twice
    double spec_energy = 0;
    for (size_t k = 0; k < freq; ++k) {
      const double re = spec->value.re[k * frames + t];
      const double im = spec->value.im[k * frames + t];
      const double w2 = (k == 0 || k == freq - 1) ? 1.0 : 2.0;
      spec_energy += w2 * (re * re + im * im);
    }
    spec_energy /= cfg.fft_len;
    CHECK(spec_energy ==
          doctest::Approx(time_energy).epsilon(1e-6));
  }
}

TEST_CASE("DC removal and restoration") {
  Rng rng(8);
  StftTransform<float> stft{StftConfig{}};
  std::vector<float> wave = random_wave(rng, 2000);
  auto spec = stft.analyze(wave);
  CHECK(spec.freq_bins() == 257);
  auto cut = stft.remove_dc(spec);
  CHECK(cut.freq_bins() == 256);
  auto restored = stft.restore_dc(cut);
  CHECK(restored.freq_bins() == 257);
  const size_t frames = spec.frames();
  for (size_t t = 0; t < frames; ++t) {
    CHECK(restored.bins.re[t] == 0.0f);  // zeroed DC row
    CHECK(restored.bins.im[t] == 0.0f);
  }
  for (size_t k = 1; k < 257; ++k) {
    for (size_t t = 0; t < frames; ++t) {
      CHECK(restored.bins.re[k * frames + t] == spec.bins.re[k * frames + t]);
      CHECK(restored.bins.im[k * frames + t] == spec.bins.im[k * frames + t]);
    }
  }
}

TEST_CASE("remove_dc requires at least two bins") {
  ComplexTensor<float> tiny({1, 1, 5});
  CHECK_THROWS_AS(StftTransform<float>::remove_dc(ag::constant(tiny)),
                  ShapeError);
}

TEST_CASE("round-trip of a DC-free signal unaffected by remove/restore") {
  // frames constructed to have exactly zero windowed mean
  Rng rng(9);
  StftTransform<double> stft{StftConfig{}};
  const size_t len = 2000;
  std::vector<double> wave(len);
  for (size_t i = 0; i < len; ++i) {
    wave[i] = std::sin(2.0 * kPi * 800.0 * i / 16000.0) * rng.uniform(0.5, 1.0);
  }
  ag::NoGradGuard guard;
  auto wv = ag::constant(ComplexTensor<double>::from_real({1, len}, wave));
  auto spec = stft.analyze(wv);
  // force the DC row to zero so the signal is exactly DC-free
  ComplexTensor<double> bins = spec->value;
  const size_t frames = bins.dim(2);
  for (size_t t = 0; t < frames; ++t) {
    bins.re[t] = 0;
    bins.im[t] = 0;
  }
  auto base = ag::constant(bins);
  auto direct = stft.synthesize(base, len);
  auto via_dc = stft.synthesize(
      StftTransform<double>::restore_dc(StftTransform<double>::remove_dc(base)),
      len);
  for (size_t i = 0; i < len; ++i) {
    CHECK(std::abs(direct->value.re[i] - via_dc->value.re[i]) <= 1e-12);
  }
}
