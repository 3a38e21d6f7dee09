// Copyright 2026 The dccrn-cpp Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dccrn/mixer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace dccrn {

Mixture mix_at_snr(const AudioClip& speech, const AudioClip& noise,
                   double snr_db, size_t noise_offset) {
  validate_clip(speech, "mix_at_snr(speech)", speech.sample_rate);
  validate_clip(noise, "mix_at_snr(noise)", noise.sample_rate);
  const double speech_rms = speech.rms();
  const double noise_rms = noise.rms();
  if (speech_rms == 0.0) throw DataError("mix_at_snr: speech is silent");
  if (noise_rms == 0.0) throw DataError("mix_at_snr: noise is silent");

  const size_t n = speech.samples.size();
  // Tile noise circularly when shorter than speech.
  std::vector<float> noise_fit(n);
  const size_t nn = noise.samples.size();
  for (size_t i = 0; i < n; ++i) {
    noise_fit[i] = noise.samples[(noise_offset + i) % nn];
  }
  // Re-measure after tiling so the requested SNR is met exactly.
  double fit_acc = 0.0;
  for (float v : noise_fit) fit_acc += static_cast<double>(v) * v;
  const double fit_rms = std::sqrt(fit_acc / n);
  if (fit_rms == 0.0) throw DataError("mix_at_snr: noise segment is silent");

  const double alpha =
      speech_rms / (fit_rms * std::pow(10.0, snr_db / 20.0));

  Mixture out;
  out.clean = speech;
  out.mixture.sample_rate = speech.sample_rate;
  out.mixture.samples.resize(n);
  float peak = 0.0f;
  for (size_t i = 0; i < n; ++i) {
    const float v =
        speech.samples[i] + static_cast<float>(alpha) * noise_fit[i];
    out.mixture.samples[i] = v;
    peak = std::max(peak, std::abs(v));
  }
  if (peak > 1.0f) {
    // Joint normalization keeps mixture - clean proportional to the noise.
    const float g = 1.0f / peak;
    for (size_t i = 0; i < n; ++i) {
      out.mixture.samples[i] *= g;
      out.clean.samples[i] *= g;
    }
  }
  return out;
}

AudioClip convolve_rir(const AudioClip& speech, const AudioClip& rir) {
  if (rir.samples.empty()) throw DataError("convolve_rir: empty RIR");
  if (rir.samples.size() >= speech.samples.size()) {
    throw DataError("convolve_rir: RIR (" +
                    std::to_string(rir.samples.size()) +
                    " samples) must be shorter than the signal (" +
                    std::to_string(speech.samples.size()) + ")");
  }
  const size_t n = speech.samples.size();
  const size_t k = rir.samples.size();
  AudioClip out;
  out.sample_rate = speech.sample_rate;
  out.samples.assign(n, 0.0f);
  for (size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    const size_t kmax = std::min(k, i + 1);
    for (size_t j = 0; j < kmax; ++j) {
      acc += static_cast<double>(speech.samples[i - j]) * rir.samples[j];
    }
    out.samples[i] = static_cast<float>(acc);
  }
  const float in_peak = speech.peak();
  const float out_peak = out.peak();
  if (out_peak > 0.0f && in_peak > 0.0f) {
    const float g = in_peak / out_peak;
    for (float& v : out.samples) v *= g;
  }
  return out;
}

std::vector<std::string> read_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("manifest: cannot open list file '" + path + "'");
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
      line.pop_back();
    }
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

Manifest Manifest::load(const std::string& speech_list,
                        const std::string& noise_list,
                        const std::string& rir_list) {
  Manifest m;
  m.speech = read_list_file(speech_list);
  m.noise = read_list_file(noise_list);
  if (!rir_list.empty()) m.rirs = read_list_file(rir_list);
  if (m.speech.empty()) throw DataError("manifest: speech list is empty");
  if (m.noise.empty()) throw DataError("manifest: noise list is empty");
  return m;
}

DynamicMixer::DynamicMixer(Manifest manifest, uint64_t epoch_seed, Options opts)
    : manifest_(std::move(manifest)), opts_(opts), rng_(epoch_seed) {}

std::optional<Mixture> DynamicMixer::next() {
  while (emitted_ < epoch_size_) {
    // Draw everything up front so a skipped clip still consumes one
    // deterministic draw sequence position.
    const size_t si = rng_.uniform_index(manifest_.speech.size());
    const size_t ni = rng_.uniform_index(manifest_.noise.size());
    const double snr = rng_.uniform(opts_.snr_lo, opts_.snr_hi);
    size_t rir_s = 0, rir_n = 0;
    if (!manifest_.rirs.empty()) {
      rir_s = rng_.uniform_index(manifest_.rirs.size());
      rir_n = rng_.uniform_index(manifest_.rirs.size());
    }
    const uint64_t offset_draw = rng_.next_u64();
    try {
      AudioClip speech = read_wav(manifest_.speech[si]);
      AudioClip noise = read_wav(manifest_.noise[ni]);
      validate_clip(speech, manifest_.speech[si]);
      validate_clip(noise, manifest_.noise[ni]);
      if (!manifest_.rirs.empty()) {
        if (opts_.rir_on_speech) {
          AudioClip rir = read_wav(manifest_.rirs[rir_s]);
          speech = convolve_rir(speech, rir);
        }
        if (opts_.rir_on_noise) {
          AudioClip rir = read_wav(manifest_.rirs[rir_n]);
          noise = convolve_rir(noise, rir);
        }
      }
      if (opts_.fixed_len > 0) {
        speech.samples.resize(opts_.fixed_len, 0.0f);
      }
      const size_t offset = offset_draw % noise.samples.size();
      Mixture mix = mix_at_snr(speech, noise, snr, offset);
      last_snr_ = snr;
      ++emitted_;
      return mix;
    } catch (const DataError& e) {
      ++skipped_;
      LOG_WARN("dynamic mixer: skipping draw (" << e.what() << "), "
               << skipped_ << " skipped so far");
      if (skipped_ > 1000 && emitted_ == 0) {
        throw DataError("dynamic mixer: no usable clips in manifest");
      }
    }
  }
  return std::nullopt;
}

}  // namespace dccrn
