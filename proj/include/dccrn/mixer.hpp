// Copyright 2026 The dccrn-cpp Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dccrn/audio.hpp"
#include "dccrn/common.hpp"

namespace dccrn {

struct MixtureRecipe {
  std::string speech_path;
  std::string noise_path;
  std::optional<std::string> rir_speech;
  std::optional<std::string> rir_noise;
  double snr_db = 0.0;
  uint64_t seed = 0;
};

struct Mixture {
  AudioClip mixture;
  AudioClip clean;
};

/// Scales noise to the requested SNR (plain RMS over the whole clip) and
/// adds it to speech. If the sum clips, mixture and reference are peak
/// normalized jointly so the oracle mask relation is preserved.
/// Noise shorter than speech is tiled with the given circular offset.
Mixture mix_at_snr(const AudioClip& speech, const AudioClip& noise,
                   double snr_db, size_t noise_offset = 0);

/// Full FIR convolution truncated to the input length, peak-matched to the
/// dry input.
AudioClip convolve_rir(const AudioClip& speech, const AudioClip& rir);

/// Manifest: three list files (one relative path per line). The RIR list
/// is optional.
struct Manifest {
  std::vector<std::string> speech;
  std::vector<std::string> noise;
  std::vector<std::string> rirs;

  static Manifest load(const std::string& speech_list,
                       const std::string& noise_list,
                       const std::string& rir_list = "");
};

std::vector<std::string> read_list_file(const std::string& path);

/// Seeded dynamic-mixing iterator: every epoch draws fresh
/// (speech, noise, RIR, SNR) combinations; the same epoch seed reproduces
/// the identical stream bit for bit. Unreadable clips are skipped with a
/// warning counter.
class DynamicMixer {
 public:
  struct Options {
    double snr_lo = -5.0;
    double snr_hi = 20.0;
    // Independent RIR draws for speech and noise (both optional).
    bool rir_on_speech = true;
    bool rir_on_noise = true;
    // Crop/pad every emitted pair to this many samples (0 = keep speech length).
    size_t fixed_len = 0;
  };

  DynamicMixer(Manifest manifest, uint64_t epoch_seed, Options opts);
  DynamicMixer(Manifest manifest, uint64_t epoch_seed)
      : DynamicMixer(std::move(manifest), epoch_seed, Options()) {}

  /// Next (mixture, clean) pair; nullopt once `count` draws were emitted
  /// when a count was set via set_epoch_size.
  std::optional<Mixture> next();

  void set_epoch_size(size_t n) { epoch_size_ = n; }
  size_t emitted() const { return emitted_; }
  size_t skipped() const { return skipped_; }
  /// The SNR drawn for the most recent pair.
  double last_snr() const { return last_snr_; }

 private:
  Manifest manifest_;
  Options opts_;
  Rng rng_;
  size_t epoch_size_ = SIZE_MAX;
  size_t emitted_ = 0;
  size_t skipped_ = 0;
  double last_snr_ = 0.0;
};

}  // namespace dccrn
