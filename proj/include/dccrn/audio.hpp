// Copyright 2026 The dccrn-cpp Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <string>
#include <vector>

#include "dccrn/common.hpp"

namespace dccrn {

/// Mono float waveform in [-1, 1] with its sample rate.
struct AudioClip {
  std::vector<float> samples;
  int sample_rate = 16000;

  double rms() const;
  float peak() const;
};

enum class WavEncoding { kPcm16, kFloat32 };

/// Reads a RIFF/WAVE file. Accepts 16-bit PCM and 32-bit float, mono.
/// Rejects anything else with an error naming the offending property.
AudioClip read_wav(const std::string& path);

void write_wav(const std::string& path, const AudioClip& clip,
               WavEncoding encoding = WavEncoding::kFloat32);

/// Validates the 16 kHz mono contract used across the pipeline.
void validate_clip(const AudioClip& clip, const std::string& context,
                   int expected_rate = 16000);

}  // namespace dccrn
