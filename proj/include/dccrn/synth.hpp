// Copyright 2026 The dccrn-cpp Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <vector>

#include "dccrn/common.hpp"

namespace dccrn {

// Deterministic synthetic test signals used by the verification command,
// benchmarks, and the toy training corpus.

/// Harmonic "voice": a few harmonics on a drifting fundamental with a slow
/// amplitude envelope.
std::vector<float> synth_tonal_speech(Rng& rng, size_t len, int sample_rate);

/// Linear chirp sweep with random start/end frequencies.
std::vector<float> synth_chirp(Rng& rng, size_t len, int sample_rate);

std::vector<float> synth_white_noise(Rng& rng, size_t len, double amplitude);

/// Babble-like noise: many detuned drifting tones plus a low-pass noise bed.
std::vector<float> synth_babble_noise(Rng& rng, size_t len, int sample_rate);

}  // namespace dccrn
