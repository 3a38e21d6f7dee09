// Copyright 2026 The dccrn-cpp Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <vector>

#include "dccrn/autograd.hpp"
#include "dccrn/tensor.hpp"

namespace dccrn {

struct StftConfig {
  enum class Window { kSqrtHann, kHann, kRect };

  int sample_rate = 16000;
  int win_len = 400;  // 25 ms
  int hop = 100;      // 6.25 ms
  int fft_len = 512;
  Window window = Window::kSqrtHann;

  size_t bins() const { return static_cast<size_t>(fft_len) / 2 + 1; }
};

/// [F x T] complex time-frequency representation of a mono waveform.
template <typename S>
struct ComplexSpectrogram {
  ComplexTensor<S> bins;  // [F x T]
  StftConfig config;

  size_t freq_bins() const { return bins.dim(0); }
  size_t frames() const { return bins.dim(1); }
};

/// Analysis/synthesis between waveforms and complex spectrograms, realized
/// as fixed strided convolutions whose kernels are the windowed DFT basis.
/// Kernels are built in double precision and cast to the run precision.
///
/// Framing: no center padding; frame t covers samples [t*hop, t*hop+win).
/// A wave shorter than one window is zero-padded to a single frame.
template <typename S>
class StftTransform {
 public:
  explicit StftTransform(const StftConfig& config = StftConfig());

  const StftConfig& config() const { return config_; }
  size_t bins() const { return config_.bins(); }

  size_t frame_count(size_t len) const {
    const size_t win = config_.win_len, hop = config_.hop;
    if (len < win) return 1;
    return (len - win) / hop + 1;
  }

  /// Smallest frame-aligned length >= max(len, win_len).
  size_t padded_len(size_t len) const {
    const size_t win = config_.win_len, hop = config_.hop;
    if (len <= win) return win;
    const size_t rem = (len - win) % hop;
    return rem == 0 ? len : len + hop - rem;
  }

  // Batched differentiable paths. wave [B x L] -> spec [B x F x T].
  ag::Var<S> analyze(const ag::Var<S>& wave) const;
  ag::Var<S> synthesize(const ag::Var<S>& spec, size_t out_len) const;

  ComplexSpectrogram<S> analyze(const std::vector<S>& wave) const;
  /// out_len 0 means the natural overlap-add length (T-1)*hop + win.
  std::vector<S> synthesize(const ComplexSpectrogram<S>& spec,
                            size_t out_len = 0) const;

  // DC-bin handling: the network never sees bin 0; synthesis restores a
  // zero DC row.
  static ag::Var<S> remove_dc(const ag::Var<S>& spec);
  static ag::Var<S> restore_dc(const ag::Var<S>& spec);
  ComplexSpectrogram<S> remove_dc(const ComplexSpectrogram<S>& spec) const;
  ComplexSpectrogram<S> restore_dc(const ComplexSpectrogram<S>& spec) const;

  const std::vector<double>& analysis_window() const { return window_; }
  /// Overlap-add constant the synthesis path divides by.
  double cola_constant() const { return cola_; }

 private:
  StftConfig config_;
  std::vector<double> window_;
  double cola_ = 0.0;
  // [win x 2F]: frame row-vector times kernel yields (re | im) bins.
  ag::Var<S> analysis_kernel_;
  // [2F x win]: (re | im) bins times kernel yields the windowed,
  // normalization-folded time frame.
  ag::Var<S> synthesis_kernel_;
};

}  // namespace dccrn
