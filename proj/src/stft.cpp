// Copyright 2026 The dccrn-cpp Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dccrn/stft.hpp"

#include <cmath>

namespace dccrn {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<double> build_window(const StftConfig& c) {
  std::vector<double> w(c.win_len);
  for (int n = 0; n < c.win_len; ++n) {
    // periodic Hann
    double hann = 0.5 - 0.5 * std::cos(2.0 * kPi * n / c.win_len);
    switch (c.window) {
      case StftConfig::Window::kSqrtHann:
        w[n] = std::sqrt(hann);
        break;
      case StftConfig::Window::kHann:
        w[n] = hann;
        break;
      case StftConfig::Window::kRect:
        w[n] = 1.0;
        break;
    }
  }
  return w;
}

void validate_config(const StftConfig& c, const std::vector<double>& window,
                     double* cola_out) {
  if (c.win_len <= 0 || c.hop <= 0 || c.fft_len <= 0) {
    throw DataError("stft: window/hop/fft sizes must be positive");
  }
  if (!(c.hop <= c.win_len && c.win_len <= c.fft_len)) {
    throw DataError("stft: requires hop <= win_len <= fft_len, got hop=" +
                    std::to_string(c.hop) + " win=" +
                    std::to_string(c.win_len) + " fft=" +
                    std::to_string(c.fft_len));
  }
  if (c.win_len % c.hop != 0) {
    throw DataError(
        "stft: window/hop pair violates the overlap-add constraint "
        "(win_len must be a multiple of hop), got win=" +
        std::to_string(c.win_len) + " hop=" + std::to_string(c.hop));
  }
  // Analysis and synthesis use the same window; check sum of w^2 shifts.
  const size_t overlap = c.win_len / c.hop;
  double base = 0.0;
  for (int n = 0; n < c.hop; ++n) {
    double acc = 0.0;
    for (size_t k = 0; k < overlap; ++k) {
      double v = window[n + k * c.hop];
      acc += v * v;
    }
    if (n == 0) {
      base = acc;
    } else if (std::abs(acc - base) > 1e-9 * std::max(1.0, base)) {
      throw DataError("stft: window does not satisfy constant overlap-add");
    }
  }
  if (base <= 0.0) {
    throw DataError("stft: degenerate overlap-add normalization");
  }
  *cola_out = base;
}

}  // namespace

template <typename S>
StftTransform<S>::StftTransform(const StftConfig& config) : config_(config) {
  window_ = build_window(config_);
  validate_config(config_, window_, &cola_);

  const size_t win = config_.win_len;
  const size_t fft = config_.fft_len;
  const size_t freq = config_.bins();

  // Analysis: bins[k] = sum_n w[n] x[n] e^{-j 2 pi k n / fft}
  ComplexTensor<double> ka({win, 2 * freq});
  for (size_t n = 0; n < win; ++n) {
    for (size_t k = 0; k < freq; ++k) {
      const double angle = 2.0 * kPi * k * n / fft;
      ka.re[n * 2 * freq + k] = window_[n] * std::cos(angle);
      ka.re[n * 2 * freq + freq + k] = -window_[n] * std::sin(angle);
    }
  }

  // Synthesis: windowed inverse DFT of a one-sided spectrum, with the
  // overlap-add constant folded in. Imaginary parts of DC and Nyquist are
  // projected out (a real signal has none).
  ComplexTensor<double> ks({2 * freq, win});
  for (size_t k = 0; k < freq; ++k) {
    const bool edge = (k == 0 || k == freq - 1);
    const double cr = edge ? 1.0 : 2.0;
    const double ci = edge ? 0.0 : 2.0;
    for (size_t n = 0; n < win; ++n) {
      const double angle = 2.0 * kPi * k * n / fft;
      const double gain = window_[n] / (cola_ * fft);
      ks.re[k * win + n] = cr * std::cos(angle) * gain;
      ks.re[(freq + k) * win + n] = -ci * std::sin(angle) * gain;
    }
  }

  analysis_kernel_ = ag::constant<S>(ka.cast<S>());
  synthesis_kernel_ = ag::constant<S>(ks.cast<S>());
}

template <typename S>
ag::Var<S> StftTransform<S>::analyze(const ag::Var<S>& wave) const {
  const auto& shape = wave->value.shape();
  if (shape.size() != 2) {
    throw ShapeError("stft analyze: expected [B x L], got " +
                     shape_str(shape));
  }
  for (S v : wave->value.re) {
    if (!std::isfinite(v)) throw DataError("stft analyze: non-finite sample");
  }
  const size_t batch = shape[0];
  const size_t win = config_.win_len, hop = config_.hop;
  ag::Var<S> x = wave;
  if (shape[1] < win) {
    ComplexTensor<S> pad({batch, win - shape[1]});
    x = ag::concat<S>({x, ag::constant<S>(pad)}, 1);
  }
  const size_t frames = frame_count(x->value.dim(1));
  const size_t freq = bins();
  ag::Var<S> framed = ag::unfold_frames(x, win, hop);       // [B,T,win]
  framed = ag::reshape(framed, {batch * frames, win});
  ag::Var<S> spec2 = ag::matmul(framed, analysis_kernel_);  // [BT, 2F]
  ag::Var<S> re = ag::slice(spec2, 1, 0, freq);
  ag::Var<S> im = ag::slice(spec2, 1, freq, freq);
  ag::Var<S> full = ag::combine(re, im);                    // [BT, F]
  full = ag::reshape(full, {batch, frames, freq});
  return ag::permute(full, {0, 2, 1});                      // [B, F, T]
}

template <typename S>
ag::Var<S> StftTransform<S>::synthesize(const ag::Var<S>& spec,
                                        size_t out_len) const {
  const auto& shape = spec->value.shape();
  if (shape.size() != 3 || shape[1] != bins()) {
    throw ShapeError("stft synthesize: expected [B x " +
                     std::to_string(bins()) + " x T], got " +
                     shape_str(shape));
  }
  const size_t batch = shape[0], freq = shape[1], frames = shape[2];
  const size_t win = config_.win_len, hop = config_.hop;
  const size_t natural = (frames - 1) * hop + win;
  ag::Var<S> tm = ag::permute(spec, {0, 2, 1});  // [B, T, F]
  ag::Var<S> planes = ag::concat<S>(
      {ag::real_plane(tm), ag::imag_plane(tm)}, 2);          // [B, T, 2F]
  planes = ag::reshape(planes, {batch * frames, 2 * freq});
  ag::Var<S> time = ag::matmul(planes, synthesis_kernel_);   // [BT, win]
  time = ag::reshape(time, {batch, frames, win});
  ag::Var<S> wave = ag::fold_frames(time, hop, natural);     // [B, natural]
  if (out_len == 0 || out_len == natural) return wave;
  if (out_len < natural) return ag::slice(wave, 1, 0, out_len);
  ComplexTensor<S> pad({batch, out_len - natural});
  return ag::concat<S>({wave, ag::constant<S>(pad)}, 1);
}

template <typename S>
ComplexSpectrogram<S> StftTransform<S>::analyze(
    const std::vector<S>& wave) const {
  ag::NoGradGuard guard;
  ComplexTensor<S> x =
      ComplexTensor<S>::from_real({1, wave.size()}, wave);
  ag::Var<S> spec = analyze(ag::constant<S>(std::move(x)));
  ComplexSpectrogram<S> out;
  out.bins = spec->value.reshaped({spec->value.dim(1), spec->value.dim(2)});
  out.config = config_;
  return out;
}

template <typename S>
std::vector<S> StftTransform<S>::synthesize(const ComplexSpectrogram<S>& spec,
                                            size_t out_len) const {
  ag::NoGradGuard guard;
  ComplexTensor<S> b = spec.bins.reshaped(
      {1, spec.bins.dim(0), spec.bins.dim(1)});
  ag::Var<S> wave = synthesize(ag::constant<S>(std::move(b)), out_len);
  return wave->value.re;
}

template <typename S>
ag::Var<S> StftTransform<S>::remove_dc(const ag::Var<S>& spec) {
  const auto& shape = spec->value.shape();
  if (shape.size() != 3 || shape[1] < 2) {
    throw ShapeError("remove_dc: needs [B x F x T] with F >= 2, got " +
                     shape_str(shape));
  }
  return ag::slice(spec, 1, 1, shape[1] - 1);
}

template <typename S>
ag::Var<S> StftTransform<S>::restore_dc(const ag::Var<S>& spec) {
  const auto& shape = spec->value.shape();
  if (shape.size() != 3) {
    throw ShapeError("restore_dc: needs [B x F-1 x T], got " +
                     shape_str(shape));
  }
  ComplexTensor<S> zero_row({shape[0], 1, shape[2]});
  return ag::concat<S>({ag::constant<S>(std::move(zero_row)), spec}, 1);
}

template <typename S>
ComplexSpectrogram<S> StftTransform<S>::remove_dc(
    const ComplexSpectrogram<S>& spec) const {
  ag::NoGradGuard guard;
  ComplexTensor<S> b =
      spec.bins.reshaped({1, spec.bins.dim(0), spec.bins.dim(1)});
  ag::Var<S> out = remove_dc(ag::constant<S>(std::move(b)));
  ComplexSpectrogram<S> r;
  r.bins = out->value.reshaped({out->value.dim(1), out->value.dim(2)});
  r.config = spec.config;
  return r;
}

template <typename S>
ComplexSpectrogram<S> StftTransform<S>::restore_dc(
    const ComplexSpectrogram<S>& spec) const {
  ag::NoGradGuard guard;
  ComplexTensor<S> b =
      spec.bins.reshaped({1, spec.bins.dim(0), spec.bins.dim(1)});
  ag::Var<S> out = restore_dc(ag::constant<S>(std::move(b)));
  ComplexSpectrogram<S> r;
  r.bins = out->value.reshaped({out->value.dim(1), out->value.dim(2)});
  r.config = spec.config;
  return r;
}

template class StftTransform<float>;
template class StftTransform<double>;
template struct ComplexSpectrogram<float>;
template struct ComplexSpectrogram<double>;

}  // namespace dccrn
