// Copyright 2026 The dccrn-cpp Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dccrn/autograd.hpp"
#include "dccrn/common.hpp"

namespace dccrn {

template <typename S>
struct NamedParam {
  ag::Var<S> var;
  bool is_complex;  // complex parameters count and serialize both planes
};

template <typename S>
using ParamList = std::vector<NamedParam<S>>;

template <typename S>
using BufferList = std::vector<std::pair<std::string, ComplexTensor<S>*>>;

/// Complex 2-D convolution: four real convolutions combined with the
/// complex multiplication rule. Weight planes hold the real and imaginary
/// kernels; channel counts are complex-pair counts.
template <typename S>
struct ComplexConv2d {
  ag::Var<S> weight;  // [outC x inC x kf x kt]
  ag::Var<S> bias;    // [outC]
  ag::ConvGeom geom;

  void init(size_t out_c, size_t in_c, const ag::ConvGeom& g,
            const std::string& name, Rng& rng);
  ag::Var<S> forward(const ag::Var<S>& x) const {
    return ag::complex_conv2d(x, weight, bias, geom);
  }
  /// Streaming variant: x carries the full time window, no time padding.
  ag::Var<S> forward_window(const ag::Var<S>& x) const;
  void collect(const std::string& prefix, ParamList<S>& out) const;
};

template <typename S>
struct ComplexConvTranspose2d {
  ag::Var<S> weight;  // [inC x outC x kf x kt]
  ag::Var<S> bias;    // [outC]
  ag::ConvGeom geom;

  void init(size_t in_c, size_t out_c, const ag::ConvGeom& g,
            const std::string& name, Rng& rng);
  ag::Var<S> forward(const ag::Var<S>& x) const {
    return ag::complex_conv_transpose2d(x, weight, bias, geom);
  }
  /// Streaming variant: emits the single frame between the two inputs.
  ag::Var<S> forward_window(const ag::Var<S>& x) const;
  void collect(const std::string& prefix, ParamList<S>& out) const;
};

/// Complex batch normalization: per-channel whitening of the (re, im)
/// distribution by the closed-form inverse square root of the 2x2
/// covariance, followed by a learned 2x2 affine and complex shift.
template <typename S>
struct ComplexBatchNorm {
  size_t channels = 0;
  S momentum = static_cast<S>(0.1);
  S epsilon = static_cast<S>(1e-5);

  ag::Var<S> gamma_rr, gamma_ri, gamma_ir, gamma_ii;  // [C] real each
  ag::Var<S> beta;                                    // [C] complex

  ComplexTensor<S> run_mean;                 // [C] complex
  ComplexTensor<S> run_vrr, run_vri, run_vii;  // [C] real
  ComplexTensor<S> run_ready;                // [1] flag buffer

  void init(size_t c, const std::string& name, Rng& rng);
  /// x [B x C x F x T]. Train mode uses batch statistics and updates the
  /// running ones; eval mode requires at least one prior train step.
  ag::Var<S> forward(const ag::Var<S>& x, bool train);
  void collect(const std::string& prefix, ParamList<S>& out) const;
  void collect_buffers(const std::string& prefix, BufferList<S>& out);
};

template <typename S>
struct PRelu {
  ag::Var<S> slope;  // [C]

  void init(size_t channels, const std::string& name);
  ag::Var<S> forward(const ag::Var<S>& x) const {
    return ag::prelu(x, slope, 1);
  }
  void collect(const std::string& prefix, ParamList<S>& out) const;
};

template <typename S>
struct LstmState {
  ComplexTensor<S> h, c;  // [B x H] real
};

/// Single real LSTM layer, gate order (input, forget, cell, output),
/// forget-gate bias initialized to +1.
template <typename S>
struct LstmLayer {
  size_t input = 0, hidden = 0;
  ag::Var<S> w_x;  // [I x 4H]
  ag::Var<S> w_h;  // [H x 4H]
  ag::Var<S> b;    // [4H]

  void init(size_t in, size_t hid, const std::string& name, Rng& rng,
            bool forget_bias_one = true);
  /// x [T x B x I] -> y [T x B x H]; state carried when provided.
  ag::Var<S> forward(const ag::Var<S>& x, LstmState<S>* state) const;
  void collect(const std::string& prefix, ParamList<S>& out) const;
};

template <typename S>
struct ComplexLstmState {
  // One state track per sub-application: rr, ir, ri, ii.
  LstmState<S> rr, ir, ri, ii;
};

/// Complex LSTM: two real LSTMs applied to both planes and combined with
/// the complex multiplication pattern.
template <typename S>
struct ComplexLstmLayer {
  LstmLayer<S> lstm_r, lstm_i;

  void init(size_t in, size_t hid, const std::string& name, Rng& rng,
            bool forget_bias_one = true);
  std::pair<ag::Var<S>, ag::Var<S>> forward(const ag::Var<S>& x_re,
                                            const ag::Var<S>& x_im,
                                            ComplexLstmState<S>* state) const;
  void collect(const std::string& prefix, ParamList<S>& out) const;
};

template <typename S>
struct Dense {
  ag::Var<S> weight;  // [I x O] real
  ag::Var<S> bias;    // [O] real

  void init(size_t in, size_t out, const std::string& name, Rng& rng);
  ag::Var<S> forward(const ag::Var<S>& x) const;  // [M x I] -> [M x O]
  void collect(const std::string& prefix, ParamList<S>& out) const;
};

template <typename S>
struct ComplexDense {
  ag::Var<S> weight;  // [O x I] complex
  ag::Var<S> bias;    // [O] complex

  void init(size_t in, size_t out, const std::string& name, Rng& rng);
  ag::Var<S> forward(const ag::Var<S>& x) const {
    return ag::complex_matmul(x, weight, bias);
  }
  void collect(const std::string& prefix, ParamList<S>& out) const;
};

}  // namespace dccrn
