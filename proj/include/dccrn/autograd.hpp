// Copyright 2026 The dccrn-cpp Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "dccrn/tensor.hpp"

namespace dccrn {
namespace ag {

// Reverse-mode engine over ComplexTensor values. Gradients are independent
// real gradients on the two planes (the network is a real function of 2n
// real parameters). Graphs are built per forward pass and freed by
// backward().

template <typename S>
struct Node {
  ComplexTensor<S> value;
  ComplexTensor<S> grad;  // allocated on first accumulation
  bool has_grad = false;
  bool requires_grad = false;
  std::string name;
  std::vector<std::shared_ptr<Node<S>>> parents;
  std::function<void(Node<S>&)> backprop;

  ComplexTensor<S>& ensure_grad() {
    if (!has_grad) {
      grad = ComplexTensor<S>(value.shape());
      has_grad = true;
    }
    return grad;
  }

  void accumulate(const ComplexTensor<S>& g) {
    ensure_grad();
    for (size_t i = 0; i < grad.numel(); ++i) {
      grad.re[i] += g.re[i];
      grad.im[i] += g.im[i];
    }
  }
};

template <typename S>
using Var = std::shared_ptr<Node<S>>;

bool grad_enabled();

/// Disables graph recording in the current thread while alive.
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool saved_;
};

template <typename S>
Var<S> constant(ComplexTensor<S> v);
template <typename S>
Var<S> parameter(ComplexTensor<S> v, std::string name);

// --- elementwise complex ops (broadcasting) ---
template <typename S>
Var<S> cadd(const Var<S>& a, const Var<S>& b);
template <typename S>
Var<S> csub(const Var<S>& a, const Var<S>& b);
template <typename S>
Var<S> cmul(const Var<S>& a, const Var<S>& b);
template <typename S>
Var<S> conj(const Var<S>& a);
template <typename S>
Var<S> magnitude(const Var<S>& a, S eps = S(0));
template <typename S>
Var<S> phase(const Var<S>& a);
template <typename S>
Var<S> real_plane(const Var<S>& a);
template <typename S>
Var<S> imag_plane(const Var<S>& a);
template <typename S>
Var<S> combine(const Var<S>& re_v, const Var<S>& im_v);

// --- elementwise ops on the real plane (inputs expected real) ---
template <typename S>
Var<S> rdiv(const Var<S>& a, const Var<S>& b);
template <typename S>
Var<S> sqrt_re(const Var<S>& a);
template <typename S>
Var<S> log_re(const Var<S>& a);
template <typename S>
Var<S> cos_re(const Var<S>& a);
template <typename S>
Var<S> sin_re(const Var<S>& a);

template <typename S>
Var<S> tanh_re(const Var<S>& a);
template <typename S>
Var<S> sigmoid_re(const Var<S>& a);

// --- elementwise ops applied to both planes ---
template <typename S>
Var<S> scale(const Var<S>& a, S c);
template <typename S>
Var<S> add_scalar(const Var<S>& a, S c);  // real plane only
/// PReLU with one learned slope per channel, shared by both planes.
template <typename S>
Var<S> prelu(const Var<S>& x, const Var<S>& slope, size_t channel_axis);

// --- reductions ---
template <typename S>
Var<S> sum_all(const Var<S>& a);
template <typename S>
Var<S> sum_axes(const Var<S>& a, std::vector<size_t> axes, bool keepdims);
template <typename S>
Var<S> mean_axes(const Var<S>& a, std::vector<size_t> axes, bool keepdims);

// --- structure ---
template <typename S>
Var<S> reshape(const Var<S>& a, std::vector<size_t> shape);
template <typename S>
Var<S> permute(const Var<S>& a, std::vector<size_t> perm);
template <typename S>
Var<S> slice(const Var<S>& a, size_t axis, size_t start, size_t len);
template <typename S>
Var<S> concat(const std::vector<Var<S>>& parts, size_t axis);

// --- linear algebra (real planes, rank-2) ---
template <typename S>
Var<S> matmul(const Var<S>& a, const Var<S>& b);

/// Complex affine map on the last-but-one layout [M x I]: out = x w^T + b,
/// combined with the complex multiplication rule.
template <typename S>
Var<S> complex_matmul(const Var<S>& x, const Var<S>& w, const Var<S>& b);

// --- framing (waveform <-> frames) ---
template <typename S>
Var<S> unfold_frames(const Var<S>& x, size_t win, size_t hop);
template <typename S>
Var<S> fold_frames(const Var<S>& frames, size_t hop, size_t out_len);

// --- convolution ---
struct ConvGeom {
  size_t kf = 1, kt = 1;
  size_t sf = 1, st = 1;
  size_t pf_lo = 0, pf_hi = 0;
  size_t pt_lo = 0, pt_hi = 0;

  size_t conv_out(size_t in, size_t k, size_t s, size_t lo, size_t hi) const {
    return (in + lo + hi - k) / s + 1;
  }
  size_t tconv_out(size_t in, size_t k, size_t s, size_t lo, size_t hi) const {
    return (in - 1) * s + k - lo - hi;
  }
};

/// x [B x C x F x T], w [O x C x kf x kt] (planes = real/imag kernels),
/// b [O]. Output combines the four real convolutions with the complex
/// multiplication rule.
template <typename S>
Var<S> complex_conv2d(const Var<S>& x, const Var<S>& w, const Var<S>& b,
                      const ConvGeom& g);

/// x [B x I x F x T], w [I x O x kf x kt], b [O]. Padding crops the raw
/// transposed-convolution output; pt_lo = 1 realizes a one-frame look-ahead.
template <typename S>
Var<S> complex_conv_transpose2d(const Var<S>& x, const Var<S>& w,
                                const Var<S>& b, const ConvGeom& g);

/// Backpropagate from a real scalar loss. Visits each node exactly once in
/// reverse topological order and frees the graph as it goes; parameter
/// gradients remain on their nodes.
template <typename S>
void backward(const Var<S>& loss);

template <typename S>
void zero_grad(const std::vector<Var<S>>& params);

/// Gradient map for the given parameters; parameters the loss never
/// touched map to all-zero tensors.
template <typename S>
std::unordered_map<std::string, ComplexTensor<S>> gradient_map(
    const std::vector<Var<S>>& params);

}  // namespace ag
}  // namespace dccrn
