// Copyright 2026 The dccrn-cpp Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dccrn/common.hpp"

namespace dccrn {

/// Dense N-dimensional complex array stored as two row-major real planes.
/// A real-valued tensor is one whose imaginary plane is identically zero;
/// plane-separable operations preserve that exactly.
template <typename S>
class ComplexTensor {
 private:
  std::vector<size_t> shape_;

 public:
  ComplexTensor() = default;

  explicit ComplexTensor(std::vector<size_t> shape)
      : shape_(std::move(shape)),
        re(numel_of(shape_), S(0)),
        im(numel_of(shape_), S(0)) {}

  ComplexTensor(std::vector<size_t> shape, std::vector<S> re_data,
                std::vector<S> im_data)
      : shape_(std::move(shape)), re(std::move(re_data)), im(std::move(im_data)) {
    if (re.size() != numel_of(shape_) || im.size() != re.size()) {
      throw ShapeError("ComplexTensor: plane sizes do not match shape " +
                       shape_str(shape_));
    }
  }

  static ComplexTensor from_real(std::vector<size_t> shape,
                                 std::vector<S> re_data) {
    std::vector<S> zeros(re_data.size(), S(0));
    return ComplexTensor(std::move(shape), std::move(re_data), std::move(zeros));
  }

  static ComplexTensor scalar(S re_v, S im_v = S(0)) {
    return ComplexTensor({1}, {re_v}, {im_v});
  }

  static ComplexTensor full(std::vector<size_t> shape, S re_v, S im_v = S(0)) {
    size_t n = numel_of(shape);
    return ComplexTensor(std::move(shape), std::vector<S>(n, re_v),
                         std::vector<S>(n, im_v));
  }

  const std::vector<size_t>& shape() const { return shape_; }
  size_t rank() const { return shape_.size(); }
  size_t dim(size_t i) const { return shape_.at(i); }
  size_t numel() const { return re.size(); }
  bool same_shape(const ComplexTensor& o) const { return shape_ == o.shape_; }

  bool is_real() const {
    for (S v : im)
      if (v != S(0)) return false;
    return true;
  }

  bool all_finite() const;

  /// Reinterpret the flat data with a new shape of equal element count.
  ComplexTensor reshaped(std::vector<size_t> new_shape) const {
    if (numel_of(new_shape) != numel()) {
      throw ShapeError("reshape: incompatible element counts, " +
                       shape_str(shape_) + " -> " + shape_str(new_shape));
    }
    return ComplexTensor(std::move(new_shape), re, im);
  }

  template <typename T>
  ComplexTensor<T> cast() const {
    std::vector<T> r(re.size()), i(im.size());
    for (size_t k = 0; k < re.size(); ++k) r[k] = static_cast<T>(re[k]);
    for (size_t k = 0; k < im.size(); ++k) i[k] = static_cast<T>(im[k]);
    return ComplexTensor<T>(shape_, std::move(r), std::move(i));
  }

  static size_t numel_of(const std::vector<size_t>& shape) {
    size_t n = 1;
    for (size_t d : shape) n *= d;
    return n;
  }

  std::vector<S> re, im;
};

std::vector<size_t> row_major_strides(const std::vector<size_t>& shape);

/// Shape both operands broadcast to, or a ShapeError naming both shapes.
std::vector<size_t> broadcast_shape(const std::vector<size_t>& a,
                                    const std::vector<size_t>& b);

// Raw (non-differentiable) kernels shared by the autograd ops.

// Elementwise complex arithmetic with numpy-style broadcasting.
template <typename S>
ComplexTensor<S> raw_cadd(const ComplexTensor<S>& a, const ComplexTensor<S>& b);
template <typename S>
ComplexTensor<S> raw_csub(const ComplexTensor<S>& a, const ComplexTensor<S>& b);
template <typename S>
ComplexTensor<S> raw_cmul(const ComplexTensor<S>& a, const ComplexTensor<S>& b);

template <typename S>
ComplexTensor<S> raw_magnitude(const ComplexTensor<S>& a, S eps = S(0));
/// Principal-value angle in (-pi, pi].
template <typename S>
ComplexTensor<S> raw_phase(const ComplexTensor<S>& a);

/// Reduce `g` (shaped like the broadcast output) back onto `target_shape`
/// by summing over the broadcast dimensions.
template <typename S>
ComplexTensor<S> reduce_to_shape(const ComplexTensor<S>& g,
                                 const std::vector<size_t>& target_shape);

template <typename S>
ComplexTensor<S> raw_permute(const ComplexTensor<S>& a,
                             const std::vector<size_t>& perm);

}  // namespace dccrn
