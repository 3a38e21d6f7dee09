// Copyright 2026 The dccrn-cpp Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <vector>

#include "dccrn/autograd.hpp"
#include "dccrn/tensor.hpp"

namespace dccrn {

/// Per-bin complex ratio mask in Cartesian form, with polar accessors.
template <typename S>
struct ComplexMask {
  ComplexTensor<S> planes;  // [F x T] (or batched [B x F x T])

  ComplexTensor<S> mask_magnitude() const {
    return raw_magnitude(planes, S(0));
  }
  ComplexTensor<S> mask_phase() const { return raw_phase(planes); }
};

/// Denominator floor for mask ratios and SI-SNR guards.
inline constexpr double kMaskEpsilon = 1e-8;

/// Complex ratio mask M = S / Y computed per bin with |Y|^2 floored.
template <typename S>
ComplexMask<S> crm(const ComplexTensor<S>& clean,
                   const ComplexTensor<S>& noisy);

/// Spectral magnitude mask |S| / |Y| with floored denominator.
template <typename S>
ComplexTensor<S> smm(const ComplexTensor<S>& clean_mag,
                     const ComplexTensor<S>& noisy_mag);

/// Scale-invariant SNR in dB. Both signals are mean-subtracted first. The
/// epsilon guard is relative to the estimate energy, which keeps the value
/// exactly invariant to estimate scaling and caps the perfect-estimate case
/// near +80 dB. Throws DataError when the reference is all-zero.
template <typename S>
double si_snr_db(const std::vector<S>& estimate,
                 const std::vector<S>& reference);

/// Differentiable SI-SNR over a batch [B x L]; returns [B x 1] in dB.
template <typename S>
ag::Var<S> si_snr_batch(const ag::Var<S>& estimate, const ag::Var<S>& reference);

/// Training loss: negative mean SI-SNR over the batch (scalar).
template <typename S>
ag::Var<S> loss_sisnr(const ag::Var<S>& estimate, const ag::Var<S>& reference);

/// Complex signal approximation: mean square of (M*Y - S) over both planes.
template <typename S>
ag::Var<S> loss_csa(const ag::Var<S>& mask, const ag::Var<S>& noisy,
                    const ag::Var<S>& clean);

/// Magnitude signal approximation: mean square of (|M|*|Y| - |S|).
template <typename S>
ag::Var<S> loss_msa(const ag::Var<S>& mask_mag, const ag::Var<S>& noisy_mag,
                    const ag::Var<S>& clean_mag);

}  // namespace dccrn
