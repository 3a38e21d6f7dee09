// Copyright 2026 The dccrn-cpp Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dccrn/targets.hpp"

#include <cmath>

namespace dccrn {

template <typename S>
ComplexMask<S> crm(const ComplexTensor<S>& clean,
                   const ComplexTensor<S>& noisy) {
  if (!(clean.shape() == noisy.shape())) {
    throw ShapeError("crm: clean " + shape_str(clean.shape()) +
                     " vs noisy " + shape_str(noisy.shape()));
  }
  ComplexMask<S> mask;
  mask.planes = ComplexTensor<S>(clean.shape());
  const S eps = static_cast<S>(kMaskEpsilon);
  for (size_t i = 0; i < clean.numel(); ++i) {
    const S yr = noisy.re[i], yi = noisy.im[i];
    const S sr = clean.re[i], si = clean.im[i];
    const S denom = std::max(yr * yr + yi * yi, eps);
    mask.planes.re[i] = (yr * sr + yi * si) / denom;
    mask.planes.im[i] = (yr * si - yi * sr) / denom;
  }
  return mask;
}

template <typename S>
ComplexTensor<S> smm(const ComplexTensor<S>& clean_mag,
                     const ComplexTensor<S>& noisy_mag) {
  if (!(clean_mag.shape() == noisy_mag.shape())) {
    throw ShapeError("smm: magnitude shapes differ, " +
                     shape_str(clean_mag.shape()) + " vs " +
                     shape_str(noisy_mag.shape()));
  }
  ComplexTensor<S> out(clean_mag.shape());
  const S eps = static_cast<S>(kMaskEpsilon);
  for (size_t i = 0; i < out.numel(); ++i) {
    out.re[i] = clean_mag.re[i] / std::max(noisy_mag.re[i], eps);
  }
  return out;
}

template <typename S>
double si_snr_db(const std::vector<S>& estimate,
                 const std::vector<S>& reference) {
  if (estimate.size() != reference.size()) {
    throw ShapeError("si_snr: length mismatch, " +
                     std::to_string(estimate.size()) + " vs " +
                     std::to_string(reference.size()));
  }
  const size_t n = reference.size();
  if (n == 0) throw DataError("si_snr: empty signals");
  double mean_e = 0, mean_r = 0;
  for (size_t i = 0; i < n; ++i) {
    mean_e += estimate[i];
    mean_r += reference[i];
  }
  mean_e /= static_cast<double>(n);
  mean_r /= static_cast<double>(n);
  double dot = 0, ref_en = 0, est_en = 0;
  for (size_t i = 0; i < n; ++i) {
    const double e = estimate[i] - mean_e;
    const double r = reference[i] - mean_r;
    dot += e * r;
    ref_en += r * r;
    est_en += e * e;
  }
  if (ref_en == 0.0) throw DataError("si_snr: reference signal is all-zero");
  const double alpha = dot / ref_en;
  double target_en = 0, noise_en = 0;
  for (size_t i = 0; i < n; ++i) {
    const double e = estimate[i] - mean_e;
    const double r = reference[i] - mean_r;
    const double t = alpha * r;
    target_en += t * t;
    const double v = e - t;
    noise_en += v * v;
  }
  const double guard = kMaskEpsilon * est_en + 1e-300;
  return 10.0 * std::log10((target_en + guard) / (noise_en + guard));
}

template <typename S>
ag::Var<S> si_snr_batch(const ag::Var<S>& estimate,
                        const ag::Var<S>& reference) {
  using namespace ag;
  const auto& es = estimate->value.shape();
  const auto& rs = reference->value.shape();
  if (es.size() != 2 || !(es == rs)) {
    throw ShapeError("si_snr_batch: expected matching [B x L], got " +
                     shape_str(es) + " and " + shape_str(rs));
  }
  // all-zero reference check per batch row
  {
    const size_t batch = rs[0], len = rs[1];
    for (size_t b = 0; b < batch; ++b) {
      double mean = 0;
      for (size_t i = 0; i < len; ++i) mean += reference->value.re[b * len + i];
      mean /= static_cast<double>(len);
      double en = 0;
      for (size_t i = 0; i < len; ++i) {
        const double r = reference->value.re[b * len + i] - mean;
        en += r * r;
      }
      if (en == 0.0) throw DataError("si_snr: reference signal is all-zero");
    }
  }
  const S eps = static_cast<S>(kMaskEpsilon);
  const S tiny = static_cast<S>(1e-30);
  Var<S> est = csub(estimate, mean_axes(estimate, {1}, true));
  Var<S> ref = csub(reference, mean_axes(reference, {1}, true));
  Var<S> dot = sum_axes(cmul(est, ref), {1}, true);      // [B x 1]
  Var<S> ref_en = sum_axes(cmul(ref, ref), {1}, true);
  Var<S> target = cmul(ref, rdiv(dot, ref_en));
  Var<S> noise = csub(est, target);
  Var<S> target_en = sum_axes(cmul(target, target), {1}, true);
  Var<S> noise_en = sum_axes(cmul(noise, noise), {1}, true);
  Var<S> guard = add_scalar(scale(sum_axes(cmul(est, est), {1}, true), eps),
                            tiny);
  Var<S> ratio = rdiv(cadd(target_en, guard), cadd(noise_en, guard));
  const S db_scale = static_cast<S>(10.0 / std::log(10.0));
  return scale(log_re(ratio), db_scale);  // [B x 1] dB
}

template <typename S>
ag::Var<S> loss_sisnr(const ag::Var<S>& estimate, const ag::Var<S>& reference) {
  ag::Var<S> per_item = si_snr_batch(estimate, reference);
  ag::Var<S> mean = ag::mean_axes(per_item, {0, 1}, false);
  return ag::scale(mean, S(-1));
}

template <typename S>
ag::Var<S> loss_csa(const ag::Var<S>& mask, const ag::Var<S>& noisy,
                    const ag::Var<S>& clean) {
  using namespace ag;
  Var<S> diff = csub(cmul(mask, noisy), clean);
  Var<S> re = real_plane(diff);
  Var<S> im = imag_plane(diff);
  Var<S> sq = cadd(cmul(re, re), cmul(im, im));
  std::vector<size_t> axes(sq->value.rank());
  for (size_t i = 0; i < axes.size(); ++i) axes[i] = i;
  return mean_axes(sq, axes, false);
}

template <typename S>
ag::Var<S> loss_msa(const ag::Var<S>& mask_mag, const ag::Var<S>& noisy_mag,
                    const ag::Var<S>& clean_mag) {
  using namespace ag;
  Var<S> diff = csub(cmul(mask_mag, noisy_mag), clean_mag);
  Var<S> sq = cmul(diff, diff);
  std::vector<size_t> axes(sq->value.rank());
  for (size_t i = 0; i < axes.size(); ++i) axes[i] = i;
  return mean_axes(sq, axes, false);
}

#define DCCRN_INSTANTIATE_TARGETS(S)                                        \
  template struct ComplexMask<S>;                                           \
  template ComplexMask<S> crm<S>(const ComplexTensor<S>&,                   \
                                 const ComplexTensor<S>&);                  \
  template ComplexTensor<S> smm<S>(const ComplexTensor<S>&,                 \
                                   const ComplexTensor<S>&);                \
  template double si_snr_db<S>(const std::vector<S>&, const std::vector<S>&); \
  template ag::Var<S> si_snr_batch<S>(const ag::Var<S>&, const ag::Var<S>&); \
  template ag::Var<S> loss_sisnr<S>(const ag::Var<S>&, const ag::Var<S>&);  \
  template ag::Var<S> loss_csa<S>(const ag::Var<S>&, const ag::Var<S>&,     \
                                  const ag::Var<S>&);                       \
  template ag::Var<S> loss_msa<S>(const ag::Var<S>&, const ag::Var<S>&,     \
                                  const ag::Var<S>&);

DCCRN_INSTANTIATE_TARGETS(float)
DCCRN_INSTANTIATE_TARGETS(double)

}  // namespace dccrn
