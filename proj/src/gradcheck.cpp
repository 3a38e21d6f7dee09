// Copyright 2026 The dccrn-cpp Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dccrn/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace dccrn {

GradCheckReport gradcheck(const std::function<ag::Var<double>()>& loss_fn,
                          const std::vector<ag::Var<double>>& params,
                          size_t samples, Rng& rng, double step,
                          double denom_floor) {
  ag::zero_grad(params);
  ag::Var<double> loss = loss_fn();
  ag::backward(loss);

  // Total number of real coordinates (both planes of every parameter).
  std::vector<size_t> sizes;
  size_t total = 0;
  for (const auto& p : params) {
    sizes.push_back(p->value.numel());
    total += 2 * p->value.numel();
  }
  if (total == 0) return {};

  GradCheckReport report;
  for (size_t s = 0; s < samples; ++s) {
    size_t coord = rng.uniform_index(total);
    size_t pi = 0;
    while (coord >= 2 * sizes[pi]) {
      coord -= 2 * sizes[pi];
      ++pi;
    }
    const bool imag = coord >= sizes[pi];
    const size_t idx = imag ? coord - sizes[pi] : coord;
    auto& param = params[pi];
    double* slot = imag ? &param->value.im[idx] : &param->value.re[idx];
    const double saved = *slot;

    *slot = saved + step;
    double up;
    {
      ag::NoGradGuard guard;
      up = loss_fn()->value.re[0];
    }
    *slot = saved - step;
    double down;
    {
      ag::NoGradGuard guard;
      down = loss_fn()->value.re[0];
    }
    *slot = saved;

    const double numeric = (up - down) / (2.0 * step);
    const double analytic =
        param->has_grad ? (imag ? param->grad.im[idx] : param->grad.re[idx])
                        : 0.0;
    const double denom =
        std::max({std::abs(numeric), std::abs(analytic), denom_floor});
    const double rel = std::abs(numeric - analytic) / denom;
    if (rel > report.max_rel_err) {
      report.max_rel_err = rel;
      report.worst_param = param->name;
    }
    ++report.coords_checked;
  }
  return report;
}

}  // namespace dccrn
