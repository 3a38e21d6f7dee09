// Copyright 2026 The dccrn-cpp Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dccrn/autograd.hpp"
#include "dccrn/common.hpp"

namespace dccrn {

struct GradCheckReport {
  double max_rel_err = 0.0;
  size_t coords_checked = 0;
  std::string worst_param;

  bool passed(double tol = 1e-4) const { return max_rel_err <= tol; }
};

/// Central-difference check of reverse-mode gradients.
///
/// `loss_fn` must rebuild the graph from the given parameters on every call
/// and return a scalar real loss. Checks `samples` randomly chosen parameter
/// coordinates (both planes) against (f(x+h) - f(x-h)) / 2h.
/// Relative error uses max(|analytic|, |numeric|, floor) as denominator.
GradCheckReport gradcheck(
    const std::function<ag::Var<double>()>& loss_fn,
    const std::vector<ag::Var<double>>& params, size_t samples, Rng& rng,
    double step = 1e-5, double denom_floor = 1e-3);

}  // namespace dccrn
