// Copyright 2026 The dccrn-cpp Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <limits>
#include <vector>

#include "dccrn/autograd.hpp"

namespace dccrn {

template <typename S>
class Adam {
 public:
  struct Options {
    S lr = static_cast<S>(1e-3);
    S beta1 = static_cast<S>(0.9);
    S beta2 = static_cast<S>(0.999);
    S eps = static_cast<S>(1e-8);
  };

  Adam(std::vector<ag::Var<S>> params, Options opts = {})
      : params_(std::move(params)), opts_(opts) {
    for (const auto& p : params_) {
      m_.emplace_back(p->value.shape());
      v_.emplace_back(p->value.shape());
    }
  }

  void zero_grad() { ag::zero_grad(params_); }

  void set_lr(S lr) { opts_.lr = lr; }
  S lr() const { return opts_.lr; }

  void step() {
    ++t_;
    const S b1 = opts_.beta1, b2 = opts_.beta2;
    const S c1 = S(1) - static_cast<S>(std::pow(b1, t_));
    const S c2 = S(1) - static_cast<S>(std::pow(b2, t_));
    for (size_t i = 0; i < params_.size(); ++i) {
      auto& p = params_[i];
      const ComplexTensor<S>* g = p->has_grad ? &p->grad : nullptr;
      auto update_plane = [&](std::vector<S>& value, std::vector<S>& m,
                              std::vector<S>& v, const std::vector<S>* grad) {
        for (size_t k = 0; k < value.size(); ++k) {
          const S gk = grad ? (*grad)[k] : S(0);
          m[k] = b1 * m[k] + (S(1) - b1) * gk;
          v[k] = b2 * v[k] + (S(1) - b2) * gk * gk;
          const S mhat = m[k] / c1;
          const S vhat = v[k] / c2;
          value[k] -= opts_.lr * mhat / (std::sqrt(vhat) + opts_.eps);
        }
      };
      update_plane(p->value.re, m_[i].re, v_[i].re, g ? &g->re : nullptr);
      update_plane(p->value.im, m_[i].im, v_[i].im, g ? &g->im : nullptr);
    }
  }

 private:
  std::vector<ag::Var<S>> params_;
  std::vector<ComplexTensor<S>> m_, v_;
  Options opts_;
  long t_ = 0;
};

/// Learning-rate schedule: halve whenever the validation loss goes up
/// against the previous epoch; stop once `patience` epochs pass without
/// improving on the best.
struct LrSchedule {
  double lr;
  double decay = 0.5;
  int patience = 5;

  double prev = std::numeric_limits<double>::infinity();
  double best = std::numeric_limits<double>::infinity();
  int epochs_since_best = 0;
  bool should_stop = false;

  void on_validation(double val_loss) {
    if (val_loss > prev) lr *= decay;
    prev = val_loss;
    if (val_loss < best) {
      best = val_loss;
      epochs_since_best = 0;
    } else if (++epochs_since_best >= patience) {
      should_stop = true;
    }
  }
};

}  // namespace dccrn
