// Copyright 2026 The dccrn-cpp Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dccrn/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <iomanip>
#include <sstream>

#include "dccrn/gradcheck.hpp"
#include "dccrn/layers.hpp"
#include "dccrn/mixer.hpp"
#include "dccrn/synth.hpp"
#include "dccrn/targets.hpp"

namespace dccrn {

namespace {

using Cplx = std::complex<double>;
using DVar = ag::Var<double>;

ComplexTensor<double> random_complex(Rng& rng, std::vector<size_t> shape,
                                     double scale = 1.0) {
  ComplexTensor<double> t(std::move(shape));
  for (size_t i = 0; i < t.numel(); ++i) {
    t.re[i] = scale * rng.uniform(-1.0, 1.0);
    t.im[i] = scale * rng.uniform(-1.0, 1.0);
  }
  return t;
}

// Quadratic real readout: sum |out * r|^2 with a fixed random weighting.
DVar quadratic_loss(const DVar& out, const ComplexTensor<double>& r) {
  DVar weighted = ag::cmul(out, ag::constant(r));
  return ag::real_plane(
      ag::sum_all(ag::cmul(weighted, ag::conj(weighted))));
}

CheckResult grad_result(const std::string& name, const GradCheckReport& rep) {
  CheckResult r;
  r.name = name;
  r.measured = rep.max_rel_err;
  r.bound = 1e-4;
  r.ok = rep.passed(r.bound);
  r.detail = "max rel err, " + std::to_string(rep.coords_checked) + " coords";
  return r;
}

}  // namespace

ModelConfig tiny_config(Variant v) {
  ModelConfig c;
  c.variant = v;
  c.encoder_channels = {16, 32};
  c.lookahead_frames = 2;
  c.lstm_layers = 1;
  c.lstm_units = 64;
  c.dense_units = 32 * ((c.stft.bins() - 1) >> 2);  // channels * freq
  return c;
}

// --- gradient checks ---

CheckResult check_grad_elementwise(uint64_t seed) {
  Rng rng(seed);
  auto a = ag::parameter(random_complex(rng, {3, 4}), "a");
  auto b = ag::parameter(random_complex(rng, {3, 4}), "b");
  ComplexTensor<double> r = random_complex(rng, {3, 4});
  auto loss_fn = [&]() {
    DVar m = ag::cmul(a, b);
    DVar mag = ag::magnitude(m, 1e-9);
    DVar ph = ag::phase(ag::cadd(m, a));
    DVar mix = ag::combine(ag::cmul(mag, ag::cos_re(ph)),
                           ag::cmul(mag, ag::sin_re(ph)));
    mix = ag::tanh_re(ag::cadd(mix, ag::csub(a, b)));
    return quadratic_loss(mix, r);
  };
  Rng pick(seed + 1);
  return grad_result("grad/elementwise", gradcheck(loss_fn, {a, b}, 60, pick));
}

CheckResult check_grad_conv(uint64_t seed) {
  Rng rng(seed);
  ag::ConvGeom g;
  g.kf = 3; g.kt = 2; g.sf = 2; g.st = 1;
  g.pf_lo = g.pf_hi = 1; g.pt_lo = 1; g.pt_hi = 0;
  auto x = ag::parameter(random_complex(rng, {2, 2, 6, 5}), "x");
  auto w = ag::parameter(random_complex(rng, {3, 2, 3, 2}, 0.5), "w");
  auto b = ag::parameter(random_complex(rng, {3}, 0.1), "b");
  ComplexTensor<double> r = random_complex(rng, {2, 3, 3, 5});
  auto loss_fn = [&]() {
    return quadratic_loss(ag::complex_conv2d(x, w, b, g), r);
  };
  Rng pick(seed + 1);
  return grad_result("grad/conv2d", gradcheck(loss_fn, {x, w, b}, 60, pick));
}

CheckResult check_grad_conv_transpose(uint64_t seed) {
  Rng rng(seed);
  ag::ConvGeom g;
  g.kf = 3; g.kt = 2; g.sf = 2; g.st = 1;
  g.pf_lo = 1; g.pf_hi = 0; g.pt_lo = 1; g.pt_hi = 0;
  auto x = ag::parameter(random_complex(rng, {2, 3, 4, 5}), "x");
  auto w = ag::parameter(random_complex(rng, {3, 2, 3, 2}, 0.5), "w");
  auto b = ag::parameter(random_complex(rng, {2}, 0.1), "b");
  const size_t fo = g.tconv_out(4, 3, 2, 1, 0);
  const size_t to = g.tconv_out(5, 2, 1, 1, 0);
  ComplexTensor<double> r = random_complex(rng, {2, 2, fo, to});
  auto loss_fn = [&]() {
    return quadratic_loss(ag::complex_conv_transpose2d(x, w, b, g), r);
  };
  Rng pick(seed + 1);
  return grad_result("grad/conv_transpose2d",
                     gradcheck(loss_fn, {x, w, b}, 60, pick));
}

CheckResult check_grad_batch_norm(uint64_t seed) {
  Rng rng(seed);
  ComplexBatchNorm<double> bn;
  bn.init(3, "bn", rng);
  auto x = ag::parameter(random_complex(rng, {4, 3, 5, 6}), "x");
  ComplexTensor<double> r = random_complex(rng, {4, 3, 5, 6});
  std::vector<DVar> params{x, bn.gamma_rr, bn.gamma_ri, bn.gamma_ir,
                           bn.gamma_ii, bn.beta};
  auto loss_fn = [&]() { return quadratic_loss(bn.forward(x, true), r); };
  Rng pick(seed + 1);
  return grad_result("grad/batch_norm", gradcheck(loss_fn, params, 60, pick));
}

CheckResult check_grad_lstm(uint64_t seed) {
  Rng rng(seed);
  LstmLayer<double> lstm;
  lstm.init(5, 4, "lstm", rng);
  auto x = ag::parameter(random_complex(rng, {6, 2, 5}), "x");
  // keep the sequence input real-plane (LSTM runs per plane anyway)
  x->value.im.assign(x->value.im.size(), 0.0);
  ComplexTensor<double> r = random_complex(rng, {6, 2, 4});
  std::vector<DVar> params{x, lstm.w_x, lstm.w_h, lstm.b};
  auto loss_fn = [&]() {
    return quadratic_loss(lstm.forward(x, nullptr), r);
  };
  Rng pick(seed + 1);
  return grad_result("grad/lstm", gradcheck(loss_fn, params, 60, pick));
}

CheckResult check_grad_dense(uint64_t seed) {
  Rng rng(seed);
  ComplexDense<double> dense;
  dense.init(4, 3, "dense", rng);
  auto x = ag::parameter(random_complex(rng, {5, 4}), "x");
  ComplexTensor<double> r = random_complex(rng, {5, 3});
  std::vector<DVar> params{x, dense.weight, dense.bias};
  auto loss_fn = [&]() { return quadratic_loss(dense.forward(x), r); };
  Rng pick(seed + 1);
  return grad_result("grad/dense", gradcheck(loss_fn, params, 50, pick));
}

CheckResult check_grad_prelu(uint64_t seed) {
  Rng rng(seed);
  PRelu<double> act;
  act.init(3, "prelu");
  auto x = ag::parameter(random_complex(rng, {2, 3, 4, 5}), "x");
  ComplexTensor<double> r = random_complex(rng, {2, 3, 4, 5});
  std::vector<DVar> params{x, act.slope};
  auto loss_fn = [&]() { return quadratic_loss(act.forward(x), r); };
  Rng pick(seed + 1);
  return grad_result("grad/prelu", gradcheck(loss_fn, params, 50, pick));
}

CheckResult check_grad_stft(uint64_t seed) {
  Rng rng(seed);
  StftConfig cfg;
  cfg.win_len = 32;
  cfg.hop = 8;
  cfg.fft_len = 32;
  StftTransform<double> stft(cfg);
  ComplexTensor<double> wave({1, 96});
  for (size_t i = 0; i < wave.numel(); ++i) wave.re[i] = rng.uniform(-1, 1);
  auto x = ag::parameter(std::move(wave), "wave");
  ComplexTensor<double> r = random_complex(rng, {1, 96});
  r.im.assign(r.im.size(), 0.0);
  auto loss_fn = [&]() {
    DVar spec = stft.analyze(x);
    DVar back = stft.synthesize(spec, 96);
    return quadratic_loss(back, r);
  };
  Rng pick(seed + 1);
  return grad_result("grad/stft", gradcheck(loss_fn, {x}, 50, pick));
}

CheckResult check_grad_sisnr(uint64_t seed) {
  Rng rng(seed);
  ComplexTensor<double> est({2, 50}), ref({2, 50});
  for (size_t i = 0; i < est.numel(); ++i) {
    est.re[i] = rng.uniform(-1, 1);
    ref.re[i] = rng.uniform(-1, 1);
  }
  auto x = ag::parameter(std::move(est), "estimate");
  auto ref_c = ag::constant(std::move(ref));
  auto loss_fn = [&]() { return loss_sisnr(x, ref_c); };
  Rng pick(seed + 1);
  return grad_result("grad/sisnr", gradcheck(loss_fn, {x}, 60, pick));
}

CheckResult check_grad_tiny_model(uint64_t seed, Variant v, size_t samples) {
  Rng rng(seed);
  Model<double> model = Model<double>::build(tiny_config(v), seed);
  const size_t len = 3200;  // 0.2 s
  std::vector<float> speech = synth_tonal_speech(rng, len, 16000);
  std::vector<float> noise = synth_white_noise(rng, len, 0.1);
  ComplexTensor<double> noisy({1, len}), clean({1, len});
  for (size_t i = 0; i < len; ++i) {
    clean.re[i] = speech[i];
    noisy.re[i] = speech[i] + noise[i];
  }
  DVar noisy_v = ag::constant(std::move(noisy));
  DVar clean_v = ag::constant(std::move(clean));
  auto loss_fn = [&]() {
    return loss_sisnr(model.forward_wave(noisy_v, true), clean_v);
  };
  Rng pick(seed + 1);
  return grad_result("grad/tiny_model_" + variant_name(v),
                     gradcheck(loss_fn, model.param_vars(), samples, pick));
}

// --- scalar brute-force oracles ---

namespace {

// Independent sliding-window complex convolution.
ComplexTensor<double> conv_oracle(const ComplexTensor<double>& x,
                                  const ComplexTensor<double>& w,
                                  const ComplexTensor<double>& b,
                                  const ag::ConvGeom& g) {
  const size_t batch = x.dim(0), in_c = x.dim(1), fi = x.dim(2), ti = x.dim(3);
  const size_t out_c = w.dim(0), kf = w.dim(2), kt = w.dim(3);
  const size_t fo = g.conv_out(fi, kf, g.sf, g.pf_lo, g.pf_hi);
  const size_t to = g.conv_out(ti, kt, g.st, g.pt_lo, g.pt_hi);
  ComplexTensor<double> out({batch, out_c, fo, to});
  for (size_t bb = 0; bb < batch; ++bb) {
    for (size_t oc = 0; oc < out_c; ++oc) {
      for (size_t of = 0; of < fo; ++of) {
        for (size_t ot = 0; ot < to; ++ot) {
          Cplx acc(b.re[oc], b.im[oc]);
          for (size_t ic = 0; ic < in_c; ++ic) {
            for (size_t u = 0; u < kf; ++u) {
              for (size_t v = 0; v < kt; ++v) {
                const long f = static_cast<long>(of * g.sf + u) -
                               static_cast<long>(g.pf_lo);
                const long t = static_cast<long>(ot * g.st + v) -
                               static_cast<long>(g.pt_lo);
                if (f < 0 || f >= static_cast<long>(fi) || t < 0 ||
                    t >= static_cast<long>(ti)) {
                  continue;
                }
                const size_t xi = ((bb * in_c + ic) * fi + f) * ti + t;
                const size_t wi = ((oc * in_c + ic) * kf + u) * kt + v;
                acc += Cplx(x.re[xi], x.im[xi]) * Cplx(w.re[wi], w.im[wi]);
              }
            }
          }
          const size_t oi = ((bb * out_c + oc) * fo + of) * to + ot;
          out.re[oi] = acc.real();
          out.im[oi] = acc.imag();
        }
      }
    }
  }
  return out;
}

double max_abs_diff(const ComplexTensor<double>& a,
                    const ComplexTensor<double>& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.numel(); ++i) {
    m = std::max(m, std::abs(a.re[i] - b.re[i]));
    m = std::max(m, std::abs(a.im[i] - b.im[i]));
  }
  return m;
}

}  // namespace

CheckResult check_conv_oracle(uint64_t seed) {
  Rng rng(seed);
  ag::ConvGeom g;
  g.kf = 3; g.kt = 3; g.sf = 2; g.st = 1;
  g.pf_lo = g.pf_hi = 1; g.pt_lo = 2; g.pt_hi = 0;
  ComplexTensor<double> x = random_complex(rng, {2, 2, 5, 5});
  ComplexTensor<double> w = random_complex(rng, {3, 2, 3, 3});
  ComplexTensor<double> b = random_complex(rng, {3});
  ag::NoGradGuard guard;
  auto out = ag::complex_conv2d(ag::constant(x), ag::constant(w),
                                ag::constant(b), g);
  ComplexTensor<double> expect = conv_oracle(x, w, b, g);
  CheckResult r;
  r.name = "oracle/conv2d";
  r.measured = max_abs_diff(out->value, expect);
  r.bound = 1e-10;
  r.ok = r.measured <= r.bound;
  r.detail = "max abs err vs scalar loop";
  return r;
}

CheckResult check_conv_adjoint(uint64_t seed) {
  Rng rng(seed);
  ag::ConvGeom g;
  g.kf = 5; g.kt = 2; g.sf = 2; g.st = 1;
  g.pf_lo = g.pf_hi = 2; g.pt_lo = 1; g.pt_hi = 0;
  ComplexTensor<double> x = random_complex(rng, {1, 2, 8, 6});
  x.im.assign(x.im.size(), 0.0);
  ComplexTensor<double> w = random_complex(rng, {3, 2, 5, 2});
  w.im.assign(w.im.size(), 0.0);
  ag::NoGradGuard guard;
  auto xv = ag::constant(x);
  auto wv = ag::constant(w);
  auto fwd = ag::complex_conv2d(xv, wv, ag::Var<double>(), g);
  ComplexTensor<double> y = random_complex(rng, fwd->value.shape());
  y.im.assign(y.im.size(), 0.0);
  // Adjoint: identical pf_lo/pt_lo keep the index maps aligned; pf_hi is
  // chosen so the transposed output restores the original input size.
  ag::ConvGeom gt = g;
  gt.pf_hi = (fwd->value.dim(2) - 1) * g.sf + g.kf - g.pf_lo - x.dim(2);
  gt.pt_hi = (fwd->value.dim(3) - 1) * g.st + g.kt - g.pt_lo - x.dim(3);
  auto back = ag::complex_conv_transpose2d(ag::constant(y), wv,
                                           ag::Var<double>(), gt);
  double lhs = 0.0, rhs = 0.0;
  for (size_t i = 0; i < y.numel(); ++i) lhs += fwd->value.re[i] * y.re[i];
  for (size_t i = 0; i < x.numel(); ++i) rhs += x.re[i] * back->value.re[i];
  CheckResult r;
  r.name = "oracle/conv_adjoint";
  r.measured = std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
  r.bound = 1e-8;
  r.ok = r.measured <= r.bound;
  r.detail = "inner-product identity rel err";
  return r;
}

namespace {

// Explicit-loop LSTM, gate order (i, f, g, o), layout as stored by the layer.
std::vector<std::vector<double>> scalar_lstm(
    const std::vector<std::vector<double>>& x, const LstmLayer<double>& l) {
  const size_t hid = l.hidden, in = l.input;
  std::vector<double> h(hid, 0.0), c(hid, 0.0);
  std::vector<std::vector<double>> out;
  for (const auto& xt : x) {
    std::vector<double> pre(4 * hid, 0.0);
    for (size_t k = 0; k < 4 * hid; ++k) pre[k] = l.b->value.re[k];
    for (size_t i = 0; i < in; ++i) {
      for (size_t k = 0; k < 4 * hid; ++k) {
        pre[k] += xt[i] * l.w_x->value.re[i * 4 * hid + k];
      }
    }
    for (size_t j = 0; j < hid; ++j) {
      for (size_t k = 0; k < 4 * hid; ++k) {
        pre[k] += h[j] * l.w_h->value.re[j * 4 * hid + k];
      }
    }
    auto sig = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
    std::vector<double> hn(hid);
    for (size_t j = 0; j < hid; ++j) {
      const double gi = sig(pre[j]);
      const double gf = sig(pre[hid + j]);
      const double gg = std::tanh(pre[2 * hid + j]);
      const double go = sig(pre[3 * hid + j]);
      c[j] = gf * c[j] + gi * gg;
      hn[j] = go * std::tanh(c[j]);
    }
    h = hn;
    out.push_back(h);
  }
  return out;
}

}  // namespace

CheckResult check_lstm_oracle(uint64_t seed) {
  Rng rng(seed);
  ComplexLstmLayer<double> cl;
  cl.init(5, 4, "clstm", rng);
  const size_t steps = 7;
  ComplexTensor<double> x = random_complex(rng, {steps, 1, 5});
  ag::NoGradGuard guard;
  auto xr = ag::real_plane(ag::constant(x));
  auto xi = ag::imag_plane(ag::constant(x));
  auto [out_r, out_i] = cl.forward(xr, xi, nullptr);

  // independent scalar runs of the four sub-applications
  std::vector<std::vector<double>> re_seq(steps), im_seq(steps);
  for (size_t t = 0; t < steps; ++t) {
    re_seq[t].resize(5);
    im_seq[t].resize(5);
    for (size_t i = 0; i < 5; ++i) {
      re_seq[t][i] = x.re[(t * 1 + 0) * 5 + i];
      im_seq[t][i] = x.im[(t * 1 + 0) * 5 + i];
    }
  }
  auto f_rr = scalar_lstm(re_seq, cl.lstm_r);
  auto f_ir = scalar_lstm(im_seq, cl.lstm_r);
  auto f_ri = scalar_lstm(re_seq, cl.lstm_i);
  auto f_ii = scalar_lstm(im_seq, cl.lstm_i);
  double err = 0.0;
  for (size_t t = 0; t < steps; ++t) {
    for (size_t j = 0; j < 4; ++j) {
      const double er = f_rr[t][j] - f_ii[t][j];
      const double ei = f_ri[t][j] + f_ir[t][j];
      err = std::max(err, std::abs(er - out_r->value.re[t * 4 + j]));
      err = std::max(err, std::abs(ei - out_i->value.re[t * 4 + j]));
    }
  }
  CheckResult r;
  r.name = "oracle/complex_lstm";
  r.measured = err;
  r.bound = 1e-10;
  r.ok = r.measured <= r.bound;
  r.detail = "max abs err vs scalar sub-LSTM combination";
  return r;
}

CheckResult check_dense_oracle(uint64_t seed) {
  Rng rng(seed);
  ComplexDense<double> dense;
  dense.init(6, 4, "dense", rng);
  ComplexTensor<double> x = random_complex(rng, {3, 6});
  ag::NoGradGuard guard;
  auto out = dense.forward(ag::constant(x));
  double err = 0.0;
  for (size_t m = 0; m < 3; ++m) {
    for (size_t o = 0; o < 4; ++o) {
      Cplx acc(dense.bias->value.re[o], dense.bias->value.im[o]);
      for (size_t i = 0; i < 6; ++i) {
        acc += Cplx(x.re[m * 6 + i], x.im[m * 6 + i]) *
               Cplx(dense.weight->value.re[o * 6 + i],
                    dense.weight->value.im[o * 6 + i]);
      }
      err = std::max(err, std::abs(acc.real() - out->value.re[m * 4 + o]));
      err = std::max(err, std::abs(acc.imag() - out->value.im[m * 4 + o]));
    }
  }
  CheckResult r;
  r.name = "oracle/complex_dense";
  r.measured = err;
  r.bound = 1e-10;
  r.ok = r.measured <= r.bound;
  r.detail = "max abs err vs scalar matvec";
  return r;
}

// --- model probes ---

namespace {

Model<float> primed_default(Variant v, uint64_t seed) {
  Model<float> m = Model<float>::build(ModelConfig::defaults(v), seed);
  Rng rng(seed + 99);
  std::vector<float> warm = synth_white_noise(rng, 8000, 0.1);
  m.prime_norm(warm);
  return m;
}

}  // namespace

CheckResult check_causality(uint64_t seed) {
  // 64-bit probe: the look-ahead contract is structural, and the influence
  // of a frame at the full 6-frame distance is tiny through an untrained
  // decoder stack.
  Model<double> m = Model<double>::build(ModelConfig::defaults(Variant::E), seed);
  {
    Rng warm_rng(seed + 99);
    std::vector<float> warm_f = synth_white_noise(warm_rng, 8000, 0.1);
    std::vector<double> warm(warm_f.begin(), warm_f.end());
    m.prime_norm(warm);
  }
  Rng rng(seed);
  const size_t f0 = 256, frames = 16, probe = 5;
  ComplexTensor<double> spec({1, f0, frames});
  for (size_t i = 0; i < spec.numel(); ++i) {
    spec.re[i] = rng.uniform(-1, 1);
    spec.im[i] = rng.uniform(-1, 1);
  }
  ag::NoGradGuard guard;
  auto base = m.mask_from_spec(ag::constant(spec), false)->value;

  auto diff_upto = [&](const ComplexTensor<double>& out, size_t upto) {
    double d = 0.0;
    for (size_t k = 0; k < f0; ++k) {
      for (size_t t = 0; t <= upto; ++t) {
        d = std::max(d, std::abs(out.re[k * frames + t] -
                                 base.re[k * frames + t]));
        d = std::max(d, std::abs(out.im[k * frames + t] -
                                 base.im[k * frames + t]));
      }
    }
    return d;
  };

  ComplexTensor<double> p7 = spec;
  for (size_t k = 0; k < f0; ++k) p7.re[k * frames + probe + 7] += 0.5;
  auto out7 = m.mask_from_spec(ag::constant(std::move(p7)), false)->value;
  const double beyond = diff_upto(out7, probe);

  ComplexTensor<double> p6 = spec;
  for (size_t k = 0; k < f0; ++k) p6.re[k * frames + probe + 6] += 0.5;
  auto out6 = m.mask_from_spec(ag::constant(std::move(p6)), false)->value;
  double at_t = 0.0;
  for (size_t k = 0; k < f0; ++k) {
    at_t = std::max(at_t, std::abs(out6.re[k * frames + probe] -
                                   base.re[k * frames + probe]));
    at_t = std::max(at_t, std::abs(out6.im[k * frames + probe] -
                                   base.im[k * frames + probe]));
  }

  CheckResult r;
  r.name = "probe/causality";
  r.measured = beyond;
  r.bound = 1e-7;
  r.ok = beyond <= r.bound && at_t > 1e-12;
  std::ostringstream os;
  os << "leak beyond t+6 (t+6 sensitivity " << std::scientific
     << std::setprecision(2) << at_t << ")";
  r.detail = os.str();
  return r;
}

CheckResult check_stream_schedule(uint64_t seed) {
  Model<float> m = primed_default(Variant::E, seed);
  Rng rng(seed);
  auto st = m.open_stream();
  const size_t f0 = 256;
  size_t first_emit = SIZE_MAX;
  for (size_t t = 0; t < 10; ++t) {
    ComplexTensor<float> col({f0});
    for (size_t k = 0; k < f0; ++k) {
      col.re[k] = static_cast<float>(rng.uniform(-1, 1));
      col.im[k] = static_cast<float>(rng.uniform(-1, 1));
    }
    auto out = m.push_spec_frame(st, col);
    if (out && first_emit == SIZE_MAX) first_emit = t;
  }
  CheckResult r;
  r.name = "probe/frame_latency";
  r.measured = static_cast<double>(first_emit);
  r.bound = static_cast<double>(m.config().lookahead_frames);
  r.ok = first_emit == m.config().lookahead_frames;
  r.detail = "first emission push index (expect exactly look-ahead)";
  return r;
}

CheckResult check_streaming_equivalence(uint64_t seed, Variant v,
                                        double seconds) {
  Model<float> m = primed_default(v, seed);
  Rng rng(seed + 3);
  const size_t hop = m.config().stft.hop;
  const size_t len =
      static_cast<size_t>(seconds * m.config().stft.sample_rate) / hop * hop;
  std::vector<float> wave = synth_tonal_speech(rng, len, 16000);
  std::vector<float> noise = synth_white_noise(rng, len, 0.05);
  for (size_t i = 0; i < len; ++i) wave[i] += noise[i];

  auto offline = m.enhance(wave);

  auto st = m.open_stream();
  std::vector<float> streamed;
  for (size_t pos = 0; pos < len; pos += hop) {
    std::vector<float> chunk(wave.begin() + pos, wave.begin() + pos + hop);
    auto out = m.push_chunk(st, chunk);
    if (out) streamed.insert(streamed.end(), out->begin(), out->end());
  }
  std::vector<float> tail = m.flush_chunks(st);
  streamed.insert(streamed.end(), tail.begin(), tail.end());

  CheckResult r;
  r.name = "probe/streaming_" + variant_name(v);
  r.bound = 1e-5;
  if (streamed.size() != offline.wave.size()) {
    r.ok = false;
    r.measured = 1.0;
    r.detail = "length mismatch " + std::to_string(streamed.size()) + " vs " +
               std::to_string(offline.wave.size());
    return r;
  }
  double d = 0.0;
  for (size_t i = 0; i < streamed.size(); ++i) {
    d = std::max(d, std::abs(static_cast<double>(streamed[i]) -
                             offline.wave[i]));
  }
  r.measured = d;
  r.ok = d <= r.bound;
  r.detail = "max abs sample diff, streaming vs offline";
  return r;
}

CheckResult check_crm_reconstruction(uint64_t seed, size_t mixtures) {
  Rng rng(seed);
  StftTransform<float> stft{StftConfig{}};
  const size_t win = stft.config().win_len;
  double worst = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < mixtures; ++i) {
    const size_t len = 16000;
    std::vector<float> sp = (i % 2 == 0)
                                ? synth_tonal_speech(rng, len, 16000)
                                : synth_chirp(rng, len, 16000);
    AudioClip speech{sp, 16000};
    AudioClip noise{(i % 2 == 0)
                        ? synth_white_noise(rng, len, 0.3)
                        : synth_babble_noise(rng, len, 16000),
                    16000};
    Mixture mix = mix_at_snr(speech, noise, rng.uniform(-5.0, 20.0));

    // Zero-pad one window at both ends so analysis ramps live in the
    // padding and every real sample is compared.
    auto padded_of = [&](const std::vector<float>& x) {
      std::vector<float> p(win, 0.0f);
      p.insert(p.end(), x.begin(), x.end());
      p.resize(stft.padded_len(p.size() + win), 0.0f);
      return p;
    };
    std::vector<float> noisy = padded_of(mix.mixture.samples);
    std::vector<float> clean = padded_of(mix.clean.samples);
    auto y = stft.remove_dc(stft.analyze(noisy));
    auto s = stft.remove_dc(stft.analyze(clean));
    ComplexMask<float> mask = crm(s.bins, y.bins);
    ComplexTensor<float> rec =
        apply_mask_raw(y.bins, mask.planes, Variant::C);
    ComplexSpectrogram<float> rec_spec{std::move(rec), stft.config()};
    auto full = stft.restore_dc(rec_spec);
    std::vector<float> out_padded = stft.synthesize(full, 0);
    std::vector<float> out(out_padded.begin() + win,
                           out_padded.begin() + win + len);
    std::vector<float> ref(mix.clean.samples.begin(), mix.clean.samples.end());
    worst = std::min(worst, si_snr_db(out, ref));
  }
  CheckResult r;
  r.name = "oracle/crm_reconstruction";
  r.measured = worst;
  r.bound = 40.0;
  r.ok = worst >= 40.0;
  r.detail = "worst SI-SNR dB over " + std::to_string(mixtures) + " mixtures";
  return r;
}

CheckResult check_stft_roundtrip(uint64_t seed) {
  Rng rng(seed);
  StftTransform<float> stft{StftConfig{}};
  const size_t len = 16000;
  const size_t win = stft.config().win_len;
  std::vector<float> wave = synth_tonal_speech(rng, len, 16000);
  auto spec = stft.analyze(wave);
  std::vector<float> back = stft.synthesize(spec, len);
  // Exclude one window at each end: those samples never receive full
  // overlap-add coverage under the no-center-padding framing.
  std::vector<float> mid(back.begin() + win, back.end() - win);
  std::vector<float> ref(wave.begin() + win, wave.end() - win);
  const double db = si_snr_db(mid, ref);
  CheckResult r;
  r.name = "stft/roundtrip";
  r.measured = db;
  r.bound = 60.0;
  r.ok = db >= 60.0;
  r.detail = "SI-SNR dB of synthesize(analyze(x)) vs x, edges excluded";
  return r;
}

CheckResult check_stft_dft_oracle(uint64_t seed) {
  Rng rng(seed);
  StftConfig cfg;
  StftTransform<float> stft(cfg);
  const size_t len = 4000;
  std::vector<float> wave(len);
  for (auto& v : wave) v = static_cast<float>(rng.uniform(-1, 1));
  auto spec = stft.analyze(wave);

  const auto& win = stft.analysis_window();
  const size_t frames = spec.frames();
  const size_t freq = spec.freq_bins();
  double scale = 0.0;
  for (size_t i = 0; i < spec.bins.numel(); ++i) {
    scale = std::max({scale, std::abs(static_cast<double>(spec.bins.re[i])),
                      std::abs(static_cast<double>(spec.bins.im[i]))});
  }
  double err = 0.0;
  for (size_t t = 0; t < frames; ++t) {
    for (size_t k = 0; k < freq; ++k) {
      Cplx acc(0, 0);
      for (int n = 0; n < cfg.win_len; ++n) {
        const double v = wave[t * cfg.hop + n] * win[n];
        const double ang = -2.0 * 3.14159265358979323846 * k * n / cfg.fft_len;
        acc += v * Cplx(std::cos(ang), std::sin(ang));
      }
      err = std::max(err, std::abs(acc.real() - spec.bins.re[k * frames + t]));
      err = std::max(err, std::abs(acc.imag() - spec.bins.im[k * frames + t]));
    }
  }
  CheckResult r;
  r.name = "stft/dft_oracle";
  r.measured = err / std::max(1.0, scale);
  r.bound = 1e-5;
  r.ok = r.measured <= r.bound;
  r.detail = "max err vs naive DFT, relative to peak bin";
  return r;
}

std::vector<CheckResult> run_verification(uint64_t seed) {
  std::vector<CheckResult> results;
  results.push_back(check_grad_elementwise(seed));
  results.push_back(check_grad_conv(seed + 1));
  results.push_back(check_grad_conv_transpose(seed + 2));
  results.push_back(check_grad_batch_norm(seed + 3));
  results.push_back(check_grad_lstm(seed + 4));
  results.push_back(check_grad_dense(seed + 5));
  results.push_back(check_grad_prelu(seed + 6));
  results.push_back(check_grad_stft(seed + 7));
  results.push_back(check_grad_sisnr(seed + 8));
  results.push_back(check_grad_tiny_model(seed + 9, Variant::E, 40));
  results.push_back(check_conv_oracle(seed + 10));
  results.push_back(check_conv_adjoint(seed + 11));
  results.push_back(check_lstm_oracle(seed + 12));
  results.push_back(check_dense_oracle(seed + 13));
  results.push_back(check_stft_roundtrip(seed + 14));
  results.push_back(check_stft_dft_oracle(seed + 15));
  results.push_back(check_crm_reconstruction(seed + 16, 6));
  results.push_back(check_causality(seed + 17));
  results.push_back(check_stream_schedule(seed + 18));
  results.push_back(check_streaming_equivalence(seed + 19, Variant::E, 1.0));
  return results;
}

std::string format_check(const CheckResult& r) {
  std::ostringstream os;
  os << (r.ok ? "[ OK ] " : "[FAIL] ") << std::left << std::setw(28) << r.name
     << " measured=" << std::scientific << std::setprecision(3) << r.measured
     << " bound=" << r.bound << "  (" << r.detail << ")";
  return os.str();
}

}  // namespace dccrn
