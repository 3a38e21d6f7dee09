// Copyright 2026 The dccrn-cpp Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dccrn/layers.hpp"

#include <cmath>

namespace dccrn {

namespace {

// Uniform fan-in init; complex kernels get the extra 1/sqrt(2) so the
// complex magnitude variance matches a real layer of the same fan-in.
template <typename S>
void fill_uniform(ComplexTensor<S>& t, double bound, Rng& rng,
                  bool both_planes) {
  for (size_t i = 0; i < t.numel(); ++i) {
    t.re[i] = static_cast<S>(rng.uniform(-bound, bound));
    if (both_planes) t.im[i] = static_cast<S>(rng.uniform(-bound, bound));
  }
}

}  // namespace

// --- ComplexConv2d ---

template <typename S>
void ComplexConv2d<S>::init(size_t out_c, size_t in_c, const ag::ConvGeom& g,
                            const std::string& name, Rng& rng) {
  geom = g;
  ComplexTensor<S> w({out_c, in_c, g.kf, g.kt});
  const double bound = 1.0 / std::sqrt(2.0 * in_c * g.kf * g.kt);
  fill_uniform(w, bound, rng, true);
  weight = ag::parameter(std::move(w), name + ".w");
  bias = ag::parameter(ComplexTensor<S>({out_c}), name + ".b");
}

template <typename S>
ag::Var<S> ComplexConv2d<S>::forward_window(const ag::Var<S>& x) const {
  ag::ConvGeom g = geom;
  g.pt_lo = 0;
  g.pt_hi = 0;
  return ag::complex_conv2d(x, weight, bias, g);
}

template <typename S>
void ComplexConv2d<S>::collect(const std::string& prefix,
                               ParamList<S>& out) const {
  out.push_back({weight, true});
  out.push_back({bias, true});
  (void)prefix;
}

// --- ComplexConvTranspose2d ---

template <typename S>
void ComplexConvTranspose2d<S>::init(size_t in_c, size_t out_c,
                                     const ag::ConvGeom& g,
                                     const std::string& name, Rng& rng) {
  geom = g;
  ComplexTensor<S> w({in_c, out_c, g.kf, g.kt});
  const double bound = 1.0 / std::sqrt(2.0 * in_c * g.kf * g.kt);
  fill_uniform(w, bound, rng, true);
  weight = ag::parameter(std::move(w), name + ".w");
  bias = ag::parameter(ComplexTensor<S>({out_c}), name + ".b");
}

template <typename S>
ag::Var<S> ComplexConvTranspose2d<S>::forward_window(const ag::Var<S>& x) const {
  ag::ConvGeom g = geom;
  g.pt_lo = 1;
  g.pt_hi = 1;
  return ag::complex_conv_transpose2d(x, weight, bias, g);
}

template <typename S>
void ComplexConvTranspose2d<S>::collect(const std::string& prefix,
                                        ParamList<S>& out) const {
  out.push_back({weight, true});
  out.push_back({bias, true});
  (void)prefix;
}

// --- ComplexBatchNorm ---

template <typename S>
void ComplexBatchNorm<S>::init(size_t c, const std::string& name, Rng& rng) {
  channels = c;
  const S inv_sqrt2 = static_cast<S>(1.0 / std::sqrt(2.0));
  gamma_rr = ag::parameter(ComplexTensor<S>::full({c}, inv_sqrt2),
                           name + ".gamma_rr");
  gamma_ri = ag::parameter(ComplexTensor<S>({c}), name + ".gamma_ri");
  gamma_ir = ag::parameter(ComplexTensor<S>({c}), name + ".gamma_ir");
  gamma_ii = ag::parameter(ComplexTensor<S>::full({c}, inv_sqrt2),
                           name + ".gamma_ii");
  beta = ag::parameter(ComplexTensor<S>({c}), name + ".beta");
  run_mean = ComplexTensor<S>({c});
  run_vrr = ComplexTensor<S>::full({c}, S(1));
  run_vri = ComplexTensor<S>({c});
  run_vii = ComplexTensor<S>::full({c}, S(1));
  run_ready = ComplexTensor<S>({1});
  (void)rng;
}

template <typename S>
ag::Var<S> ComplexBatchNorm<S>::forward(const ag::Var<S>& x, bool train) {
  using namespace ag;
  const auto& shape = x->value.shape();
  if (shape.size() != 4 || shape[1] != channels) {
    throw ShapeError("complex_batch_norm: expected [B x " +
                     std::to_string(channels) + " x F x T], got " +
                     shape_str(shape));
  }
  const std::vector<size_t> cshape{1, channels, 1, 1};
  Var<S> xr = real_plane(x);
  Var<S> xi = imag_plane(x);

  Var<S> mu_r, mu_i, vrr, vri, vii;
  if (train) {
    mu_r = mean_axes(xr, {0, 2, 3}, true);  // [1,C,1,1]
    mu_i = mean_axes(xi, {0, 2, 3}, true);
    Var<S> cr = csub(xr, mu_r);
    Var<S> ci = csub(xi, mu_i);
    vrr = add_scalar(mean_axes(cmul(cr, cr), {0, 2, 3}, true), epsilon);
    vii = add_scalar(mean_axes(cmul(ci, ci), {0, 2, 3}, true), epsilon);
    vri = mean_axes(cmul(cr, ci), {0, 2, 3}, true);
    // Update the running statistics with detached values.
    const S m = momentum;
    for (size_t c = 0; c < channels; ++c) {
      run_mean.re[c] = (S(1) - m) * run_mean.re[c] + m * mu_r->value.re[c];
      run_mean.im[c] = (S(1) - m) * run_mean.im[c] + m * mu_i->value.re[c];
      run_vrr.re[c] =
          (S(1) - m) * run_vrr.re[c] + m * (vrr->value.re[c] - epsilon);
      run_vii.re[c] =
          (S(1) - m) * run_vii.re[c] + m * (vii->value.re[c] - epsilon);
      run_vri.re[c] = (S(1) - m) * run_vri.re[c] + m * vri->value.re[c];
    }
    run_ready.re[0] = S(1);
  } else {
    if (run_ready.re[0] == S(0)) {
      throw DataError(
          "complex_batch_norm: eval mode before any training step "
          "(no running statistics)");
    }
    ComplexTensor<S> mr(cshape), mi(cshape), trr(cshape), tri(cshape),
        tii(cshape);
    for (size_t c = 0; c < channels; ++c) {
      mr.re[c] = run_mean.re[c];
      mi.re[c] = run_mean.im[c];
      trr.re[c] = run_vrr.re[c] + epsilon;
      tii.re[c] = run_vii.re[c] + epsilon;
      tri.re[c] = run_vri.re[c];
    }
    mu_r = constant(std::move(mr));
    mu_i = constant(std::move(mi));
    vrr = constant(std::move(trr));
    vii = constant(std::move(tii));
    vri = constant(std::move(tri));
  }

  Var<S> cr = csub(xr, mu_r);
  Var<S> ci = csub(xi, mu_i);

  // Closed-form inverse square root of [[vrr, vri], [vri, vii]].
  Var<S> det = csub(cmul(vrr, vii), cmul(vri, vri));
  Var<S> s = sqrt_re(det);
  Var<S> trace_t = sqrt_re(cadd(cadd(vrr, vii), scale(s, S(2))));
  Var<S> inv_st = rdiv(constant(ComplexTensor<S>::full(cshape, S(1))),
                       cmul(s, trace_t));
  Var<S> w_rr = cmul(cadd(vii, s), inv_st);
  Var<S> w_ii = cmul(cadd(vrr, s), inv_st);
  Var<S> w_ri = scale(cmul(vri, inv_st), S(-1));

  Var<S> wh_r = cadd(cmul(w_rr, cr), cmul(w_ri, ci));
  Var<S> wh_i = cadd(cmul(w_ri, cr), cmul(w_ii, ci));

  Var<S> g_rr = reshape(gamma_rr, cshape);
  Var<S> g_ri = reshape(gamma_ri, cshape);
  Var<S> g_ir = reshape(gamma_ir, cshape);
  Var<S> g_ii = reshape(gamma_ii, cshape);
  Var<S> beta_r = reshape(real_plane(beta), cshape);
  Var<S> beta_i = reshape(imag_plane(beta), cshape);

  Var<S> out_r = cadd(cadd(cmul(g_rr, wh_r), cmul(g_ri, wh_i)), beta_r);
  Var<S> out_i = cadd(cadd(cmul(g_ir, wh_r), cmul(g_ii, wh_i)), beta_i);
  return combine(out_r, out_i);
}

template <typename S>
void ComplexBatchNorm<S>::collect(const std::string& prefix,
                                  ParamList<S>& out) const {
  out.push_back({gamma_rr, false});
  out.push_back({gamma_ri, false});
  out.push_back({gamma_ir, false});
  out.push_back({gamma_ii, false});
  out.push_back({beta, true});
  (void)prefix;
}

template <typename S>
void ComplexBatchNorm<S>::collect_buffers(const std::string& prefix,
                                          BufferList<S>& out) {
  out.push_back({prefix + ".run_mean", &run_mean});
  out.push_back({prefix + ".run_vrr", &run_vrr});
  out.push_back({prefix + ".run_vri", &run_vri});
  out.push_back({prefix + ".run_vii", &run_vii});
  out.push_back({prefix + ".run_ready", &run_ready});
}

// --- PRelu ---

template <typename S>
void PRelu<S>::init(size_t channels, const std::string& name) {
  slope = ag::parameter(ComplexTensor<S>::full({channels}, S(0.25)),
                        name + ".slope");
}

template <typename S>
void PRelu<S>::collect(const std::string& prefix, ParamList<S>& out) const {
  out.push_back({slope, false});
  (void)prefix;
}

// --- LstmLayer ---

template <typename S>
void LstmLayer<S>::init(size_t in, size_t hid, const std::string& name,
                        Rng& rng, bool forget_bias_one) {
  input = in;
  hidden = hid;
  const double bound = 1.0 / std::sqrt(static_cast<double>(hid));
  ComplexTensor<S> wx({in, 4 * hid}), wh({hid, 4 * hid});
  fill_uniform(wx, bound, rng, false);
  fill_uniform(wh, bound, rng, false);
  w_x = ag::parameter(std::move(wx), name + ".w_x");
  w_h = ag::parameter(std::move(wh), name + ".w_h");
  ComplexTensor<S> bias({4 * hid});
  if (forget_bias_one) {
    for (size_t i = hid; i < 2 * hid; ++i) bias.re[i] = S(1);
  }
  b = ag::parameter(std::move(bias), name + ".b");
}

template <typename S>
ag::Var<S> LstmLayer<S>::forward(const ag::Var<S>& x,
                                 LstmState<S>* state) const {
  using namespace ag;
  const auto& shape = x->value.shape();
  if (shape.size() != 3 || shape[2] != input) {
    throw ShapeError("lstm: expected [T x B x " + std::to_string(input) +
                     "], got " + shape_str(shape));
  }
  const size_t steps = shape[0], batch = shape[1];
  if (steps == 0) throw DataError("lstm: empty sequence");

  Var<S> h, c;
  if (state && state->h.numel() > 0) {
    h = constant(state->h);
    c = constant(state->c);
  } else {
    h = constant(ComplexTensor<S>({batch, hidden}));
    c = constant(ComplexTensor<S>({batch, hidden}));
  }

  // Input projection for the whole sequence in one product.
  Var<S> flat = reshape(x, {steps * batch, input});
  Var<S> xp = matmul(flat, w_x);  // [T*B x 4H]
  xp = reshape(xp, {steps, batch, 4 * hidden});

  std::vector<Var<S>> outputs;
  outputs.reserve(steps);
  for (size_t t = 0; t < steps; ++t) {
    Var<S> pre = reshape(slice(xp, 0, t, 1), {batch, 4 * hidden});
    pre = cadd(pre, matmul(h, w_h));
    pre = cadd(pre, b);
    Var<S> gi = sigmoid_re(slice(pre, 1, 0, hidden));
    Var<S> gf = sigmoid_re(slice(pre, 1, hidden, hidden));
    Var<S> gg = tanh_re(slice(pre, 1, 2 * hidden, hidden));
    Var<S> go = sigmoid_re(slice(pre, 1, 3 * hidden, hidden));
    c = cadd(cmul(gf, c), cmul(gi, gg));
    h = cmul(go, tanh_re(c));
    outputs.push_back(reshape(h, {1, batch, hidden}));
  }
  if (state) {
    state->h = h->value;
    state->c = c->value;
  }
  return steps == 1 ? outputs[0] : concat(outputs, 0);
}

template <typename S>
void LstmLayer<S>::collect(const std::string& prefix, ParamList<S>& out) const {
  out.push_back({w_x, false});
  out.push_back({w_h, false});
  out.push_back({b, false});
  (void)prefix;
}

// --- ComplexLstmLayer ---

template <typename S>
void ComplexLstmLayer<S>::init(size_t in, size_t hid, const std::string& name,
                               Rng& rng, bool forget_bias_one) {
  lstm_r.init(in, hid, name + ".r", rng, forget_bias_one);
  lstm_i.init(in, hid, name + ".i", rng, forget_bias_one);
}

template <typename S>
std::pair<ag::Var<S>, ag::Var<S>> ComplexLstmLayer<S>::forward(
    const ag::Var<S>& x_re, const ag::Var<S>& x_im,
    ComplexLstmState<S>* state) const {
  using namespace ag;
  Var<S> f_rr = lstm_r.forward(x_re, state ? &state->rr : nullptr);
  Var<S> f_ir = lstm_r.forward(x_im, state ? &state->ir : nullptr);
  Var<S> f_ri = lstm_i.forward(x_re, state ? &state->ri : nullptr);
  Var<S> f_ii = lstm_i.forward(x_im, state ? &state->ii : nullptr);
  return {csub(f_rr, f_ii), cadd(f_ri, f_ir)};
}

template <typename S>
void ComplexLstmLayer<S>::collect(const std::string& prefix,
                                  ParamList<S>& out) const {
  lstm_r.collect(prefix, out);
  lstm_i.collect(prefix, out);
}

// --- Dense ---

template <typename S>
void Dense<S>::init(size_t in, size_t out, const std::string& name, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  ComplexTensor<S> w({in, out});
  fill_uniform(w, bound, rng, false);
  weight = ag::parameter(std::move(w), name + ".w");
  bias = ag::parameter(ComplexTensor<S>({out}), name + ".b");
}

template <typename S>
ag::Var<S> Dense<S>::forward(const ag::Var<S>& x) const {
  return ag::cadd(ag::matmul(x, weight), bias);
}

template <typename S>
void Dense<S>::collect(const std::string& prefix, ParamList<S>& out) const {
  out.push_back({weight, false});
  out.push_back({bias, false});
  (void)prefix;
}

// --- ComplexDense ---

template <typename S>
void ComplexDense<S>::init(size_t in, size_t out, const std::string& name,
                           Rng& rng) {
  const double bound = 1.0 / std::sqrt(2.0 * in);
  ComplexTensor<S> w({out, in});
  fill_uniform(w, bound, rng, true);
  weight = ag::parameter(std::move(w), name + ".w");
  bias = ag::parameter(ComplexTensor<S>({out}), name + ".b");
}

template <typename S>
void ComplexDense<S>::collect(const std::string& prefix,
                              ParamList<S>& out) const {
  out.push_back({weight, true});
  out.push_back({bias, true});
  (void)prefix;
}

#define DCCRN_INSTANTIATE_LAYERS(S)     \
  template struct ComplexConv2d<S>;     \
  template struct ComplexConvTranspose2d<S>; \
  template struct ComplexBatchNorm<S>;  \
  template struct PRelu<S>;             \
  template struct LstmLayer<S>;         \
  template struct ComplexLstmLayer<S>;  \
  template struct Dense<S>;             \
  template struct ComplexDense<S>;

DCCRN_INSTANTIATE_LAYERS(float)
DCCRN_INSTANTIATE_LAYERS(double)

}  // namespace dccrn
