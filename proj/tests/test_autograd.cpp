// Copyright 2026 The dccrn-cpp Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "dccrn/autograd.hpp"
#include "dccrn/gradcheck.hpp"

using namespace dccrn;
using namespace dccrn::ag;

namespace {
ComplexTensor<double> random_tensor(Rng& rng, std::vector<size_t> shape) {
  ComplexTensor<double> t(std::move(shape));
  for (size_t i = 0; i < t.numel(); ++i) {
    t.re[i] = rng.uniform(-1, 1);
    t.im[i] = rng.uniform(-1, 1);
  }
  return t;
}
}  // namespace

TEST_CASE("backward: loss = sum(x) gives all-ones gradient") {
  Rng rng(1);
  auto x = parameter(random_tensor(rng, {3, 4}), "x");
  Var<double> loss = real_plane(sum_all(x));
  backward(loss);
  REQUIRE(x->has_grad);
  for (size_t i = 0; i < x->grad.numel(); ++i) {
    CHECK(x->grad.re[i] == 1.0);
    CHECK(x->grad.im[i] == 0.0);
  }
}

TEST_CASE("backward: loss = sum(|x|^2) gives 2re / 2im") {
  Rng rng(2);
  auto x = parameter(random_tensor(rng, {2, 5}), "x");
  Var<double> mag = magnitude(x);
  Var<double> loss = real_plane(sum_all(cmul(mag, mag)));
  backward(loss);
  for (size_t i = 0; i < x->grad.numel(); ++i) {
    CHECK(x->grad.re[i] == doctest::Approx(2 * x->value.re[i]).epsilon(1e-12));
    CHECK(x->grad.im[i] == doctest::Approx(2 * x->value.im[i]).epsilon(1e-12));
  }
}

TEST_CASE("backward: rejects non-scalar and non-real losses") {
  Rng rng(3);
  auto x = parameter(random_tensor(rng, {2, 2}), "x");
  CHECK_THROWS_AS(backward(cadd(x, x)), ShapeError);
  auto s = parameter(ComplexTensor<double>::scalar(1.0, 0.5), "s");
  CHECK_THROWS_AS(backward(s), ShapeError);
}

TEST_CASE("backward: unreachable parameter gradient is exactly zero") {
  Rng rng(4);
  auto x = parameter(random_tensor(rng, {2, 2}), "x");
  auto orphan = parameter(random_tensor(rng, {3}), "orphan");
  Var<double> loss = real_plane(sum_all(cmul(x, conj(x))));
  backward(loss);
  CHECK_FALSE(orphan->has_grad);
  auto grads = gradient_map<double>({x, orphan});
  for (double v : grads["orphan"].re) CHECK(v == 0.0);
}

TEST_CASE("backward: each node visited once, graph freed afterwards") {
  Rng rng(5);
  auto x = parameter(random_tensor(rng, {2, 2}), "x");
  // diamond: loss depends on y twice
  Var<double> y = cmul(x, x);
  Var<double> z = cadd(y, y);
  Var<double> loss = real_plane(sum_all(cmul(z, conj(z))));
  Var<double> y_keep = y;
  backward(loss);
  // freed: edges and closures dropped after the single visit
  CHECK(y_keep->parents.empty());
  CHECK_FALSE(static_cast<bool>(y_keep->backprop));
  // gradient is correct for the shared path (checked against FD below)
  auto x2 = parameter(x->value, "x2");
  auto loss_fn = [&]() {
    Var<double> y2 = cmul(x2, x2);
    Var<double> z2 = cadd(y2, y2);
    return real_plane(sum_all(cmul(z2, conj(z2))));
  };
  Rng pick(6);
  auto rep = gradcheck(loss_fn, {x2}, 16, pick);
  CHECK(rep.max_rel_err <= 1e-4);
}

TEST_CASE("gradcheck across the elementwise op set") {
  Rng rng(7);
  auto a = parameter(random_tensor(rng, {3, 4}), "a");
  auto b = parameter(random_tensor(rng, {4}), "b");  // broadcast partner
  ComplexTensor<double> w = random_tensor(rng, {3, 4});
  auto loss_fn = [&]() {
    Var<double> prod = cmul(a, b);
    Var<double> s = csub(prod, conj(a));
    Var<double> m = magnitude(s, 1e-9);
    Var<double> ph = phase(s);
    Var<double> polar = combine(cmul(m, cos_re(ph)), cmul(m, sin_re(ph)));
    Var<double> mixed = cadd(polar, combine(tanh_re(real_plane(s)),
                                            sigmoid_re(imag_plane(s))));
    Var<double> weighted = cmul(mixed, constant(w));
    Var<double> sq = cmul(weighted, conj(weighted));
    Var<double> scaled = scale(add_scalar(real_plane(sq), 0.3), 0.7);
    Var<double> logd = log_re(add_scalar(scaled, 2.0));
    Var<double> ratio = rdiv(logd, add_scalar(real_plane(sum_all(sq)), 5.0));
    return real_plane(sum_all(ratio));
  };
  Rng pick(8);
  auto rep = gradcheck(loss_fn, {a, b}, 80, pick);
  CHECK(rep.max_rel_err <= 1e-4);
}

TEST_CASE("gradcheck: reductions, structure ops, sqrt") {
  Rng rng(9);
  auto a = parameter(random_tensor(rng, {2, 3, 4}), "a");
  auto loss_fn = [&]() {
    Var<double> m = mean_axes(a, {0, 2}, true);       // [1,3,1]
    Var<double> centered = csub(a, m);
    Var<double> v = sum_axes(cmul(centered, conj(centered)), {0, 2}, false);
    Var<double> sd = sqrt_re(add_scalar(real_plane(v), 1e-3));
    Var<double> p = permute(centered, {1, 0, 2});     // [3,2,4]
    Var<double> r = reshape(p, {3, 8});
    Var<double> sl = slice(r, 1, 2, 5);
    Var<double> cat = concat<double>({sl, sl}, 1);    // [3,10]
    Var<double> red = sum_axes(cmul(cat, conj(cat)), {1}, false);  // [3]
    return real_plane(sum_all(cmul(red, sd)));
  };
  Rng pick(10);
  auto rep = gradcheck(loss_fn, {a}, 60, pick);
  CHECK(rep.max_rel_err <= 1e-4);
}

TEST_CASE("gradcheck: matmul and complex_matmul") {
  Rng rng(11);
  auto a = parameter(random_tensor(rng, {3, 4}), "a");
  auto b = parameter(random_tensor(rng, {4, 5}), "b");
  auto w = parameter(random_tensor(rng, {2, 5}), "w");
  auto bias = parameter(random_tensor(rng, {2}), "bias");
  ComplexTensor<double> r = random_tensor(rng, {3, 2});
  auto loss_fn = [&]() {
    Var<double> mm = matmul(a, b);            // real planes [3,5]
    Var<double> cm = complex_matmul(mm, w, bias);  // [3,2]
    Var<double> weighted = cmul(cm, constant(r));
    return real_plane(sum_all(cmul(weighted, conj(weighted))));
  };
  Rng pick(12);
  auto rep = gradcheck(loss_fn, {a, b, w, bias}, 70, pick);
  CHECK(rep.max_rel_err <= 1e-4);
}

TEST_CASE("gradcheck: unfold/fold framing pair") {
  Rng rng(13);
  ComplexTensor<double> wv({1, 40});
  for (size_t i = 0; i < wv.numel(); ++i) wv.re[i] = rng.uniform(-1, 1);
  auto x = parameter(std::move(wv), "x");
  ComplexTensor<double> r({1, 40});
  for (size_t i = 0; i < r.numel(); ++i) r.re[i] = rng.uniform(-1, 1);
  auto loss_fn = [&]() {
    Var<double> frames = unfold_frames(x, 16, 8);     // [1,4,16]
    Var<double> folded = fold_frames(frames, 8, 40);
    Var<double> weighted = cmul(folded, constant(r));
    return real_plane(sum_all(cmul(weighted, conj(weighted))));
  };
  Rng pick(14);
  auto rep = gradcheck(loss_fn, {x}, 40, pick);
  CHECK(rep.max_rel_err <= 1e-4);
}

TEST_CASE("fold is the adjoint of unfold") {
  Rng rng(15);
  ComplexTensor<double> xv({2, 30});
  ComplexTensor<double> yv({2, 4, 9});
  for (size_t i = 0; i < xv.numel(); ++i) xv.re[i] = rng.uniform(-1, 1);
  for (size_t i = 0; i < yv.numel(); ++i) yv.re[i] = rng.uniform(-1, 1);
  NoGradGuard guard;
  auto x = constant(xv);
  auto y = constant(yv);
  auto ux = unfold_frames(x, 9, 7);  // [2,4,9]
  auto fy = fold_frames(y, 7, 30);   // [2,30]
  double lhs = 0, rhs = 0;
  for (size_t i = 0; i < ux->value.numel(); ++i)
    lhs += ux->value.re[i] * yv.re[i];
  for (size_t i = 0; i < fy->value.numel(); ++i)
    rhs += fy->value.re[i] * xv.re[i];
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("no-grad mode records nothing") {
  Rng rng(16);
  auto x = parameter(random_tensor(rng, {2, 2}), "x");
  NoGradGuard guard;
  Var<double> y = cmul(x, x);
  CHECK(y->parents.empty());
  CHECK_FALSE(y->requires_grad);
}

TEST_CASE("negative control: corrupted backward fails the checker") {
  Rng rng(17);
  auto x = parameter(random_tensor(rng, {3, 3}), "x");
  auto loss_fn = [&]() {
    // a deliberately wrong backward: forward is x*x but the gradient
    // pretends it is x
    auto bad = std::make_shared<Node<double>>();
    bad->value = raw_cmul(x->value, x->value);
    bad->parents = {x};
    bad->requires_grad = true;
    bad->backprop = [xp = x](Node<double>& n) { xp->accumulate(n.grad); };
    return real_plane(sum_all(cmul(bad, conj(bad))));
  };
  Rng pick(18);
  auto rep = gradcheck(loss_fn, {x}, 30, pick);
  CHECK(rep.max_rel_err > 1e-2);
}
