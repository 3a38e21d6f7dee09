// Copyright 2026 The dccrn-cpp Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "dccrn/common.hpp"
#include "dccrn/tensor.hpp"

using namespace dccrn;

namespace {
ComplexTensor<double> random_tensor(Rng& rng, std::vector<size_t> shape) {
  ComplexTensor<double> t(std::move(shape));
  for (size_t i = 0; i < t.numel(); ++i) {
    t.re[i] = rng.uniform(-2, 2);
    t.im[i] = rng.uniform(-2, 2);
  }
  return t;
}
}  // namespace

TEST_CASE("cmul: multiplicative identity") {
  Rng rng(1);
  ComplexTensor<double> x = random_tensor(rng, {4, 5});
  ComplexTensor<double> one = ComplexTensor<double>::full({4, 5}, 1.0, 0.0);
  ComplexTensor<double> out = raw_cmul(one, x);
  for (size_t i = 0; i < x.numel(); ++i) {
    CHECK(out.re[i] == x.re[i]);
    CHECK(out.im[i] == x.im[i]);
  }
}

TEST_CASE("cmul: j squared is -1") {
  ComplexTensor<double> j = ComplexTensor<double>::scalar(0.0, 1.0);
  ComplexTensor<double> out = raw_cmul(j, j);
  CHECK(out.re[0] == doctest::Approx(-1.0).epsilon(0));
  CHECK(out.im[0] == doctest::Approx(0.0).epsilon(0));
}

TEST_CASE("cmul: random 3x3 matches scalar complex oracle") {
  Rng rng(2);
  ComplexTensor<double> a = random_tensor(rng, {3, 3});
  ComplexTensor<double> b = random_tensor(rng, {3, 3});
  ComplexTensor<double> out = raw_cmul(a, b);
  for (size_t i = 0; i < 9; ++i) {
    std::complex<double> expect =
        std::complex<double>(a.re[i], a.im[i]) *
        std::complex<double>(b.re[i], b.im[i]);
    CHECK(std::abs(out.re[i] - expect.real()) <= 1e-12);
    CHECK(std::abs(out.im[i] - expect.imag()) <= 1e-12);
  }
}

TEST_CASE("cmul is bilinear") {
  Rng rng(3);
  ComplexTensor<double> a = random_tensor(rng, {2, 6});
  ComplexTensor<double> b = random_tensor(rng, {2, 6});
  ComplexTensor<double> c = random_tensor(rng, {2, 6});
  ComplexTensor<double> lhs = raw_cmul(raw_cadd(a, b), c);
  ComplexTensor<double> rhs = raw_cadd(raw_cmul(a, c), raw_cmul(b, c));
  for (size_t i = 0; i < lhs.numel(); ++i) {
    CHECK(std::abs(lhs.re[i] - rhs.re[i]) <= 1e-12);
    CHECK(std::abs(lhs.im[i] - rhs.im[i]) <= 1e-12);
  }
}

TEST_CASE("purely real operands stay bitwise real through cadd/cmul") {
  Rng rng(4);
  ComplexTensor<double> a = random_tensor(rng, {3, 7});
  ComplexTensor<double> b = random_tensor(rng, {3, 7});
  a.im.assign(a.im.size(), 0.0);
  b.im.assign(b.im.size(), 0.0);
  ComplexTensor<double> sum = raw_cadd(a, b);
  ComplexTensor<double> prod = raw_cmul(a, b);
  for (size_t i = 0; i < sum.numel(); ++i) {
    CHECK(std::signbit(sum.im[i]) == false);
    CHECK(sum.im[i] == 0.0);
    CHECK(prod.im[i] == 0.0);
  }
  CHECK(sum.is_real());
  CHECK(prod.is_real());
}

TEST_CASE("magnitude: 3-4-5 triangle") {
  ComplexTensor<double> x = ComplexTensor<double>::scalar(3.0, 4.0);
  CHECK(raw_magnitude(x).re[0] == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("phase: pure imaginary is pi/2, range is (-pi, pi]") {
  ComplexTensor<double> j = ComplexTensor<double>::scalar(0.0, 1.0);
  CHECK(raw_phase(j).re[0] == doctest::Approx(M_PI / 2).epsilon(1e-15));
  ComplexTensor<double> neg = ComplexTensor<double>::scalar(-1.0, -0.0);
  CHECK(raw_phase(neg).re[0] == doctest::Approx(M_PI).epsilon(1e-15));
}

TEST_CASE("magnitude/phase round-trip reconstructs the tensor") {
  Rng rng(5);
  ComplexTensor<double> x = random_tensor(rng, {4, 4});
  ComplexTensor<double> m = raw_magnitude(x);
  ComplexTensor<double> p = raw_phase(x);
  for (size_t i = 0; i < x.numel(); ++i) {
    CHECK(std::abs(m.re[i] * std::cos(p.re[i]) - x.re[i]) <= 1e-12);
    CHECK(std::abs(m.re[i] * std::sin(p.re[i]) - x.im[i]) <= 1e-12);
  }
}

TEST_CASE("broadcasting: shapes and mismatch error") {
  ComplexTensor<double> a({2, 3, 4});
  ComplexTensor<double> b({3, 1});
  ComplexTensor<double> out = raw_cadd(a, b);
  CHECK(out.shape() == std::vector<size_t>{2, 3, 4});

  ComplexTensor<double> bad({5, 1});
  CHECK_THROWS_WITH_AS(raw_cadd(a, bad),
                       doctest::Contains("[2x3x4]"), ShapeError);
  try {
    raw_cadd(a, bad);
  } catch (const ShapeError& e) {
    CHECK(std::string(e.what()).find("[5x1]") != std::string::npos);
  }
}

TEST_CASE("broadcast values accumulate correctly under reduction") {
  // reduce_to_shape is the adjoint of broadcasting
  Rng rng(6);
  ComplexTensor<double> g = random_tensor(rng, {2, 3});
  ComplexTensor<double> red = reduce_to_shape(g, {1, 3});
  for (size_t c = 0; c < 3; ++c) {
    CHECK(red.re[c] ==
          doctest::Approx(g.re[c] + g.re[3 + c]).epsilon(1e-15));
  }
}

TEST_CASE("permute round-trip and layout") {
  Rng rng(7);
  ComplexTensor<double> x = random_tensor(rng, {2, 3, 4});
  ComplexTensor<double> p = raw_permute(x, {2, 0, 1});
  CHECK(p.shape() == std::vector<size_t>{4, 2, 3});
  // p[k][b][c] == x[b][c][k]
  for (size_t b = 0; b < 2; ++b)
    for (size_t c = 0; c < 3; ++c)
      for (size_t k = 0; k < 4; ++k) {
        CHECK(p.re[(k * 2 + b) * 3 + c] == x.re[(b * 3 + c) * 4 + k]);
      }
  ComplexTensor<double> back = raw_permute(p, {1, 2, 0});
  for (size_t i = 0; i < x.numel(); ++i) CHECK(back.re[i] == x.re[i]);
}

TEST_CASE("reshape validates element count") {
  ComplexTensor<double> x({2, 3});
  CHECK_THROWS_AS((void)x.reshaped({4, 2}), ShapeError);
  CHECK(x.reshaped({6}).shape() == std::vector<size_t>{6});
}
