// Copyright 2026 The dccrn-cpp Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dccrn/autograd.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace dccrn {
namespace ag {

namespace {
thread_local bool g_grad_enabled = true;
}

bool grad_enabled() { return g_grad_enabled; }

NoGradGuard::NoGradGuard() : saved_(g_grad_enabled) { g_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { g_grad_enabled = saved_; }

namespace {

template <typename S>
Var<S> make_node(ComplexTensor<S> value, std::vector<Var<S>> parents,
                 std::function<void(Node<S>&)> bp) {
  auto n = std::make_shared<Node<S>>();
  n->value = std::move(value);
  bool record = g_grad_enabled;
  if (record) {
    bool any = false;
    for (const auto& p : parents) {
      if (p && p->requires_grad) {
        any = true;
        break;
      }
    }
    record = any;
  }
  if (record) {
    n->parents = std::move(parents);
    n->backprop = std::move(bp);
    n->requires_grad = true;
  }
  return n;
}

template <typename S>
using RowMat =
    Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename S>
using MapMat = Eigen::Map<RowMat<S>>;
template <typename S>
using CMapMat = Eigen::Map<const RowMat<S>>;

// C[m x n] = A[m x k] * B[k x n], optionally transposing inputs whose
// stored shapes are then [k x m] / [n x k].
template <typename S>
void gemm(const S* a, const S* b, S* c, size_t m, size_t k, size_t n,
          bool trans_a, bool trans_b, bool accumulate) {
  MapMat<S> C(c, m, n);
  if (!trans_a && !trans_b) {
    CMapMat<S> A(a, m, k), B(b, k, n);
    if (accumulate)
      C.noalias() += A * B;
    else
      C.noalias() = A * B;
  } else if (trans_a && !trans_b) {
    CMapMat<S> A(a, k, m), B(b, k, n);
    if (accumulate)
      C.noalias() += A.transpose() * B;
    else
      C.noalias() = A.transpose() * B;
  } else if (!trans_a && trans_b) {
    CMapMat<S> A(a, m, k), B(b, n, k);
    if (accumulate)
      C.noalias() += A * B.transpose();
    else
      C.noalias() = A * B.transpose();
  } else {
    CMapMat<S> A(a, k, m), B(b, n, k);
    if (accumulate)
      C.noalias() += A.transpose() * B.transpose();
    else
      C.noalias() = A.transpose() * B.transpose();
  }
}

}  // namespace

template <typename S>
Var<S> constant(ComplexTensor<S> v) {
  auto n = std::make_shared<Node<S>>();
  n->value = std::move(v);
  return n;
}

template <typename S>
Var<S> parameter(ComplexTensor<S> v, std::string name) {
  auto n = std::make_shared<Node<S>>();
  n->value = std::move(v);
  n->requires_grad = true;
  n->name = std::move(name);
  return n;
}

// --- elementwise complex ---

template <typename S>
Var<S> cadd(const Var<S>& a, const Var<S>& b) {
  ComplexTensor<S> out = raw_cadd(a->value, b->value);
  return make_node<S>(std::move(out), {a, b}, [a, b](Node<S>& n) {
    if (a->requires_grad) a->accumulate(reduce_to_shape(n.grad, a->value.shape()));
    if (b->requires_grad) b->accumulate(reduce_to_shape(n.grad, b->value.shape()));
  });
}

template <typename S>
Var<S> csub(const Var<S>& a, const Var<S>& b) {
  ComplexTensor<S> out = raw_csub(a->value, b->value);
  return make_node<S>(std::move(out), {a, b}, [a, b](Node<S>& n) {
    if (a->requires_grad) a->accumulate(reduce_to_shape(n.grad, a->value.shape()));
    if (b->requires_grad) {
      ComplexTensor<S> g = n.grad;
      for (size_t i = 0; i < g.numel(); ++i) {
        g.re[i] = -g.re[i];
        g.im[i] = -g.im[i];
      }
      b->accumulate(reduce_to_shape(g, b->value.shape()));
    }
  });
}

template <typename S>
Var<S> cmul(const Var<S>& a, const Var<S>& b) {
  ComplexTensor<S> out = raw_cmul(a->value, b->value);
  return make_node<S>(std::move(out), {a, b}, [a, b](Node<S>& n) {
    // out.re = ar br - ai bi ; out.im = ar bi + ai br
    if (a->requires_grad) {
      ComplexTensor<S> da = raw_cmul(n.grad, [&] {
        ComplexTensor<S> cb = b->value;
        for (size_t i = 0; i < cb.numel(); ++i) cb.im[i] = -cb.im[i];
        return cb;
      }());
      a->accumulate(reduce_to_shape(da, a->value.shape()));
    }
    if (b->requires_grad) {
      ComplexTensor<S> db = raw_cmul(n.grad, [&] {
        ComplexTensor<S> ca = a->value;
        for (size_t i = 0; i < ca.numel(); ++i) ca.im[i] = -ca.im[i];
        return ca;
      }());
      b->accumulate(reduce_to_shape(db, b->value.shape()));
    }
  });
}

template <typename S>
Var<S> conj(const Var<S>& a) {
  ComplexTensor<S> out = a->value;
  for (size_t i = 0; i < out.numel(); ++i) out.im[i] = -out.im[i];
  return make_node<S>(std::move(out), {a}, [a](Node<S>& n) {
    if (!a->requires_grad) return;
    ComplexTensor<S> g = n.grad;
    for (size_t i = 0; i < g.numel(); ++i) g.im[i] = -g.im[i];
    a->accumulate(g);
  });
}

template <typename S>
Var<S> magnitude(const Var<S>& a, S eps) {
  ComplexTensor<S> out = raw_magnitude(a->value, eps);
  ComplexTensor<S> saved = out;
  return make_node<S>(std::move(out), {a}, [a, saved](Node<S>& n) {
    if (!a->requires_grad) return;
    ComplexTensor<S> g(a->value.shape());
    for (size_t i = 0; i < g.numel(); ++i) {
      S m = saved.re[i];
      if (m > S(0)) {
        g.re[i] = n.grad.re[i] * a->value.re[i] / m;
        g.im[i] = n.grad.re[i] * a->value.im[i] / m;
      }
    }
    a->accumulate(g);
  });
}

template <typename S>
Var<S> phase(const Var<S>& a) {
  ComplexTensor<S> out = raw_phase(a->value);
  return make_node<S>(std::move(out), {a}, [a](Node<S>& n) {
    if (!a->requires_grad) return;
    ComplexTensor<S> g(a->value.shape());
    for (size_t i = 0; i < g.numel(); ++i) {
      S re = a->value.re[i], im = a->value.im[i];
      S d = re * re + im * im + S(1e-30);
      g.re[i] = n.grad.re[i] * (-im / d);
      g.im[i] = n.grad.re[i] * (re / d);
    }
    a->accumulate(g);
  });
}

template <typename S>
Var<S> real_plane(const Var<S>& a) {
  ComplexTensor<S> out(a->value.shape());
  out.re = a->value.re;
  return make_node<S>(std::move(out), {a}, [a](Node<S>& n) {
    if (!a->requires_grad) return;
    ComplexTensor<S> g(a->value.shape());
    g.re = n.grad.re;
    a->accumulate(g);
  });
}

template <typename S>
Var<S> imag_plane(const Var<S>& a) {
  ComplexTensor<S> out(a->value.shape());
  out.re = a->value.im;
  return make_node<S>(std::move(out), {a}, [a](Node<S>& n) {
    if (!a->requires_grad) return;
    ComplexTensor<S> g(a->value.shape());
    g.im = n.grad.re;
    a->accumulate(g);
  });
}

template <typename S>
Var<S> combine(const Var<S>& re_v, const Var<S>& im_v) {
  if (!(re_v->value.shape() == im_v->value.shape())) {
    throw ShapeError("combine: plane shapes differ, " +
                     shape_str(re_v->value.shape()) + " vs " +
                     shape_str(im_v->value.shape()));
  }
  ComplexTensor<S> out(re_v->value.shape());
  out.re = re_v->value.re;
  out.im = im_v->value.re;
  return make_node<S>(std::move(out), {re_v, im_v}, [re_v, im_v](Node<S>& n) {
    if (re_v->requires_grad) {
      ComplexTensor<S> g(re_v->value.shape());
      g.re = n.grad.re;
      re_v->accumulate(g);
    }
    if (im_v->requires_grad) {
      ComplexTensor<S> g(im_v->value.shape());
      g.re = n.grad.im;
      im_v->accumulate(g);
    }
  });
}

// --- real-plane elementwise ---

namespace {
template <typename S>
ComplexTensor<S> real_reciprocal(const ComplexTensor<S>& t) {
  ComplexTensor<S> inv(t.shape());
  for (size_t i = 0; i < inv.numel(); ++i) inv.re[i] = S(1) / t.re[i];
  return inv;
}
}  // namespace

template <typename S>
Var<S> rdiv(const Var<S>& a, const Var<S>& b) {
  // out.re = a.re / b.re (imaginary planes ignored; inputs expected real)
  ComplexTensor<S> out = raw_cmul(a->value, real_reciprocal(b->value));
  out.im.assign(out.im.size(), S(0));
  return make_node<S>(std::move(out), {a, b}, [a, b](Node<S>& n) {
    ComplexTensor<S> binv = real_reciprocal(b->value);
    if (a->requires_grad) {
      ComplexTensor<S> da = raw_cmul(n.grad, binv);
      da.im.assign(da.im.size(), S(0));
      a->accumulate(reduce_to_shape(da, a->value.shape()));
    }
    if (b->requires_grad) {
      // db = -g * a / b^2
      ComplexTensor<S> db = raw_cmul(n.grad, a->value);
      db = raw_cmul(db, binv);
      db = raw_cmul(db, binv);
      for (size_t i = 0; i < db.numel(); ++i) {
        db.re[i] = -db.re[i];
        db.im[i] = S(0);
      }
      b->accumulate(reduce_to_shape(db, b->value.shape()));
    }
  });
}

namespace {
template <typename S, typename F, typename DF>
Var<S> unary_re(const Var<S>& a, F f, DF df) {
  ComplexTensor<S> out(a->value.shape());
  for (size_t i = 0; i < out.numel(); ++i) out.re[i] = f(a->value.re[i]);
  ComplexTensor<S> saved = out;
  return make_node<S>(std::move(out), {a}, [a, saved, df](Node<S>& n) {
    if (!a->requires_grad) return;
    ComplexTensor<S> g(a->value.shape());
    for (size_t i = 0; i < g.numel(); ++i) {
      g.re[i] = n.grad.re[i] * df(a->value.re[i], saved.re[i]);
    }
    a->accumulate(g);
  });
}
}  // namespace

template <typename S>
Var<S> sqrt_re(const Var<S>& a) {
  return unary_re<S>(
      a, [](S x) { return std::sqrt(x); },
      [](S, S y) { return y > S(0) ? S(0.5) / y : S(0); });
}

template <typename S>
Var<S> log_re(const Var<S>& a) {
  return unary_re<S>(
      a, [](S x) { return std::log(x); }, [](S x, S) { return S(1) / x; });
}

template <typename S>
Var<S> cos_re(const Var<S>& a) {
  return unary_re<S>(
      a, [](S x) { return std::cos(x); },
      [](S x, S) { return -std::sin(x); });
}

template <typename S>
Var<S> sin_re(const Var<S>& a) {
  return unary_re<S>(
      a, [](S x) { return std::sin(x); }, [](S x, S) { return std::cos(x); });
}

template <typename S>
Var<S> tanh_re(const Var<S>& a) {
  return unary_re<S>(
      a, [](S x) { return std::tanh(x); },
      [](S, S y) { return S(1) - y * y; });
}

template <typename S>
Var<S> sigmoid_re(const Var<S>& a) {
  return unary_re<S>(
      a, [](S x) { return S(1) / (S(1) + std::exp(-x)); },
      [](S, S y) { return y * (S(1) - y); });
}

template <typename S>
Var<S> scale(const Var<S>& a, S c) {
  ComplexTensor<S> out = a->value;
  for (size_t i = 0; i < out.numel(); ++i) {
    out.re[i] *= c;
    out.im[i] *= c;
  }
  return make_node<S>(std::move(out), {a}, [a, c](Node<S>& n) {
    if (!a->requires_grad) return;
    ComplexTensor<S> g = n.grad;
    for (size_t i = 0; i < g.numel(); ++i) {
      g.re[i] *= c;
      g.im[i] *= c;
    }
    a->accumulate(g);
  });
}

template <typename S>
Var<S> add_scalar(const Var<S>& a, S c) {
  ComplexTensor<S> out = a->value;
  for (size_t i = 0; i < out.numel(); ++i) out.re[i] += c;
  return make_node<S>(std::move(out), {a}, [a](Node<S>& n) {
    if (a->requires_grad) a->accumulate(n.grad);
  });
}

template <typename S>
Var<S> prelu(const Var<S>& x, const Var<S>& slope, size_t channel_axis) {
  const auto& shape = x->value.shape();
  const size_t channels = shape.at(channel_axis);
  if (slope->value.numel() != channels) {
    throw ShapeError("prelu: slope size " +
                     std::to_string(slope->value.numel()) +
                     " does not match channel dim of " + shape_str(shape));
  }
  std::vector<size_t> strides = row_major_strides(shape);
  const size_t cstride = strides[channel_axis];
  ComplexTensor<S> out(shape);
  const size_t n = x->value.numel();
  for (size_t i = 0; i < n; ++i) {
    size_t c = (i / cstride) % channels;
    S alpha = slope->value.re[c];
    S vr = x->value.re[i], vi = x->value.im[i];
    out.re[i] = vr >= S(0) ? vr : alpha * vr;
    out.im[i] = vi >= S(0) ? vi : alpha * vi;
  }
  return make_node<S>(
      std::move(out), {x, slope}, [x, slope, cstride, channels](Node<S>& n) {
        const size_t count = x->value.numel();
        ComplexTensor<S> gx(x->value.shape());
        ComplexTensor<S> gs(slope->value.shape());
        for (size_t i = 0; i < count; ++i) {
          size_t c = (i / cstride) % channels;
          S alpha = slope->value.re[c];
          S vr = x->value.re[i], vi = x->value.im[i];
          gx.re[i] = n.grad.re[i] * (vr >= S(0) ? S(1) : alpha);
          gx.im[i] = n.grad.im[i] * (vi >= S(0) ? S(1) : alpha);
          if (vr < S(0)) gs.re[c] += n.grad.re[i] * vr;
          if (vi < S(0)) gs.re[c] += n.grad.im[i] * vi;
        }
        if (x->requires_grad) x->accumulate(gx);
        if (slope->requires_grad) slope->accumulate(gs);
      });
}

// --- reductions ---

template <typename S>
Var<S> sum_all(const Var<S>& a) {
  S sr = 0, si = 0;
  for (size_t i = 0; i < a->value.numel(); ++i) {
    sr += a->value.re[i];
    si += a->value.im[i];
  }
  return make_node<S>(ComplexTensor<S>::scalar(sr, si), {a}, [a](Node<S>& n) {
    if (!a->requires_grad) return;
    ComplexTensor<S> g =
        ComplexTensor<S>::full(a->value.shape(), n.grad.re[0], n.grad.im[0]);
    a->accumulate(g);
  });
}

namespace {
template <typename S>
ComplexTensor<S> reduce_sum_axes(const ComplexTensor<S>& a,
                                 const std::vector<size_t>& axes,
                                 bool keepdims,
                                 std::vector<size_t>* kept_shape_out) {
  std::vector<size_t> kept = a.shape();
  for (size_t ax : axes) kept.at(ax) = 1;
  ComplexTensor<S> out = reduce_to_shape(a, kept);
  if (kept_shape_out) *kept_shape_out = kept;
  if (!keepdims) {
    std::vector<size_t> squeezed;
    for (size_t d = 0; d < kept.size(); ++d) {
      if (std::find(axes.begin(), axes.end(), d) == axes.end())
        squeezed.push_back(kept[d]);
    }
    if (squeezed.empty()) squeezed.push_back(1);
    out = out.reshaped(squeezed);
  }
  return out;
}
}  // namespace

template <typename S>
Var<S> sum_axes(const Var<S>& a, std::vector<size_t> axes, bool keepdims) {
  std::vector<size_t> kept;
  ComplexTensor<S> out = reduce_sum_axes(a->value, axes, keepdims, &kept);
  return make_node<S>(std::move(out), {a}, [a, kept](Node<S>& n) {
    if (!a->requires_grad) return;
    ComplexTensor<S> g = n.grad.reshaped(kept);
    // expand g back over the reduced axes
    ComplexTensor<S> zero(a->value.shape());
    a->accumulate(raw_cadd(zero, g));
  });
}

template <typename S>
Var<S> mean_axes(const Var<S>& a, std::vector<size_t> axes, bool keepdims) {
  size_t count = 1;
  for (size_t ax : axes) count *= a->value.dim(ax);
  Var<S> s = sum_axes(a, std::move(axes), keepdims);
  return scale(s, S(1) / static_cast<S>(count));
}

// --- structure ---

template <typename S>
Var<S> reshape(const Var<S>& a, std::vector<size_t> shape) {
  ComplexTensor<S> out = a->value.reshaped(shape);
  auto orig = a->value.shape();
  return make_node<S>(std::move(out), {a}, [a, orig](Node<S>& n) {
    if (a->requires_grad) a->accumulate(n.grad.reshaped(orig));
  });
}

template <typename S>
Var<S> permute(const Var<S>& a, std::vector<size_t> perm) {
  ComplexTensor<S> out = raw_permute(a->value, perm);
  std::vector<size_t> inverse(perm.size());
  for (size_t i = 0; i < perm.size(); ++i) inverse[perm[i]] = i;
  return make_node<S>(std::move(out), {a}, [a, inverse](Node<S>& n) {
    if (a->requires_grad) a->accumulate(raw_permute(n.grad, inverse));
  });
}

namespace {
// Copies a [pre, len, post] block along `axis` between flat arrays.
struct BlockSpan {
  size_t pre, len_src, len_dst, post;
};

template <typename S>
void copy_axis_block(const ComplexTensor<S>& src, size_t src_offset,
                     ComplexTensor<S>& dst, size_t dst_offset,
                     const BlockSpan& span, size_t copy_len) {
  for (size_t p = 0; p < span.pre; ++p) {
    const size_t sbase = (p * span.len_src + src_offset) * span.post;
    const size_t dbase = (p * span.len_dst + dst_offset) * span.post;
    const size_t count = copy_len * span.post;
    for (size_t i = 0; i < count; ++i) {
      dst.re[dbase + i] += src.re[sbase + i];
      dst.im[dbase + i] += src.im[sbase + i];
    }
  }
}
}  // namespace

template <typename S>
Var<S> slice(const Var<S>& a, size_t axis, size_t start, size_t len) {
  const auto& shape = a->value.shape();
  if (axis >= shape.size() || start + len > shape[axis]) {
    throw ShapeError("slice: range [" + std::to_string(start) + "," +
                     std::to_string(start + len) + ") out of axis " +
                     std::to_string(axis) + " for " + shape_str(shape));
  }
  std::vector<size_t> out_shape = shape;
  out_shape[axis] = len;
  size_t pre = 1, post = 1;
  for (size_t d = 0; d < axis; ++d) pre *= shape[d];
  for (size_t d = axis + 1; d < shape.size(); ++d) post *= shape[d];
  BlockSpan span{pre, shape[axis], len, post};
  ComplexTensor<S> out(out_shape);
  copy_axis_block(a->value, start, out, 0,
                  BlockSpan{pre, shape[axis], len, post}, len);
  return make_node<S>(std::move(out), {a}, [a, span, start, len](Node<S>& n) {
    if (!a->requires_grad) return;
    ComplexTensor<S> g(a->value.shape());
    copy_axis_block(n.grad, 0, g, start,
                    BlockSpan{span.pre, span.len_dst, span.len_src, span.post},
                    len);
    a->accumulate(g);
  });
}

template <typename S>
Var<S> concat(const std::vector<Var<S>>& parts, size_t axis) {
  if (parts.empty()) throw ShapeError("concat: no inputs");
  std::vector<size_t> out_shape = parts[0]->value.shape();
  size_t total = 0;
  for (const auto& p : parts) {
    const auto& s = p->value.shape();
    for (size_t d = 0; d < s.size(); ++d) {
      if (d != axis && s[d] != out_shape[d]) {
        throw ShapeError("concat: mismatched shapes " + shape_str(out_shape) +
                         " vs " + shape_str(s));
      }
    }
    total += s[axis];
  }
  out_shape[axis] = total;
  size_t pre = 1, post = 1;
  for (size_t d = 0; d < axis; ++d) pre *= out_shape[d];
  for (size_t d = axis + 1; d < out_shape.size(); ++d) post *= out_shape[d];
  ComplexTensor<S> out(out_shape);
  size_t offset = 0;
  for (const auto& p : parts) {
    size_t len = p->value.dim(axis);
    copy_axis_block(p->value, 0, out, offset,
                    BlockSpan{pre, len, total, post}, len);
    offset += len;
  }
  std::vector<Var<S>> parents = parts;
  return make_node<S>(std::move(out), std::move(parents),
                      [parts, axis, pre, post, total](Node<S>& n) {
                        size_t off = 0;
                        for (const auto& p : parts) {
                          size_t len = p->value.dim(axis);
                          if (p->requires_grad) {
                            ComplexTensor<S> g(p->value.shape());
                            copy_axis_block(n.grad, off, g, 0,
                                            BlockSpan{pre, total, len, post},
                                            len);
                            p->accumulate(g);
                          }
                          off += len;
                        }
                      });
}

// --- matmul ---

template <typename S>
Var<S> matmul(const Var<S>& a, const Var<S>& b) {
  if (a->value.rank() != 2 || b->value.rank() != 2 ||
      a->value.dim(1) != b->value.dim(0)) {
    throw ShapeError("matmul: incompatible shapes " +
                     shape_str(a->value.shape()) + " and " +
                     shape_str(b->value.shape()));
  }
  const size_t m = a->value.dim(0), k = a->value.dim(1), n2 = b->value.dim(1);
  ComplexTensor<S> out({m, n2});
  gemm(a->value.re.data(), b->value.re.data(), out.re.data(), m, k, n2, false,
       false, false);
  return make_node<S>(std::move(out), {a, b}, [a, b, m, k, n2](Node<S>& n) {
    if (a->requires_grad) {
      ComplexTensor<S> g({m, k});
      gemm(n.grad.re.data(), b->value.re.data(), g.re.data(), m, n2, k, false,
           true, false);
      a->accumulate(g);
    }
    if (b->requires_grad) {
      ComplexTensor<S> g({k, n2});
      gemm(a->value.re.data(), n.grad.re.data(), g.re.data(), k, m, n2, true,
           false, false);
      b->accumulate(g);
    }
  });
}

template <typename S>
Var<S> complex_matmul(const Var<S>& x, const Var<S>& w, const Var<S>& b) {
  if (x->value.rank() != 2 || w->value.rank() != 2 ||
      x->value.dim(1) != w->value.dim(1)) {
    throw ShapeError("complex_matmul: incompatible shapes " +
                     shape_str(x->value.shape()) + " and " +
                     shape_str(w->value.shape()));
  }
  const size_t m = x->value.dim(0), in = x->value.dim(1),
               out_dim = w->value.dim(0);
  ComplexTensor<S> out({m, out_dim});
  // out.re = Xr Wr^T - Xi Wi^T ; out.im = Xr Wi^T + Xi Wr^T
  gemm(x->value.re.data(), w->value.re.data(), out.re.data(), m, in, out_dim,
       false, true, false);
  {
    std::vector<S> tmp(m * out_dim);
    gemm(x->value.im.data(), w->value.im.data(), tmp.data(), m, in, out_dim,
         false, true, false);
    for (size_t i = 0; i < tmp.size(); ++i) out.re[i] -= tmp[i];
  }
  gemm(x->value.re.data(), w->value.im.data(), out.im.data(), m, in, out_dim,
       false, true, false);
  gemm(x->value.im.data(), w->value.re.data(), out.im.data(), m, in, out_dim,
       false, true, true);
  if (b) {
    for (size_t r = 0; r < m; ++r) {
      for (size_t c = 0; c < out_dim; ++c) {
        out.re[r * out_dim + c] += b->value.re[c];
        out.im[r * out_dim + c] += b->value.im[c];
      }
    }
  }
  std::vector<Var<S>> parents = b ? std::vector<Var<S>>{x, w, b}
                                  : std::vector<Var<S>>{x, w};
  return make_node<S>(
      std::move(out), std::move(parents), [x, w, b, m, in, out_dim](Node<S>& n) {
        const S* gr = n.grad.re.data();
        const S* gi = n.grad.im.data();
        if (x->requires_grad) {
          ComplexTensor<S> g({m, in});
          // dXr = gr Wr + gi Wi ; dXi = -gr Wi + gi Wr
          gemm(gr, w->value.re.data(), g.re.data(), m, out_dim, in, false,
               false, false);
          gemm(gi, w->value.im.data(), g.re.data(), m, out_dim, in, false,
               false, true);
          std::vector<S> tmp(m * in);
          gemm(gr, w->value.im.data(), tmp.data(), m, out_dim, in, false,
               false, false);
          gemm(gi, w->value.re.data(), g.im.data(), m, out_dim, in, false,
               false, false);
          for (size_t i = 0; i < tmp.size(); ++i) g.im[i] -= tmp[i];
          x->accumulate(g);
        }
        if (w->requires_grad) {
          ComplexTensor<S> g({out_dim, in});
          // dWr = gr^T Xr + gi^T Xi ; dWi = -gr^T Xi + gi^T Xr
          gemm(gr, x->value.re.data(), g.re.data(), out_dim, m, in, true,
               false, false);
          gemm(gi, x->value.im.data(), g.re.data(), out_dim, m, in, true,
               false, true);
          std::vector<S> tmp(out_dim * in);
          gemm(gr, x->value.im.data(), tmp.data(), out_dim, m, in, true,
               false, false);
          gemm(gi, x->value.re.data(), g.im.data(), out_dim, m, in, true,
               false, false);
          for (size_t i = 0; i < tmp.size(); ++i) g.im[i] -= tmp[i];
          w->accumulate(g);
        }
        if (b && b->requires_grad) {
          ComplexTensor<S> g({out_dim});
          for (size_t r = 0; r < m; ++r) {
            for (size_t c = 0; c < out_dim; ++c) {
              g.re[c] += gr[r * out_dim + c];
              g.im[c] += gi[r * out_dim + c];
            }
          }
          b->accumulate(g);
        }
      });
}

// --- framing ---

template <typename S>
Var<S> unfold_frames(const Var<S>& x, size_t win, size_t hop) {
  if (x->value.rank() != 2) {
    throw ShapeError("unfold_frames: expected [B x L], got " +
                     shape_str(x->value.shape()));
  }
  const size_t batch = x->value.dim(0), len = x->value.dim(1);
  if (len < win) {
    throw ShapeError("unfold_frames: input length " + std::to_string(len) +
                     " shorter than window " + std::to_string(win));
  }
  const size_t frames = (len - win) / hop + 1;
  ComplexTensor<S> out({batch, frames, win});
  for (size_t b = 0; b < batch; ++b) {
    for (size_t t = 0; t < frames; ++t) {
      const size_t src = b * len + t * hop;
      const size_t dst = (b * frames + t) * win;
      std::copy_n(&x->value.re[src], win, &out.re[dst]);
    }
  }
  return make_node<S>(std::move(out), {x},
                      [x, batch, len, frames, win, hop](Node<S>& n) {
                        if (!x->requires_grad) return;
                        ComplexTensor<S> g({batch, len});
                        for (size_t b = 0; b < batch; ++b) {
                          for (size_t t = 0; t < frames; ++t) {
                            const size_t dst = b * len + t * hop;
                            const size_t src = (b * frames + t) * win;
                            for (size_t i = 0; i < win; ++i)
                              g.re[dst + i] += n.grad.re[src + i];
                          }
                        }
                        x->accumulate(g);
                      });
}

template <typename S>
Var<S> fold_frames(const Var<S>& frames_v, size_t hop, size_t out_len) {
  if (frames_v->value.rank() != 3) {
    throw ShapeError("fold_frames: expected [B x T x win], got " +
                     shape_str(frames_v->value.shape()));
  }
  const size_t batch = frames_v->value.dim(0), frames = frames_v->value.dim(1),
               win = frames_v->value.dim(2);
  if (out_len < (frames - 1) * hop + win) {
    throw ShapeError("fold_frames: output length too short for frame span");
  }
  ComplexTensor<S> out({batch, out_len});
  for (size_t b = 0; b < batch; ++b) {
    for (size_t t = 0; t < frames; ++t) {
      const size_t src = (b * frames + t) * win;
      const size_t dst = b * out_len + t * hop;
      for (size_t i = 0; i < win; ++i)
        out.re[dst + i] += frames_v->value.re[src + i];
    }
  }
  return make_node<S>(std::move(out), {frames_v},
                      [frames_v, batch, frames, win, hop, out_len](Node<S>& n) {
                        if (!frames_v->requires_grad) return;
                        ComplexTensor<S> g({batch, frames, win});
                        for (size_t b = 0; b < batch; ++b) {
                          for (size_t t = 0; t < frames; ++t) {
                            const size_t dst = (b * frames + t) * win;
                            const size_t src = b * out_len + t * hop;
                            for (size_t i = 0; i < win; ++i)
                              g.re[dst + i] = n.grad.re[src + i];
                          }
                        }
                        frames_v->accumulate(g);
                      });
}

// --- convolution ---

namespace {

// Gather sliding windows of `full` [C x F x T] into col [C*kf*kt x oF*oT].
template <typename S>
void window_gather(const S* full, size_t channels, size_t f_dim, size_t t_dim,
                   const ConvGeom& g, size_t of_dim, size_t ot_dim, S* col) {
  const size_t cols = of_dim * ot_dim;
  for (size_t c = 0; c < channels; ++c) {
    for (size_t u = 0; u < g.kf; ++u) {
      for (size_t v = 0; v < g.kt; ++v) {
        S* row = col + ((c * g.kf + u) * g.kt + v) * cols;
        for (size_t of = 0; of < of_dim; ++of) {
          const long f = static_cast<long>(of * g.sf + u) -
                         static_cast<long>(g.pf_lo);
          if (f < 0 || f >= static_cast<long>(f_dim)) {
            std::fill_n(row + of * ot_dim, ot_dim, S(0));
            continue;
          }
          const S* src = full + (c * f_dim + f) * t_dim;
          for (size_t ot = 0; ot < ot_dim; ++ot) {
            const long t = static_cast<long>(ot * g.st + v) -
                           static_cast<long>(g.pt_lo);
            row[of * ot_dim + ot] =
                (t < 0 || t >= static_cast<long>(t_dim)) ? S(0) : src[t];
          }
        }
      }
    }
  }
}

// Scatter-add col back into `full` (adjoint of window_gather).
template <typename S>
void window_scatter_add(const S* col, size_t channels, size_t f_dim,
                        size_t t_dim, const ConvGeom& g, size_t of_dim,
                        size_t ot_dim, S* full) {
  const size_t cols = of_dim * ot_dim;
  for (size_t c = 0; c < channels; ++c) {
    for (size_t u = 0; u < g.kf; ++u) {
      for (size_t v = 0; v < g.kt; ++v) {
        const S* row = col + ((c * g.kf + u) * g.kt + v) * cols;
        for (size_t of = 0; of < of_dim; ++of) {
          const long f = static_cast<long>(of * g.sf + u) -
                         static_cast<long>(g.pf_lo);
          if (f < 0 || f >= static_cast<long>(f_dim)) continue;
          S* dst = full + (c * f_dim + f) * t_dim;
          for (size_t ot = 0; ot < ot_dim; ++ot) {
            const long t = static_cast<long>(ot * g.st + v) -
                           static_cast<long>(g.pt_lo);
            if (t < 0 || t >= static_cast<long>(t_dim)) continue;
            dst[t] += row[of * ot_dim + ot];
          }
        }
      }
    }
  }
}

}  // namespace

template <typename S>
Var<S> complex_conv2d(const Var<S>& x, const Var<S>& w, const Var<S>& b,
                      const ConvGeom& g) {
  const auto& xs = x->value.shape();
  const auto& ws = w->value.shape();
  if (xs.size() != 4 || ws.size() != 4) {
    throw ShapeError("complex_conv2d: expected 4-D input/weight, got " +
                     shape_str(xs) + " and " + shape_str(ws));
  }
  if (xs[1] != ws[1]) {
    throw ShapeError("complex_conv2d: input channels " + shape_str(xs) +
                     " do not match kernel " + shape_str(ws));
  }
  const size_t batch = xs[0], in_c = xs[1], f_in = xs[2], t_in = xs[3];
  const size_t out_c = ws[0], kf = ws[2], kt = ws[3];
  if (kf != g.kf || kt != g.kt) {
    throw ShapeError("complex_conv2d: geometry kernel differs from weight " +
                     shape_str(ws));
  }
  const size_t f_out = g.conv_out(f_in, g.kf, g.sf, g.pf_lo, g.pf_hi);
  const size_t t_out = g.conv_out(t_in, g.kt, g.st, g.pt_lo, g.pt_hi);
  const size_t patch = in_c * kf * kt;
  const size_t cols = f_out * t_out;

  ComplexTensor<S> out({batch, out_c, f_out, t_out});
  auto col_re = std::make_shared<std::vector<S>>(batch * patch * cols);
  auto col_im = std::make_shared<std::vector<S>>(batch * patch * cols);
  std::vector<S> tmp(out_c * cols);
  for (size_t bi = 0; bi < batch; ++bi) {
    S* cre = col_re->data() + bi * patch * cols;
    S* cim = col_im->data() + bi * patch * cols;
    window_gather(x->value.re.data() + bi * in_c * f_in * t_in, in_c, f_in,
                  t_in, g, f_out, t_out, cre);
    window_gather(x->value.im.data() + bi * in_c * f_in * t_in, in_c, f_in,
                  t_in, g, f_out, t_out, cim);
    S* ore = out.re.data() + bi * out_c * cols;
    S* oim = out.im.data() + bi * out_c * cols;
    // out.re = Wr*col_re - Wi*col_im ; out.im = Wi*col_re + Wr*col_im
    gemm(w->value.re.data(), cre, ore, out_c, patch, cols, false, false, false);
    gemm(w->value.im.data(), cim, tmp.data(), out_c, patch, cols, false, false,
         false);
    for (size_t i = 0; i < tmp.size(); ++i) ore[i] -= tmp[i];
    gemm(w->value.im.data(), cre, oim, out_c, patch, cols, false, false, false);
    gemm(w->value.re.data(), cim, oim, out_c, patch, cols, false, false, true);
    if (b) {
      for (size_t oc = 0; oc < out_c; ++oc) {
        for (size_t i = 0; i < cols; ++i) {
          ore[oc * cols + i] += b->value.re[oc];
          oim[oc * cols + i] += b->value.im[oc];
        }
      }
    }
  }

  std::vector<Var<S>> parents = b ? std::vector<Var<S>>{x, w, b}
                                  : std::vector<Var<S>>{x, w};
  return make_node<S>(
      std::move(out), std::move(parents),
      [x, w, b, g, col_re, col_im, batch, in_c, f_in, t_in, out_c, f_out,
       t_out, patch, cols](Node<S>& n) {
        std::vector<S> dcol_re(patch * cols), dcol_im(patch * cols);
        ComplexTensor<S> gw({w->value.dim(0), w->value.dim(1), g.kf, g.kt});
        ComplexTensor<S> gx(x->value.shape());
        ComplexTensor<S> gb;
        if (b) gb = ComplexTensor<S>(b->value.shape());
        for (size_t bi = 0; bi < batch; ++bi) {
          const S* gr = n.grad.re.data() + bi * out_c * cols;
          const S* gi = n.grad.im.data() + bi * out_c * cols;
          const S* cre = col_re->data() + bi * patch * cols;
          const S* cim = col_im->data() + bi * patch * cols;
          if (w->requires_grad) {
            // dWr += gr col_re^T + gi col_im^T ; dWi += -gr col_im^T + gi col_re^T
            gemm(gr, cre, gw.re.data(), out_c, cols, patch, false, true, true);
            gemm(gi, cim, gw.re.data(), out_c, cols, patch, false, true, true);
            std::vector<S> t1(out_c * patch);
            gemm(gr, cim, t1.data(), out_c, cols, patch, false, true, false);
            for (size_t i = 0; i < t1.size(); ++i) gw.im[i] -= t1[i];
            gemm(gi, cre, gw.im.data(), out_c, cols, patch, false, true, true);
          }
          if (x->requires_grad) {
            // dcol_re = Wr^T gr + Wi^T gi ; dcol_im = -Wi^T gr + Wr^T gi
            gemm(w->value.re.data(), gr, dcol_re.data(), patch, out_c, cols,
                 true, false, false);
            gemm(w->value.im.data(), gi, dcol_re.data(), patch, out_c, cols,
                 true, false, true);
            std::vector<S> t2(patch * cols);
            gemm(w->value.im.data(), gr, t2.data(), patch, out_c, cols, true,
                 false, false);
            gemm(w->value.re.data(), gi, dcol_im.data(), patch, out_c, cols,
                 true, false, false);
            for (size_t i = 0; i < t2.size(); ++i) dcol_im[i] -= t2[i];
            window_scatter_add(dcol_re.data(), in_c, f_in, t_in, g, f_out,
                               t_out, gx.re.data() + bi * in_c * f_in * t_in);
            window_scatter_add(dcol_im.data(), in_c, f_in, t_in, g, f_out,
                               t_out, gx.im.data() + bi * in_c * f_in * t_in);
          }
          if (b && b->requires_grad) {
            for (size_t oc = 0; oc < out_c; ++oc) {
              for (size_t i = 0; i < cols; ++i) {
                gb.re[oc] += gr[oc * cols + i];
                gb.im[oc] += gi[oc * cols + i];
              }
            }
          }
        }
        if (w->requires_grad) w->accumulate(gw);
        if (x->requires_grad) x->accumulate(gx);
        if (b && b->requires_grad) b->accumulate(gb);
      });
}

template <typename S>
Var<S> complex_conv_transpose2d(const Var<S>& x, const Var<S>& w,
                                const Var<S>& b, const ConvGeom& g) {
  const auto& xs = x->value.shape();
  const auto& ws = w->value.shape();
  if (xs.size() != 4 || ws.size() != 4) {
    throw ShapeError("complex_conv_transpose2d: expected 4-D input/weight");
  }
  if (xs[1] != ws[0]) {
    throw ShapeError("complex_conv_transpose2d: input channels " +
                     shape_str(xs) + " do not match kernel " + shape_str(ws));
  }
  const size_t batch = xs[0], in_c = xs[1], f_in = xs[2], t_in = xs[3];
  const size_t out_c = ws[1], kf = ws[2], kt = ws[3];
  if (kf != g.kf || kt != g.kt) {
    throw ShapeError("complex_conv_transpose2d: geometry kernel mismatch");
  }
  const size_t f_out = g.tconv_out(f_in, g.kf, g.sf, g.pf_lo, g.pf_hi);
  const size_t t_out = g.tconv_out(t_in, g.kt, g.st, g.pt_lo, g.pt_hi);
  const size_t patch = out_c * kf * kt;
  const size_t cols = f_in * t_in;

  ComplexTensor<S> out({batch, out_c, f_out, t_out});
  std::vector<S> col_a(patch * cols), col_b(patch * cols);
  for (size_t bi = 0; bi < batch; ++bi) {
    const S* xre = x->value.re.data() + bi * in_c * cols;
    const S* xim = x->value.im.data() + bi * in_c * cols;
    S* ore = out.re.data() + bi * out_c * f_out * t_out;
    S* oim = out.im.data() + bi * out_c * f_out * t_out;
    // out.re = T(x.re, Wr) - T(x.im, Wi)
    gemm(w->value.re.data(), xre, col_a.data(), patch, in_c, cols, true, false,
         false);
    gemm(w->value.im.data(), xim, col_b.data(), patch, in_c, cols, true, false,
         false);
    for (size_t i = 0; i < col_a.size(); ++i) col_a[i] -= col_b[i];
    window_scatter_add(col_a.data(), out_c, f_out, t_out, g, f_in, t_in, ore);
    // out.im = T(x.re, Wi) + T(x.im, Wr)
    gemm(w->value.im.data(), xre, col_a.data(), patch, in_c, cols, true, false,
         false);
    gemm(w->value.re.data(), xim, col_b.data(), patch, in_c, cols, true, false,
         false);
    for (size_t i = 0; i < col_a.size(); ++i) col_a[i] += col_b[i];
    window_scatter_add(col_a.data(), out_c, f_out, t_out, g, f_in, t_in, oim);
    if (b) {
      for (size_t oc = 0; oc < out_c; ++oc) {
        for (size_t i = 0; i < f_out * t_out; ++i) {
          ore[oc * f_out * t_out + i] += b->value.re[oc];
          oim[oc * f_out * t_out + i] += b->value.im[oc];
        }
      }
    }
  }

  std::vector<Var<S>> parents = b ? std::vector<Var<S>>{x, w, b}
                                  : std::vector<Var<S>>{x, w};
  return make_node<S>(
      std::move(out), std::move(parents),
      [x, w, b, g, batch, in_c, f_in, t_in, out_c, f_out, t_out, patch,
       cols](Node<S>& n) {
        std::vector<S> colg_re(patch * cols), colg_im(patch * cols);
        ComplexTensor<S> gx(x->value.shape());
        ComplexTensor<S> gw(w->value.shape());
        ComplexTensor<S> gb;
        if (b) gb = ComplexTensor<S>(b->value.shape());
        for (size_t bi = 0; bi < batch; ++bi) {
          const S* gr = n.grad.re.data() + bi * out_c * f_out * t_out;
          const S* gi = n.grad.im.data() + bi * out_c * f_out * t_out;
          window_gather(gr, out_c, f_out, t_out, g, f_in, t_in, colg_re.data());
          window_gather(gi, out_c, f_out, t_out, g, f_in, t_in, colg_im.data());
          const S* xre = x->value.re.data() + bi * in_c * cols;
          const S* xim = x->value.im.data() + bi * in_c * cols;
          if (x->requires_grad) {
            // dx.re = Wr colg_re + Wi colg_im ; dx.im = -Wi colg_re + Wr colg_im
            S* dre = gx.re.data() + bi * in_c * cols;
            S* dim = gx.im.data() + bi * in_c * cols;
            gemm(w->value.re.data(), colg_re.data(), dre, in_c, patch, cols,
                 false, false, true);
            gemm(w->value.im.data(), colg_im.data(), dre, in_c, patch, cols,
                 false, false, true);
            std::vector<S> t2(in_c * cols);
            gemm(w->value.im.data(), colg_re.data(), t2.data(), in_c, patch,
                 cols, false, false, false);
            gemm(w->value.re.data(), colg_im.data(), dim, in_c, patch, cols,
                 false, false, true);
            MapMat<S>(dim, in_c, cols) -= CMapMat<S>(t2.data(), in_c, cols);
          }
          if (w->requires_grad) {
            // dWr += x.re colg_re^T + x.im colg_im^T
            // dWi += -x.im colg_re^T + x.re colg_im^T
            gemm(xre, colg_re.data(), gw.re.data(), in_c, cols, patch, false,
                 true, true);
            gemm(xim, colg_im.data(), gw.re.data(), in_c, cols, patch, false,
                 true, true);
            std::vector<S> t3(in_c * patch);
            gemm(xim, colg_re.data(), t3.data(), in_c, cols, patch, false,
                 true, false);
            for (size_t i = 0; i < t3.size(); ++i) gw.im[i] -= t3[i];
            gemm(xre, colg_im.data(), gw.im.data(), in_c, cols, patch, false,
                 true, true);
          }
          if (b && b->requires_grad) {
            for (size_t oc = 0; oc < out_c; ++oc) {
              for (size_t i = 0; i < f_out * t_out; ++i) {
                gb.re[oc] += gr[oc * f_out * t_out + i];
                gb.im[oc] += gi[oc * f_out * t_out + i];
              }
            }
          }
        }
        if (x->requires_grad) x->accumulate(gx);
        if (w->requires_grad) w->accumulate(gw);
        if (b && b->requires_grad) b->accumulate(gb);
      });
}

// --- backward ---

template <typename S>
void backward(const Var<S>& loss) {
  if (!loss) throw ShapeError("backward: null loss node");
  if (loss->value.numel() != 1) {
    throw ShapeError("backward: loss must be scalar, got " +
                     shape_str(loss->value.shape()));
  }
  if (loss->value.im[0] != S(0)) {
    throw ShapeError("backward: loss must be real, has imaginary part");
  }
  // Iterative post-order topological sort. The order holds owning
  // references so freeing edges mid-walk cannot destroy pending nodes.
  std::vector<Var<S>> order;
  std::unordered_set<Node<S>*> visited;
  struct Frame {
    Var<S> node;
    size_t next_parent;
  };
  std::vector<Frame> stack;
  stack.push_back({loss, 0});
  visited.insert(loss.get());
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next_parent < f.node->parents.size()) {
      const Var<S>& p = f.node->parents[f.next_parent++];
      if (p && !visited.count(p.get())) {
        visited.insert(p.get());
        stack.push_back({p, 0});
      }
    } else {
      order.push_back(f.node);
      stack.pop_back();
    }
  }
  loss->ensure_grad();
  loss->grad.re[0] = S(1);
  for (size_t i = order.size(); i-- > 0;) {
    Node<S>* node = order[i].get();
    if (node->backprop && node->has_grad) {
      node->backprop(*node);
    }
    // Free the graph as we go; parameters keep their gradients.
    node->backprop = nullptr;
    node->parents.clear();
    if (!node->requires_grad || node->name.empty()) {
      if (node != loss.get()) {
        node->grad = ComplexTensor<S>();
        node->has_grad = false;
      }
    }
  }
}

template <typename S>
void zero_grad(const std::vector<Var<S>>& params) {
  for (const auto& p : params) {
    p->grad = ComplexTensor<S>();
    p->has_grad = false;
  }
}

template <typename S>
std::unordered_map<std::string, ComplexTensor<S>> gradient_map(
    const std::vector<Var<S>>& params) {
  std::unordered_map<std::string, ComplexTensor<S>> out;
  for (const auto& p : params) {
    out[p->name] = p->has_grad ? p->grad : ComplexTensor<S>(p->value.shape());
  }
  return out;
}

#define DCCRN_INSTANTIATE_AG(S)                                                \
  template Var<S> constant<S>(ComplexTensor<S>);                               \
  template Var<S> parameter<S>(ComplexTensor<S>, std::string);                 \
  template Var<S> cadd<S>(const Var<S>&, const Var<S>&);                       \
  template Var<S> csub<S>(const Var<S>&, const Var<S>&);                       \
  template Var<S> cmul<S>(const Var<S>&, const Var<S>&);                       \
  template Var<S> conj<S>(const Var<S>&);                                      \
  template Var<S> magnitude<S>(const Var<S>&, S);                              \
  template Var<S> phase<S>(const Var<S>&);                                     \
  template Var<S> real_plane<S>(const Var<S>&);                                \
  template Var<S> imag_plane<S>(const Var<S>&);                                \
  template Var<S> combine<S>(const Var<S>&, const Var<S>&);                    \
  template Var<S> rdiv<S>(const Var<S>&, const Var<S>&);                       \
  template Var<S> sqrt_re<S>(const Var<S>&);                                   \
  template Var<S> log_re<S>(const Var<S>&);                                    \
  template Var<S> cos_re<S>(const Var<S>&);                                    \
  template Var<S> sin_re<S>(const Var<S>&);                                    \
  template Var<S> tanh_re<S>(const Var<S>&);                               \
  template Var<S> sigmoid_re<S>(const Var<S>&);                            \
  template Var<S> scale<S>(const Var<S>&, S);                                  \
  template Var<S> add_scalar<S>(const Var<S>&, S);                             \
  template Var<S> prelu<S>(const Var<S>&, const Var<S>&, size_t);              \
  template Var<S> sum_all<S>(const Var<S>&);                                   \
  template Var<S> sum_axes<S>(const Var<S>&, std::vector<size_t>, bool);       \
  template Var<S> mean_axes<S>(const Var<S>&, std::vector<size_t>, bool);      \
  template Var<S> reshape<S>(const Var<S>&, std::vector<size_t>);              \
  template Var<S> permute<S>(const Var<S>&, std::vector<size_t>);              \
  template Var<S> slice<S>(const Var<S>&, size_t, size_t, size_t);             \
  template Var<S> concat<S>(const std::vector<Var<S>>&, size_t);               \
  template Var<S> matmul<S>(const Var<S>&, const Var<S>&);                     \
  template Var<S> complex_matmul<S>(const Var<S>&, const Var<S>&,              \
                                    const Var<S>&);                            \
  template Var<S> unfold_frames<S>(const Var<S>&, size_t, size_t);             \
  template Var<S> fold_frames<S>(const Var<S>&, size_t, size_t);               \
  template Var<S> complex_conv2d<S>(const Var<S>&, const Var<S>&,              \
                                    const Var<S>&, const ConvGeom&);           \
  template Var<S> complex_conv_transpose2d<S>(const Var<S>&, const Var<S>&,    \
                                              const Var<S>&, const ConvGeom&); \
  template void backward<S>(const Var<S>&);                                    \
  template void zero_grad<S>(const std::vector<Var<S>>&);                      \
  template std::unordered_map<std::string, ComplexTensor<S>>                   \
  gradient_map<S>(const std::vector<Var<S>>&);

DCCRN_INSTANTIATE_AG(float)
DCCRN_INSTANTIATE_AG(double)

}  // namespace ag
}  // namespace dccrn
