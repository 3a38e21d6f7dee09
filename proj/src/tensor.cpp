// Copyright 2026 The dccrn-cpp Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dccrn/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <mutex>

namespace dccrn {

LogLevel log_level() {
  static LogLevel level = [] {
    const char* v = std::getenv("DCCRN_LOG");
    if (!v) return LogLevel::kInfo;
    std::string s(v);
    if (s == "debug") return LogLevel::kDebug;
    if (s == "warn") return LogLevel::kWarn;
    if (s == "error") return LogLevel::kError;
    return LogLevel::kInfo;
  }();
  return level;
}

void log_message(LogLevel level, const std::string& msg) {
  static std::mutex mu;
  static const char* names[] = {"DEBUG", "INFO", "WARN", "ERROR"};
  std::lock_guard<std::mutex> lock(mu);
  std::cerr << "[" << names[static_cast<int>(level)] << "] " << msg << "\n";
}

std::string shape_str(const std::vector<size_t>& shape) {
  std::string s = "[";
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

std::vector<size_t> row_major_strides(const std::vector<size_t>& shape) {
  std::vector<size_t> strides(shape.size(), 1);
  for (size_t i = shape.size(); i-- > 1;) {
    strides[i - 1] = strides[i] * shape[i];
  }
  return strides;
}

std::vector<size_t> broadcast_shape(const std::vector<size_t>& a,
                                    const std::vector<size_t>& b) {
  size_t rank = std::max(a.size(), b.size());
  std::vector<size_t> out(rank);
  for (size_t i = 0; i < rank; ++i) {
    size_t da = i < rank - a.size() ? 1 : a[i - (rank - a.size())];
    size_t db = i < rank - b.size() ? 1 : b[i - (rank - b.size())];
    if (da != db && da != 1 && db != 1) {
      throw ShapeError("shapes not broadcast-compatible: " + shape_str(a) +
                       " vs " + shape_str(b));
    }
    out[i] = std::max(da, db);
  }
  return out;
}

template <typename S>
bool ComplexTensor<S>::all_finite() const {
  for (S v : re)
    if (!std::isfinite(v)) return false;
  for (S v : im)
    if (!std::isfinite(v)) return false;
  return true;
}

namespace {

// Strides padded to `rank`, with zero stride on broadcast dimensions.
std::vector<size_t> broadcast_strides(const std::vector<size_t>& shape,
                                      size_t rank,
                                      const std::vector<size_t>& out_shape) {
  std::vector<size_t> strides(rank, 0);
  std::vector<size_t> own = row_major_strides(shape);
  size_t offset = rank - shape.size();
  for (size_t i = 0; i < shape.size(); ++i) {
    strides[offset + i] = (shape[i] == 1 && out_shape[offset + i] != 1)
                              ? 0
                              : own[i];
  }
  return strides;
}

template <typename S, typename F>
ComplexTensor<S> zip(const ComplexTensor<S>& a, const ComplexTensor<S>& b,
                     F&& f) {
  if (a.shape() == b.shape()) {
    ComplexTensor<S> out(a.shape());
    const size_t n = a.numel();
    for (size_t i = 0; i < n; ++i) {
      f(a.re[i], a.im[i], b.re[i], b.im[i], out.re[i], out.im[i]);
    }
    return out;
  }
  std::vector<size_t> out_shape = broadcast_shape(a.shape(), b.shape());
  ComplexTensor<S> out(out_shape);
  const size_t rank = out_shape.size();
  std::vector<size_t> sa = broadcast_strides(a.shape(), rank, out_shape);
  std::vector<size_t> sb = broadcast_strides(b.shape(), rank, out_shape);
  std::vector<size_t> idx(rank, 0);
  const size_t n = out.numel();
  size_t ia = 0, ib = 0;
  for (size_t lin = 0; lin < n; ++lin) {
    f(a.re[ia], a.im[ia], b.re[ib], b.im[ib], out.re[lin], out.im[lin]);
    for (size_t d = rank; d-- > 0;) {
      idx[d]++;
      ia += sa[d];
      ib += sb[d];
      if (idx[d] < out_shape[d]) break;
      ia -= sa[d] * out_shape[d];
      ib -= sb[d] * out_shape[d];
      idx[d] = 0;
    }
  }
  return out;
}

}  // namespace

template <typename S>
ComplexTensor<S> raw_cadd(const ComplexTensor<S>& a, const ComplexTensor<S>& b) {
  return zip(a, b, [](S ar, S ai, S br, S bi, S& outr, S& outi) {
    outr = ar + br;
    outi = ai + bi;
  });
}

template <typename S>
ComplexTensor<S> raw_csub(const ComplexTensor<S>& a, const ComplexTensor<S>& b) {
  return zip(a, b, [](S ar, S ai, S br, S bi, S& outr, S& outi) {
    outr = ar - br;
    outi = ai - bi;
  });
}

template <typename S>
ComplexTensor<S> raw_cmul(const ComplexTensor<S>& a, const ComplexTensor<S>& b) {
  return zip(a, b, [](S ar, S ai, S br, S bi, S& outr, S& outi) {
    outr = ar * br - ai * bi;
    outi = ar * bi + ai * br;
  });
}

template <typename S>
ComplexTensor<S> raw_magnitude(const ComplexTensor<S>& a, S eps) {
  ComplexTensor<S> out(a.shape());
  for (size_t i = 0; i < a.numel(); ++i) {
    out.re[i] = std::sqrt(a.re[i] * a.re[i] + a.im[i] * a.im[i] + eps * eps);
  }
  return out;
}

template <typename S>
ComplexTensor<S> raw_phase(const ComplexTensor<S>& a) {
  ComplexTensor<S> out(a.shape());
  const S pi = static_cast<S>(3.14159265358979323846L);
  for (size_t i = 0; i < a.numel(); ++i) {
    S p = std::atan2(a.im[i], a.re[i]);
    if (p == -pi) p = pi;
    out.re[i] = p;
  }
  return out;
}

template <typename S>
ComplexTensor<S> reduce_to_shape(const ComplexTensor<S>& g,
                                 const std::vector<size_t>& target_shape) {
  if (g.shape() == target_shape) return g;
  const size_t rank = g.rank();
  const size_t offset = rank - target_shape.size();
  ComplexTensor<S> out(target_shape);
  std::vector<size_t> st = broadcast_strides(target_shape, rank, g.shape());
  std::vector<size_t> idx(rank, 0);
  size_t it = 0;
  const size_t n = g.numel();
  for (size_t lin = 0; lin < n; ++lin) {
    out.re[it] += g.re[lin];
    out.im[it] += g.im[lin];
    for (size_t d = rank; d-- > 0;) {
      idx[d]++;
      it += st[d];
      if (idx[d] < g.shape()[d]) break;
      it -= st[d] * g.shape()[d];
      idx[d] = 0;
    }
  }
  (void)offset;
  return out;
}

template <typename S>
ComplexTensor<S> raw_permute(const ComplexTensor<S>& a,
                             const std::vector<size_t>& perm) {
  if (perm.size() != a.rank()) {
    throw ShapeError("permute: axis list rank mismatch for " +
                     shape_str(a.shape()));
  }
  std::vector<size_t> out_shape(a.rank());
  for (size_t i = 0; i < perm.size(); ++i) out_shape[i] = a.dim(perm[i]);
  ComplexTensor<S> out(out_shape);
  std::vector<size_t> in_strides = row_major_strides(a.shape());
  std::vector<size_t> walk(a.rank(), 0);
  const size_t n = a.numel();
  size_t src = 0;
  // Iterate the output linearly; `src` tracks the permuted source offset.
  std::vector<size_t> src_strides(a.rank());
  for (size_t i = 0; i < perm.size(); ++i) src_strides[i] = in_strides[perm[i]];
  for (size_t lin = 0; lin < n; ++lin) {
    out.re[lin] = a.re[src];
    out.im[lin] = a.im[src];
    for (size_t d = out_shape.size(); d-- > 0;) {
      walk[d]++;
      src += src_strides[d];
      if (walk[d] < out_shape[d]) break;
      src -= src_strides[d] * out_shape[d];
      walk[d] = 0;
    }
  }
  return out;
}

#define DCCRN_INSTANTIATE_TENSOR(S)                                          \
  template class ComplexTensor<S>;                                           \
  template ComplexTensor<S> raw_cadd<S>(const ComplexTensor<S>&,             \
                                        const ComplexTensor<S>&);            \
  template ComplexTensor<S> raw_csub<S>(const ComplexTensor<S>&,             \
                                        const ComplexTensor<S>&);            \
  template ComplexTensor<S> raw_cmul<S>(const ComplexTensor<S>&,             \
                                        const ComplexTensor<S>&);            \
  template ComplexTensor<S> raw_magnitude<S>(const ComplexTensor<S>&, S);    \
  template ComplexTensor<S> raw_phase<S>(const ComplexTensor<S>&);           \
  template ComplexTensor<S> reduce_to_shape<S>(const ComplexTensor<S>&,      \
                                               const std::vector<size_t>&);  \
  template ComplexTensor<S> raw_permute<S>(const ComplexTensor<S>&,          \
                                           const std::vector<size_t>&);

DCCRN_INSTANTIATE_TENSOR(float)
DCCRN_INSTANTIATE_TENSOR(double)

}  // namespace dccrn
