#include "tensorsplit/stencil.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>

namespace tsplit {

StencilTaps d1_taps(int order, double h) {
  StencilTaps t;
  if (order == 2) {
    t.radius = 1;
    t.at(1) = 1.0 / (2.0 * h);
    t.at(-1) = -1.0 / (2.0 * h);
  } else if (order == 4) {
    t.radius = 2;
    t.at(1) = 8.0 / (12.0 * h);
    t.at(-1) = -8.0 / (12.0 * h);
    t.at(2) = -1.0 / (12.0 * h);
    t.at(-2) = 1.0 / (12.0 * h);
  } else {
    throw std::invalid_argument("stencil order must be 2 or 4");
  }
  return t;
}

StencilTaps d2_taps(int order, double h) {
  StencilTaps t;
  const double h2 = h * h;
  if (order == 2) {
    t.radius = 1;
    t.at(0) = -2.0 / h2;
    t.at(1) = 1.0 / h2;
    t.at(-1) = 1.0 / h2;
  } else if (order == 4) {
    t.radius = 2;
    t.at(0) = -30.0 / (12.0 * h2);
    t.at(1) = 16.0 / (12.0 * h2);
    t.at(-1) = 16.0 / (12.0 * h2);
    t.at(2) = -1.0 / (12.0 * h2);
    t.at(-2) = -1.0 / (12.0 * h2);
  } else {
    throw std::invalid_argument("stencil order must be 2 or 4");
  }
  return t;
}

StencilTaps delta6_taps(double kappa) {
  StencilTaps t;
  t.radius = 3;
  static const double w[7] = {1.0, -6.0, 15.0, -20.0, 15.0, -6.0, 1.0};
  for (int m = -3; m <= 3; ++m) t.at(m) = kappa * w[m + 3];
  return t;
}

StencilTaps add(const StencilTaps& a, const StencilTaps& b) {
  StencilTaps t;
  t.radius = std::max(a.radius, b.radius);
  for (int m = -t.radius; m <= t.radius; ++m) {
    double v = 0.0;
    if (m >= -a.radius && m <= a.radius) v += a.at(m);
    if (m >= -b.radius && m <= b.radius) v += b.at(m);
    t.at(m) = v;
  }
  return t;
}

StencilTaps transpose(const StencilTaps& t) {
  StencilTaps r;
  r.radius = t.radius;
  for (int m = -t.radius; m <= t.radius; ++m) r.at(-m) = t.at(m);
  return r;
}

namespace {

// one periodic line, contiguous (stride 1)
inline void line_contiguous(int N, int R, const double* tc, const double* in, double* out,
                            bool accumulate) {
  for (int j = 0; j < N; ++j) {
    bool interior = (j >= R && j < N - R);
    double s = 0.0;
    if (interior) {
      for (int m = -R; m <= R; ++m) s += tc[m + R] * in[j + m];
    } else {
      for (int m = -R; m <= R; ++m) {
        int src = j + m;
        if (src < 0) src += N;
        else if (src >= N) src -= N;
        s += tc[m + R] * in[src];
      }
    }
    if (accumulate) out[j] += s;
    else out[j] = s;
  }
}

inline void apply_impl(const Grid& g, int axis, const StencilTaps& t, const double* in,
                       double* out, bool accumulate) {
  const int N = g.dims[axis];
  const int R = t.radius;
  std::size_t inner = 1;
  for (int a = axis + 1; a < g.n; ++a) inner *= static_cast<std::size_t>(g.dims[a]);
  const std::size_t outer = g.points / (inner * static_cast<std::size_t>(N));

  if (inner == 1) {
    for (std::size_t o = 0; o < outer; ++o)
      line_contiguous(N, R, t.c.data(), in + o * N, out + o * N, accumulate);
    return;
  }
  // stride along axis is `inner`; vectorize over the contiguous inner run
  for (std::size_t o = 0; o < outer; ++o) {
    const double* bin = in + o * N * inner;
    double* bout = out + o * N * inner;
    for (int j = 0; j < N; ++j) {
      double* dst = bout + static_cast<std::size_t>(j) * inner;
      if (!accumulate) std::memset(dst, 0, inner * sizeof(double));
      for (int m = -R; m <= R; ++m) {
        const double c = t.at(m);
        if (c == 0.0) continue;
        int src = j + m;
        if (src < 0) src += N;
        else if (src >= N) src -= N;
        const double* s = bin + static_cast<std::size_t>(src) * inner;
        for (std::size_t k = 0; k < inner; ++k) dst[k] += c * s[k];
      }
    }
  }
}

}  // namespace

void apply_axis(const Grid& g, int axis, const StencilTaps& t, const double* in, double* out) {
  apply_impl(g, axis, t, in, out, false);
}

void apply_axis_add(const Grid& g, int axis, const StencilTaps& t, const double* in, double* out) {
  apply_impl(g, axis, t, in, out, true);
}

}  // namespace tsplit
