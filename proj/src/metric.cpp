#include "tensorsplit/metric.hpp"

#include <cmath>
#include <cstring>

namespace tsplit {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

double ScalarSpec::value(const double* x, const double* lengths, int dim) const {
  double total = 0.0;
  for (const auto& m : modes) {
    double t = m.amp;
    for (int a = 0; a < dim; ++a)
      if (m.k[a] != 0) t *= std::sin(kTwoPi * m.k[a] * x[a] / lengths[a] + m.phase[a]);
    total += t;
  }
  return total;
}

double ScalarSpec::d1(int c, const double* x, const double* lengths, int dim) const {
  double total = 0.0;
  for (const auto& m : modes) {
    if (m.k[c] == 0) continue;
    double t = m.amp;
    for (int a = 0; a < dim; ++a) {
      if (m.k[a] == 0) continue;
      const double arg = kTwoPi * m.k[a] * x[a] / lengths[a] + m.phase[a];
      if (a == c) t *= (kTwoPi * m.k[a] / lengths[a]) * std::cos(arg);
      else t *= std::sin(arg);
    }
    total += t;
  }
  return total;
}

double ScalarSpec::d2(int c1, int c2, const double* x, const double* lengths, int dim) const {
  double total = 0.0;
  for (const auto& m : modes) {
    if (m.k[c1] == 0 || m.k[c2] == 0) continue;
    double t = m.amp;
    for (int a = 0; a < dim; ++a) {
      if (m.k[a] == 0) continue;
      const double w = kTwoPi * m.k[a] / lengths[a];
      const double arg = kTwoPi * m.k[a] * x[a] / lengths[a] + m.phase[a];
      const int d = (a == c1 ? 1 : 0) + (a == c2 ? 1 : 0);
      if (d == 0) t *= std::sin(arg);
      else if (d == 1) t *= w * std::cos(arg);
      else t *= -w * w * std::sin(arg);
    }
    total += t;
  }
  return total;
}

MetricSpec MetricSpec::flat(int dim) {
  MetricSpec s;
  s.family = Family::flat_diagonal;
  s.dim = dim;
  s.diag.assign(dim, 1.0);
  return s;
}

MetricSpec MetricSpec::conformal(int dim, const ScalarSpec& u) {
  MetricSpec s;
  s.family = Family::conformal_flat;
  s.dim = dim;
  s.conf_u = u;
  return s;
}

void MetricSpec::eval(const double* x, const double* lengths, double* g) const {
  const int n = dim;
  std::memset(g, 0, sizeof(double) * n * n);
  switch (family) {
    case Family::flat_diagonal:
      for (int a = 0; a < n; ++a) g[a * n + a] = a < (int)diag.size() ? diag[a] : 1.0;
      return;
    case Family::conformal_flat: {
      const double e = std::exp(2.0 * conf_u.value(x, lengths, n));
      for (int a = 0; a < n; ++a) g[a * n + a] = e;
      return;
    }
    case Family::diagonal_periodic:
      for (int a = 0; a < n; ++a) {
        double arg = dp_phase[a];
        for (int b = 0; b < n; ++b) arg += kTwoPi * dp_wave[a][b] * x[b] / lengths[b];
        g[a * n + a] = 1.0 + dp_alpha[a] * std::sin(arg);
      }
      return;
    case Family::product:
      for (const auto& f : factors) {
        const int m = (int)f.axes.size();
        double xs[3], ls[3], gs[9];
        for (int i = 0; i < m; ++i) { xs[i] = x[f.axes[i]]; ls[i] = lengths[f.axes[i]]; }
        f.spec->eval(xs, ls, gs);
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j) g[f.axes[i] * n + f.axes[j]] = gs[i * m + j];
      }
      return;
  }
}

void MetricSpec::eval_d1(const double* x, const double* lengths, int c, double* dg) const {
  const int n = dim;
  std::memset(dg, 0, sizeof(double) * n * n);
  switch (family) {
    case Family::flat_diagonal:
      return;
    case Family::conformal_flat: {
      const double e = std::exp(2.0 * conf_u.value(x, lengths, n));
      const double uc = conf_u.d1(c, x, lengths, n);
      for (int a = 0; a < n; ++a) dg[a * n + a] = 2.0 * uc * e;
      return;
    }
    case Family::diagonal_periodic:
      for (int a = 0; a < n; ++a) {
        if (dp_wave[a][c] == 0) continue;
        double arg = dp_phase[a];
        for (int b = 0; b < n; ++b) arg += kTwoPi * dp_wave[a][b] * x[b] / lengths[b];
        dg[a * n + a] = dp_alpha[a] * (kTwoPi * dp_wave[a][c] / lengths[c]) * std::cos(arg);
      }
      return;
    case Family::product:
      for (const auto& f : factors) {
        const int m = (int)f.axes.size();
        int cl = -1;
        for (int i = 0; i < m; ++i)
          if (f.axes[i] == c) cl = i;
        if (cl < 0) continue;
        double xs[3], ls[3], gs[9];
        for (int i = 0; i < m; ++i) { xs[i] = x[f.axes[i]]; ls[i] = lengths[f.axes[i]]; }
        f.spec->eval_d1(xs, ls, cl, gs);
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j) dg[f.axes[i] * n + f.axes[j]] = gs[i * m + j];
      }
      return;
  }
}

void MetricSpec::eval_d2(const double* x, const double* lengths, int c1, int c2, double* d2g) const {
  const int n = dim;
  std::memset(d2g, 0, sizeof(double) * n * n);
  switch (family) {
    case Family::flat_diagonal:
      return;
    case Family::conformal_flat: {
      const double e = std::exp(2.0 * conf_u.value(x, lengths, n));
      const double u1 = conf_u.d1(c1, x, lengths, n);
      const double u2 = conf_u.d1(c2, x, lengths, n);
      const double u12 = conf_u.d2(c1, c2, x, lengths, n);
      const double v = (4.0 * u1 * u2 + 2.0 * u12) * e;
      for (int a = 0; a < n; ++a) d2g[a * n + a] = v;
      return;
    }
    case Family::diagonal_periodic:
      for (int a = 0; a < n; ++a) {
        if (dp_wave[a][c1] == 0 || dp_wave[a][c2] == 0) continue;
        double arg = dp_phase[a];
        for (int b = 0; b < n; ++b) arg += kTwoPi * dp_wave[a][b] * x[b] / lengths[b];
        const double w1 = kTwoPi * dp_wave[a][c1] / lengths[c1];
        const double w2 = kTwoPi * dp_wave[a][c2] / lengths[c2];
        d2g[a * n + a] = -dp_alpha[a] * w1 * w2 * std::sin(arg);
      }
      return;
    case Family::product:
      for (const auto& f : factors) {
        const int m = (int)f.axes.size();
        int l1 = -1, l2 = -1;
        for (int i = 0; i < m; ++i) {
          if (f.axes[i] == c1) l1 = i;
          if (f.axes[i] == c2) l2 = i;
        }
        if (l1 < 0 || l2 < 0) continue;
        double xs[3], ls[3], gs[9];
        for (int i = 0; i < m; ++i) { xs[i] = x[f.axes[i]]; ls[i] = lengths[f.axes[i]]; }
        f.spec->eval_d2(xs, ls, l1, l2, gs);
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j) d2g[f.axes[i] * n + f.axes[j]] = gs[i * m + j];
      }
      return;
  }
}

MetricField::MetricField(SymTensorField g)
    : g_(std::move(g)),
      g_inv_(g_.grid()),
      det_(g_.grid()),
      sqrt_det_(g_.grid()) {
  const Grid& gr = g_.grid();
  const int n = gr.n;
  cell_ = gr.cell_volume();
  double* dv = det_.values();
  double* sv = sqrt_det_.values();
  for (std::size_t p = 0; p < gr.points; ++p) {
    if (n == 2) {
      const double a = g_.comp(0)[p], b = g_.comp(1)[p], c = g_.comp(2)[p];
      const double det = a * c - b * b;
      if (!(a > 0.0) || !(det > 0.0))
        throw IndefiniteMetricError("metric not positive-definite at grid point " + std::to_string(p));
      g_inv_.comp(0)[p] = c / det;
      g_inv_.comp(1)[p] = -b / det;
      g_inv_.comp(2)[p] = a / det;
      dv[p] = det;
      sv[p] = std::sqrt(det);
    } else {
      const double a = g_.comp(0)[p], b = g_.comp(1)[p], c = g_.comp(2)[p];
      const double d = g_.comp(3)[p], e = g_.comp(4)[p], f = g_.comp(5)[p];
      // leading minors for positive-definiteness
      const double m1 = a;
      const double m2 = a * d - b * b;
      const double det = a * (d * f - e * e) - b * (b * f - e * c) + c * (b * e - d * c);
      if (!(m1 > 0.0) || !(m2 > 0.0) || !(det > 0.0))
        throw IndefiniteMetricError("metric not positive-definite at grid point " + std::to_string(p));
      // adjugate / det
      g_inv_.comp(0)[p] = (d * f - e * e) / det;
      g_inv_.comp(1)[p] = (c * e - b * f) / det;
      g_inv_.comp(2)[p] = (b * e - c * d) / det;
      g_inv_.comp(3)[p] = (a * f - c * c) / det;
      g_inv_.comp(4)[p] = (b * c - a * e) / det;
      g_inv_.comp(5)[p] = (a * d - b * b) / det;
      dv[p] = det;
      sv[p] = std::sqrt(det);
    }
  }
}

void MetricField::mat(std::size_t p, double* m) const {
  const int n = grid().n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[i * n + j] = g_.comp(sym_index(i, j, n))[p];
}

void MetricField::mat_inv(std::size_t p, double* m) const {
  const int n = grid().n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[i * n + j] = g_inv_.comp(sym_index(i, j, n))[p];
}

MetricField sample_metric(const MetricSpec& spec, const Grid& grid) {
  if (spec.dim != grid.n) throw std::invalid_argument("metric spec dimension != grid dimension");
  SymTensorField g(grid);
  const int n = grid.n;
  double x[3], gm[9];
  for (std::size_t p = 0; p < grid.points; ++p) {
    grid.coords(p, x);
    spec.eval(x, grid.lengths.data(), gm);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) g.comp(sym_index(i, j, n))[p] = gm[i * n + j];
  }
  return MetricField(std::move(g));
}

}  // namespace tsplit
