#include "tensorsplit/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tsplit {

namespace {

double inner_scalar(const Field& a, const Field& b, const MetricField& m) {
  const double* av = a.comp(0);
  const double* bv = b.comp(0);
  double acc = 0.0;
  for (std::size_t p = 0; p < a.points(); ++p) acc += m.weight(p) * (av[p] * bv[p]);
  return acc;
}

double inner_oneform(const Field& a, const Field& b, const MetricField& m) {
  const int n = m.n();
  double acc = 0.0;
  double gi[9];
  for (std::size_t p = 0; p < a.points(); ++p) {
    m.mat_inv(p, gi);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += gi[i * n + i] * (a.comp(i)[p] * b.comp(i)[p]);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        s += gi[i * n + j] * (a.comp(i)[p] * b.comp(j)[p] + a.comp(j)[p] * b.comp(i)[p]);
    acc += m.weight(p) * s;
  }
  return acc;
}

// kappa(I,J) = sum over symmetric realizations of G^{ik}G^{jl}
double sym_kernel(const double* gi, int n, int i, int j, int k, int l) {
  const double gik = gi[i * n + k], gjl = gi[j * n + l];
  const double gil = gi[i * n + l], gjk = gi[j * n + k];
  if (i != j && k != l) return 2.0 * (gik * gjl + gil * gjk);
  if (i == j && k == l) return gik * gik;
  if (i == j) return 2.0 * gik * gil;   // k < l
  return 2.0 * gik * gjk;               // i < j, k == l
}

double inner_sym(const Field& a, const Field& b, const MetricField& m) {
  const int n = m.n();
  const int nc = a.ncomp();
  int ci[6], cj[6];
  {
    int t = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) { ci[t] = i; cj[t] = j; ++t; }
  }
  double gi[9];
  double acc = 0.0;
  for (std::size_t p = 0; p < a.points(); ++p) {
    m.mat_inv(p, gi);
    double s = 0.0;
    for (int I = 0; I < nc; ++I) {
      const double kII = sym_kernel(gi, n, ci[I], cj[I], ci[I], cj[I]);
      s += kII * (a.comp(I)[p] * b.comp(I)[p]);
      for (int J = I + 1; J < nc; ++J) {
        const double kIJ = sym_kernel(gi, n, ci[I], cj[I], ci[J], cj[J]);
        s += kIJ * (a.comp(I)[p] * b.comp(J)[p] + a.comp(J)[p] * b.comp(I)[p]);
      }
    }
    acc += m.weight(p) * s;
  }
  return acc;
}

double inner_twoform(const Field& a, const Field& b, const MetricField& m) {
  const int n = m.n();
  const int nc = a.ncomp();
  int ci[3], cj[3];
  {
    int t = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) { ci[t] = i; cj[t] = j; ++t; }
  }
  double gi[9];
  double acc = 0.0;
  for (std::size_t p = 0; p < a.points(); ++p) {
    m.mat_inv(p, gi);
    double s = 0.0;
    for (int I = 0; I < nc; ++I) {
      const int i = ci[I], j = cj[I];
      for (int J = 0; J < nc; ++J) {
        const int k = ci[J], l = cj[J];
        const double kap = gi[i * n + k] * gi[j * n + l] - gi[i * n + l] * gi[j * n + k];
        if (J == I) s += kap * (a.comp(I)[p] * b.comp(I)[p]);
        else if (J > I) s += kap * (a.comp(I)[p] * b.comp(J)[p] + a.comp(J)[p] * b.comp(I)[p]);
      }
    }
    acc += m.weight(p) * s;
  }
  return acc;
}

}  // namespace

double l2_inner(const Field& a, const Field& b, const MetricField& m) {
  require_same_kind(a, b);
  require_same_grid(a.grid(), b.grid());
  require_same_grid(a.grid(), m.grid());
  switch (a.kind()) {
    case FieldKind::scalar: return inner_scalar(a, b, m);
    case FieldKind::one_form: return inner_oneform(a, b, m);
    case FieldKind::vector: {
      // contract with g (lower index pairing)
      const int n = m.n();
      double gm[9];
      double acc = 0.0;
      for (std::size_t p = 0; p < a.points(); ++p) {
        m.mat(p, gm);
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += gm[i * n + i] * (a.comp(i)[p] * b.comp(i)[p]);
        for (int i = 0; i < n; ++i)
          for (int j = i + 1; j < n; ++j)
            s += gm[i * n + j] * (a.comp(i)[p] * b.comp(j)[p] + a.comp(j)[p] * b.comp(i)[p]);
        acc += m.weight(p) * s;
      }
      return acc;
    }
    case FieldKind::sym_tensor: return inner_sym(a, b, m);
    case FieldKind::two_form: return inner_twoform(a, b, m);
  }
  return 0.0;
}

double l2_norm(const Field& a, const MetricField& m) {
  const double q = l2_inner(a, a, m);
  return q > 0.0 ? std::sqrt(q) : 0.0;
}

ScalarField directional_derivative(const VectorField& xi, const ScalarField& f, int order) {
  require_same_grid(xi.grid(), f.grid());
  const Grid& g = f.grid();
  ScalarField out(g);
  std::vector<double> df(g.points);
  for (int a = 0; a < g.n; ++a) {
    apply_axis(g, a, d1_taps(order, g.spacing[a]), f.values(), df.data());
    double* ov = out.values();
    const double* xv = xi.comp(a);
    for (std::size_t p = 0; p < g.points; ++p) ov[p] += xv[p] * df[p];
  }
  return out;
}

CurvatureBundle curvature(const MetricField& metric, int order) {
  const Grid& gr = metric.grid();
  const int n = gr.n;
  const int nsym = n * (n + 1) / 2;
  const std::size_t P = gr.points;

  // first derivatives of the metric, dg[c][sym(i,j)]
  std::vector<std::vector<std::vector<double>>> dg(
      n, std::vector<std::vector<double>>(nsym, std::vector<double>(P)));
  for (int c = 0; c < n; ++c) {
    const StencilTaps t = d1_taps(order, gr.spacing[c]);
    for (int s = 0; s < nsym; ++s)
      apply_axis(gr, c, t, metric.g().comp(s), dg[c][s].data());
  }

  CurvatureBundle out{
      std::vector<std::vector<std::vector<double>>>(
          n, std::vector<std::vector<double>>(nsym, std::vector<double>(P))),
      SymTensorField(gr), ScalarField(gr)};

  // Christoffels, pointwise
  for (std::size_t p = 0; p < P; ++p) {
    double gi[9];
    metric.mat_inv(p, gi);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          double s = 0.0;
          for (int l = 0; l < n; ++l)
            s += gi[k * n + l] * (dg[i][sym_index(l, j, n)][p] + dg[j][sym_index(l, i, n)][p] -
                                  dg[l][sym_index(i, j, n)][p]);
          out.christoffel[k][sym_index(i, j, n)][p] = 0.5 * s;
        }
  }

  // second derivatives d2g[sym_axis(a,b)][sym(i,j)]
  std::vector<std::vector<std::vector<double>>> d2g(
      nsym, std::vector<std::vector<double>>(nsym, std::vector<double>(P)));
  std::vector<double> tmp(P);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      const int ab = sym_index(a, b, n);
      for (int s = 0; s < nsym; ++s) {
        if (a == b) {
          apply_axis(gr, a, d2_taps(order, gr.spacing[a]), metric.g().comp(s), d2g[ab][s].data());
        } else {
          apply_axis(gr, b, d1_taps(order, gr.spacing[b]), metric.g().comp(s), tmp.data());
          apply_axis(gr, a, d1_taps(order, gr.spacing[a]), tmp.data(), d2g[ab][s].data());
        }
      }
    }

  // Ricci assembled pointwise from d2g, dg and exact d(g^{-1}) algebra
  for (std::size_t p = 0; p < P; ++p) {
    double gi[9];
    metric.mat_inv(p, gi);
    double dgi[3][9];  // d_c g^{kl} = -g^{kp} (d_c g_pq) g^{ql}
    for (int c = 0; c < n; ++c)
      for (int k = 0; k < n; ++k)
        for (int l = k; l < n; ++l) {
          double s = 0.0;
          for (int q = 0; q < n; ++q) {
            double t = 0.0;
            for (int r = 0; r < n; ++r) t += gi[k * n + r] * dg[c][sym_index(r, q, n)][p];
            s -= t * gi[q * n + l];
          }
          dgi[c][k * n + l] = s;
          dgi[c][l * n + k] = s;
        }
    auto gam = [&](int k, int i, int j) { return out.christoffel[k][sym_index(i, j, n)][p]; };
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double r = 0.0;
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            r += 0.5 * gi[k * n + l] *
                 (d2g[sym_index(k, i, n)][sym_index(j, l, n)][p] +
                  d2g[sym_index(k, j, n)][sym_index(i, l, n)][p] -
                  d2g[sym_index(k, l, n)][sym_index(i, j, n)][p] -
                  d2g[sym_index(i, j, n)][sym_index(k, l, n)][p]);
            r += 0.5 * dgi[k][k * n + l] *
                 (dg[i][sym_index(l, j, n)][p] + dg[j][sym_index(l, i, n)][p] -
                  dg[l][sym_index(i, j, n)][p]);
            r -= 0.5 * dgi[j][k * n + l] * dg[i][sym_index(k, l, n)][p];
          }
        for (int k = 0; k < n; ++k)
          for (int q = 0; q < n; ++q)
            r += gam(k, k, q) * gam(q, i, j) - gam(k, j, q) * gam(q, k, i);
        out.ricci.comp(sym_index(i, j, n))[p] = r;
      }
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += gi[i * n + i] * out.ricci.comp(sym_index(i, i, n))[p];
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        s += 2.0 * gi[i * n + j] * out.ricci.comp(sym_index(i, j, n))[p];
    out.scalar.values()[p] = s;
  }
  return out;
}

Geometry::Geometry(MetricField metric, int order)
    : metric_(std::move(metric)), order_(order), curv_(curvature(metric_, order)) {
  const Grid& g = metric_.grid();
  for (int a = 0; a < g.n; ++a) {
    d1_[a] = d1_taps(order, g.spacing[a]);
    d1t_[a] = transpose(d1_[a]);
    // Nyquist stabilization: pi/L response on alternating modes, O(h^6) on
    // smooth data, amplitude chosen between stencil-symbol mode values.
    const double kappa = std::numbers::pi / (64.0 * g.lengths[a]);
    d1s_[a] = add(d1_[a], delta6_taps(kappa));
    d1st_[a] = transpose(d1s_[a]);
    d2_[a] = d2_taps(order, g.spacing[a]);
  }
  volume_ = 0.0;
  for (std::size_t p = 0; p < g.points; ++p) volume_ += metric_.weight(p);
}

ScalarStats scalar_stats(const ScalarField& f, const MetricField& m) {
  double vol = 0.0, mean = 0.0;
  const double* v = f.values();
  for (std::size_t p = 0; p < f.points(); ++p) {
    vol += m.weight(p);
    mean += m.weight(p) * v[p];
  }
  mean /= vol;
  double var = 0.0;
  double sup = 0.0;
  for (std::size_t p = 0; p < f.points(); ++p) {
    const double d = v[p] - mean;
    var += m.weight(p) * d * d;
    sup = std::max(sup, std::abs(v[p]));
  }
  return {mean, std::sqrt(std::max(var / vol, 0.0)), sup};
}

}  // namespace tsplit
