#include "tensorsplit/immersion.hpp"

#include <cmath>
#include <stdexcept>

namespace tsplit {

namespace {

// second derivatives of a sampled scalar: direct stencil on the diagonal,
// composition for mixed entries
void hessian(const Grid& gr, int order, const double* f,
             std::vector<std::vector<double>>& out) {
  const int n = gr.n;
  out.assign(n * (n + 1) / 2, std::vector<double>(gr.points));
  std::vector<double> tmp(gr.points);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      if (a == b) {
        apply_axis(gr, a, d2_taps(order, gr.spacing[a]), f, out[sym_index(a, b, n)].data());
      } else {
        apply_axis(gr, b, d1_taps(order, gr.spacing[b]), f, tmp.data());
        apply_axis(gr, a, d1_taps(order, gr.spacing[a]), tmp.data(),
                   out[sym_index(a, b, n)].data());
      }
    }
}

}  // namespace

GraphHypersurface graph_hypersurface(const ScalarField& height, int order) {
  const Grid& gr = height.grid();
  const int n = gr.n;
  GraphHypersurface out;
  out.height = height;

  std::vector<std::vector<double>> df(n, std::vector<double>(gr.points));
  for (int a = 0; a < n; ++a)
    apply_axis(gr, a, d1_taps(order, gr.spacing[a]), height.values(), df[a].data());

  SymTensorField g(gr);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double* o = g.comp(sym_index(i, j, n));
      for (std::size_t p = 0; p < gr.points; ++p)
        o[p] = (i == j ? 1.0 : 0.0) + df[i][p] * df[j][p];
    }

  out.w = ScalarField(gr);
  for (std::size_t p = 0; p < gr.points; ++p) {
    double s = 1.0;
    for (int a = 0; a < n; ++a) s += df[a][p] * df[a][p];
    out.w.values()[p] = std::sqrt(s);
  }

  std::vector<std::vector<double>> hess;
  hessian(gr, order, height.values(), hess);
  out.second_form = SymTensorField(gr);
  for (int s = 0; s < out.second_form.ncomp(); ++s) {
    double* o = out.second_form.comp(s);
    for (std::size_t p = 0; p < gr.points; ++p) o[p] = hess[s][p] / out.w.values()[p];
  }

  out.geom = std::make_shared<Geometry>(MetricField(std::move(g)), order);
  const MetricField& m = out.geom->metric();

  out.shape_operator.assign(n * n, std::vector<double>(gr.points));
  double gi[9];
  for (std::size_t p = 0; p < gr.points; ++p) {
    m.mat_inv(p, gi);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int k = 0; k < n; ++k)
          s += gi[i * n + k] * out.second_form.comp(sym_index(k, j, n))[p];
        out.shape_operator[i * n + j][p] = s;
      }
  }

  ScalarField tr = trace_g(out.second_form, m);
  out.mean_curvature = ScalarField(gr);
  for (std::size_t p = 0; p < gr.points; ++p)
    out.mean_curvature.values()[p] = tr.values()[p] / n;
  return out;
}

double codazzi_divergence_check(const GraphHypersurface& hyp) {
  const Geometry& geo = *hyp.geom;
  const MetricField& m = geo.metric();
  ScalarField tr = trace_g(hyp.second_form, m);
  OneFormField dtr = exterior_derivative(geo, tr);
  OneFormField r = divergence_sym(geo, hyp.second_form);
  axpy(r, 1.0, dtr);
  return l2_norm(r, m) / (1.0 + l2_norm(dtr, m));
}

HypersurfaceReport hypersurface_decomposition_report(const GraphHypersurface& hyp,
                                                     const SolveOptions& sopts,
                                                     const KernelOptions& kopts,
                                                     double verdict_tol) {
  const Geometry& geo = *hyp.geom;
  const MetricField& m = geo.metric();
  const int n = geo.n();
  const SymTensorField& phi = hyp.second_form;

  HypersurfaceReport rep;
  rep.verdict_tol = verdict_tol;
  ScalarStats hs = scalar_stats(hyp.mean_curvature, m);
  rep.mean_curvature_stddev = hs.stddev;
  rep.mean_curvature_sup = hs.sup;
  rep.codazzi_residual = codazzi_divergence_check(hyp);

  ScalarField tr = trace_g(phi, m);

  BergerEbinResult be = berger_ebin(geo, phi, sopts, kopts);
  {
    SymTensorField ks = killing_op(geo, be.theta);
    const double nks = l2_norm(ks, m);
    const double nth = l2_norm(be.theta, m);
    rep.killing_residual = nth > 1e-12 ? nks / nth : nks;
    rep.dstar_theta_norm2 = nks * nks;
    VectorField xi = sharp(be.theta, m);
    ScalarField lt = directional_derivative(xi, tr, geo.order());
    double acc = 0.0;
    for (std::size_t p = 0; p < lt.points(); ++p) acc += m.weight(p) * lt.values()[p];
    rep.lie_trace_integral_be = acc;
    rep.be_identity_residual = std::abs(acc + rep.dstar_theta_norm2);
    rep.be_identity_as_printed = std::abs(acc + 2.0 * rep.dstar_theta_norm2);
  }

  YorkResult yk = york(geo, phi, sopts, kopts);
  {
    SymTensorField st = cauchy_ahlfors(geo, yk.theta);
    rep.s_theta_norm2 = l2_inner(st, st, m);
    VectorField xi = sharp(yk.theta, m);
    ScalarField lt = directional_derivative(xi, tr, geo.order());
    double acc = 0.0;
    for (std::size_t p = 0; p < lt.points(); ++p) acc += m.weight(p) * lt.values()[p];
    rep.lie_trace_integral_york = acc;
    rep.york_identity_residual =
        std::abs(acc + (static_cast<double>(n) / (n - 1.0)) * rep.s_theta_norm2);
  }

  rep.flag_constant_h = hs.stddev <= verdict_tol * (1.0 + hs.sup);
  rep.flag_killing = rep.killing_residual <= verdict_tol;
  rep.flag_zero_integral =
      std::abs(rep.lie_trace_integral_be) <= verdict_tol * (1.0 + rep.dstar_theta_norm2);

  // Theorem 4: when H is constant, phi = H g + phi_tt
  {
    double hbar = 0.0, vol = 0.0;
    for (std::size_t p = 0; p < phi.points(); ++p) {
      hbar += m.weight(p) * hyp.mean_curvature.values()[p];
      vol += m.weight(p);
    }
    hbar /= vol;
    SymTensorField dev(phi.grid());
    for (int c = 0; c < phi.ncomp(); ++c) {
      const double* a = phi.comp(c);
      const double* gv = m.g().comp(c);
      const double* t = yk.phi_tt.comp(c);
      double* o = dev.comp(c);
      for (std::size_t p = 0; p < phi.points(); ++p) o[p] = a[p] - hbar * gv[p] - t[p];
    }
    rep.theorem4_residual = l2_norm(dev, m) / (1.0 + l2_norm(phi, m));
  }

  // structure check: S*S theta parallel to dH, measured proportionality
  {
    OneFormField sst = ahlfors_laplacian(geo, yk.theta);
    OneFormField dh = exterior_derivative(geo, hyp.mean_curvature);
    const double dh2 = l2_inner(dh, dh, m);
    rep.sst_dh_ratio_derived = -(static_cast<double>(n) - 1.0);
    if (dh2 > 1e-24) {
      rep.sst_dh_ratio = l2_inner(sst, dh, m) / dh2;
      OneFormField r = sst;
      axpy(r, -rep.sst_dh_ratio, dh);
      rep.sst_dh_align = l2_norm(r, m) / (1.0 + l2_norm(sst, m));
    }
  }
  return rep;
}

namespace {

struct MapDifferential {
  // J[a][i] component arrays: (f_*)^a_i = A_ai + d_i p^a
  std::vector<std::vector<double>> j;
  // mapped point coordinates f(x)^a
  std::vector<std::vector<double>> fx;
};

MapDifferential map_differential(const Geometry& src, const TorusMap& map) {
  const Grid& gr = src.grid();
  const int n = gr.n, m = map.m;
  MapDifferential out;
  out.j.assign(m * n, std::vector<double>(gr.points));
  out.fx.assign(m, std::vector<double>(gr.points));
  std::vector<double> tmp(gr.points);
  for (int a = 0; a < m; ++a) {
    const bool has_pert = a < (int)map.perturbation.size() &&
                          map.perturbation[a].points() == gr.points;
    for (int i = 0; i < n; ++i) {
      auto& col = out.j[a * n + i];
      if (has_pert) {
        apply_axis(gr, i, d1_taps(src.order(), gr.spacing[i]), map.perturbation[a].values(),
                   col.data());
      } else {
        std::fill(col.begin(), col.end(), 0.0);
      }
      const double w = static_cast<double>(map.winding[a][i]);
      if (w != 0.0)
        for (std::size_t p = 0; p < gr.points; ++p) col[p] += w;
    }
    double x[3];
    for (std::size_t p = 0; p < gr.points; ++p) {
      gr.coords(p, x);
      double v = 0.0;
      for (int i = 0; i < n; ++i) v += map.winding[a][i] * x[i];
      if (has_pert) v += map.perturbation[a].values()[p];
      out.fx[a][p] = v;
    }
  }
  return out;
}

// target metric, inverse and Christoffels at the mapped point
struct TargetPoint {
  double g[9], gi[9], gam[27];  // gam[a][b][c] = Gbar^a_bc
};

void target_at(const TorusMap& map, const double* fx, TargetPoint& t) {
  const int m = map.m;
  map.target.eval(fx, map.target_lengths.data(), t.g);
  // inverse
  if (m == 2) {
    const double det = t.g[0] * t.g[3] - t.g[1] * t.g[2];
    t.gi[0] = t.g[3] / det;
    t.gi[1] = -t.g[1] / det;
    t.gi[2] = -t.g[2] / det;
    t.gi[3] = t.g[0] / det;
  } else {
    const double a = t.g[0], b = t.g[1], c = t.g[2], d = t.g[4], e = t.g[5], f = t.g[8];
    const double det = a * (d * f - e * e) - b * (b * f - e * c) + c * (b * e - d * c);
    t.gi[0] = (d * f - e * e) / det;
    t.gi[1] = (c * e - b * f) / det;
    t.gi[2] = (b * e - c * d) / det;
    t.gi[3] = t.gi[1];
    t.gi[4] = (a * f - c * c) / det;
    t.gi[5] = (b * c - a * e) / det;
    t.gi[6] = t.gi[2];
    t.gi[7] = t.gi[5];
    t.gi[8] = (a * d - b * b) / det;
  }
  double dg[3][9];
  for (int c = 0; c < m; ++c) map.target.eval_d1(fx, map.target_lengths.data(), c, dg[c]);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) {
        double s = 0.0;
        for (int d = 0; d < m; ++d)
          s += t.gi[a * m + d] * (dg[b][d * m + c] + dg[c][d * m + b] - dg[d][b * m + c]);
        t.gam[(a * m + b) * m + c] = 0.5 * s;
      }
}

}  // namespace

SymTensorField pullback_metric(const Geometry& src, const TorusMap& map) {
  const Grid& gr = src.grid();
  const int n = gr.n, m = map.m;
  MapDifferential md = map_differential(src, map);
  SymTensorField out(gr);
  TargetPoint tp;
  double fx[3];
  for (std::size_t p = 0; p < gr.points; ++p) {
    for (int a = 0; a < m; ++a) fx[a] = md.fx[a][p];
    map.target.eval(fx, map.target_lengths.data(), tp.g);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int a = 0; a < m; ++a)
          for (int b = 0; b < m; ++b)
            s += md.j[a * n + i][p] * md.j[b * n + j][p] * tp.g[a * m + b];
        out.comp(sym_index(i, j, n))[p] = s;
      }
  }
  return out;
}

std::vector<ScalarField> tension_field(const Geometry& src, const TorusMap& map) {
  const Grid& gr = src.grid();
  const int n = gr.n, m = map.m;
  MapDifferential md = map_differential(src, map);
  const MetricField& sm = src.metric();

  // hessians of the perturbation components (winding part is affine)
  std::vector<std::vector<std::vector<double>>> hess(m);
  for (int a = 0; a < m; ++a) {
    if (a < (int)map.perturbation.size() && map.perturbation[a].points() == gr.points) {
      hessian(gr, src.order(), map.perturbation[a].values(), hess[a]);
    } else {
      hess[a].assign(n * (n + 1) / 2, std::vector<double>(gr.points, 0.0));
    }
  }

  std::vector<ScalarField> tau;
  for (int a = 0; a < m; ++a) tau.emplace_back(gr);
  const auto& chris = src.curv().christoffel;
  TargetPoint tp;
  double gi[9], fx[3];
  for (std::size_t p = 0; p < gr.points; ++p) {
    sm.mat_inv(p, gi);
    for (int a = 0; a < m; ++a) fx[a] = md.fx[a][p];
    target_at(map, fx, tp);
    for (int a = 0; a < m; ++a) {
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double t = hess[a][sym_index(i, j, n)][p];
          for (int k = 0; k < n; ++k)
            t -= chris[k][sym_index(i, j, n)][p] * md.j[a * n + k][p];
          for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c)
              t += tp.gam[(a * m + b) * m + c] * md.j[b * n + i][p] * md.j[c * n + j][p];
          s += gi[i * n + j] * t;
        }
      tau[a].values()[p] = s;
    }
  }
  return tau;
}

double map_energy(const Geometry& src, const TorusMap& map) {
  SymTensorField gstar = pullback_metric(src, map);
  ScalarField tr = trace_g(gstar, src.metric());
  double acc = 0.0;
  for (std::size_t p = 0; p < tr.points(); ++p)
    acc += src.metric().weight(p) * (0.5 * tr.values()[p]);
  return acc;
}

MapReport harmonic_balance_check(const Geometry& src, const TorusMap& map,
                                 const SolveOptions& sopts, const KernelOptions& kopts,
                                 double verdict_tol) {
  const Grid& gr = src.grid();
  const MetricField& sm = src.metric();
  const int n = gr.n, m = map.m;
  MapReport rep;
  rep.verdict_tol = verdict_tol;

  SymTensorField gstar = pullback_metric(src, map);
  ScalarField tr = trace_g(gstar, sm);
  std::vector<ScalarField> tau = tension_field(src, map);
  MapDifferential md = map_differential(src, map);

  rep.energy = 0.0;
  for (std::size_t p = 0; p < gr.points; ++p)
    rep.energy += sm.weight(p) * (0.5 * tr.values()[p]);

  // tension norm in the pulled-back target metric
  {
    double acc = 0.0;
    TargetPoint tp;
    double fx[3];
    for (std::size_t p = 0; p < gr.points; ++p) {
      for (int a = 0; a < m; ++a) fx[a] = md.fx[a][p];
      map.target.eval(fx, map.target_lengths.data(), tp.g);
      double s = 0.0;
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) s += tp.g[a * m + b] * tau[a].values()[p] * tau[b].values()[p];
      acc += sm.weight(p) * s;
    }
    rep.tension_norm = std::sqrt(std::max(acc, 0.0));
  }

  // rank condition: min det(J J^T) over points (m <= n)
  {
    double mind = 1e300;
    for (std::size_t p = 0; p < gr.points; ++p) {
      double jj[9] = {0, 0, 0, 0, 0, 0, 0, 0, 0};
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
          double s = 0.0;
          for (int i = 0; i < n; ++i) s += md.j[a * n + i][p] * md.j[b * n + i][p];
          jj[a * m + b] = s;
        }
      double det;
      if (m == 2) det = jj[0] * jj[3] - jj[1] * jj[2];
      else
        det = jj[0] * (jj[4] * jj[8] - jj[5] * jj[7]) - jj[1] * (jj[3] * jj[8] - jj[5] * jj[6]) +
              jj[2] * (jj[3] * jj[7] - jj[4] * jj[6]);
      mind = std::min(mind, det);
    }
    rep.min_jacobian_gram_det = mind;
  }

  // lemma 2 / eq. (7.2): delta(g* - (1/2)(trace g*) g) vs -gbar(tau, f_* .)
  {
    SymTensorField stress(gr);
    for (int c = 0; c < stress.ncomp(); ++c) {
      const double* gs = gstar.comp(c);
      const double* gv = sm.g().comp(c);
      const double* tv = tr.values();
      double* o = stress.comp(c);
      for (std::size_t p = 0; p < gr.points; ++p) o[p] = gs[p] - 0.5 * tv[p] * gv[p];
    }
    OneFormField lhs = divergence_sym(src, stress);
    rep.lemma2_residual = l2_norm(lhs, sm) / (1.0 + l2_norm(gstar, sm));
    OneFormField rhs(gr);
    TargetPoint tp;
    double fx[3];
    for (std::size_t p = 0; p < gr.points; ++p) {
      for (int a = 0; a < m; ++a) fx[a] = md.fx[a][p];
      map.target.eval(fx, map.target_lengths.data(), tp.g);
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int a = 0; a < m; ++a)
          for (int b = 0; b < m; ++b)
            s -= tp.g[a * m + b] * tau[a].values()[p] * md.j[b * n + j][p];
        rhs.comp(j)[p] = s;
      }
    }
    OneFormField diff = lhs;
    axpy(diff, -1.0, rhs);
    rep.eq72_residual = l2_norm(diff, sm) / (1.0 + l2_norm(rhs, sm));
  }

  // Berger-Ebin of g* and the Theorem 5 triple
  BergerEbinResult be = berger_ebin(src, gstar, sopts, kopts);
  {
    OneFormField samp = sampson_laplacian(src, be.theta);
    const double nth = l2_norm(be.theta, sm);
    rep.sampson_theta_residual = l2_norm(samp, sm) / (1.0 + nth);
    ScalarField divxi = codifferential(src, be.theta);  // delta theta = -div xi
    ScalarField u(gr);
    for (std::size_t p = 0; p < gr.points; ++p)
      u.values()[p] = -divxi.values()[p] - tr.values()[p];
    ScalarStats us = scalar_stats(u, sm);
    rep.div_minus_trace_stddev = us.stddev;
    rep.div_minus_trace_mean = us.mean;

    const double escale = 1.0 + l2_norm(gstar, sm);
    rep.flag_harmonic = rep.tension_norm <= verdict_tol * escale;
    rep.flag_iht = rep.sampson_theta_residual <= verdict_tol;
    rep.flag_affine_divergence = us.stddev <= verdict_tol * (1.0 + std::abs(us.mean));
    const int t = (rep.flag_harmonic ? 1 : 0) + (rep.flag_iht ? 1 : 0) +
                  (rep.flag_affine_divergence ? 1 : 0);
    rep.two_of_three_consistent = (t != 2);  // any two imply the third
  }

  // Corollary 7
  {
    ScalarField half_tr(gr);
    for (std::size_t p = 0; p < gr.points; ++p) half_tr.values()[p] = 0.5 * tr.values()[p];
    ScalarStats hs = scalar_stats(half_tr, sm);
    rep.half_trace_stddev = hs.stddev;
    double vol = 0.0;
    for (std::size_t p = 0; p < gr.points; ++p) vol += sm.weight(p);
    rep.energy_constant = rep.energy / vol;
    rep.energy_identity_residual = std::abs(rep.energy - hs.mean * vol);
  }
  return rep;
}

}  // namespace tsplit
