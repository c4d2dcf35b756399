#include "tensorsplit/ricci_apps.hpp"

#include <cmath>

namespace tsplit {

namespace {

double lie_derivative_integral(const Geometry& geo, const OneFormField& theta,
                               const ScalarField& f) {
  VectorField xi = sharp(theta, geo.metric());
  ScalarField lf = directional_derivative(xi, f, geo.order());
  double acc = 0.0;
  const double* v = lf.values();
  for (std::size_t p = 0; p < f.points(); ++p) acc += geo.metric().weight(p) * v[p];
  return acc;
}

double relative_residual(const Geometry& geo, const OneFormField& r, const OneFormField& scale) {
  return l2_norm(r, geo.metric()) / (1.0 + l2_norm(scale, geo.metric()));
}

}  // namespace

std::pair<BergerEbinResult, Theorem1Report> ricci_berger_ebin(const Geometry& geo,
                                                              const SolveOptions& sopts,
                                                              const KernelOptions& kopts,
                                                              double verdict_tol) {
  const MetricField& m = geo.metric();
  const SymTensorField& ric = geo.curv().ricci;
  const ScalarField& s = geo.curv().scalar;

  BergerEbinResult be = berger_ebin(geo, ric, sopts, kopts);

  Theorem1Report rep;
  rep.verdict_tol = verdict_tol;
  ScalarStats ss = scalar_stats(s, m);
  rep.scalar_curvature_stddev = ss.stddev;
  rep.scalar_curvature_sup = ss.sup;

  SymTensorField ks = killing_op(geo, be.theta);
  const double nks = l2_norm(ks, m);
  const double nth = l2_norm(be.theta, m);
  rep.killing_residual = nth > 1e-12 ? nks / nth : nks;
  rep.dstar_theta_norm2 = nks * nks;

  rep.lie_integral = lie_derivative_integral(geo, be.theta, s);
  rep.identity_residual = std::abs(rep.lie_integral + 2.0 * rep.dstar_theta_norm2);
  rep.identity_scale = 1.0 + rep.dstar_theta_norm2;

  OneFormField ds = exterior_derivative(geo, s);
  OneFormField dric = divergence_sym(geo, ric);
  axpy(dric, 0.5, ds);
  rep.bianchi_residual = relative_residual(geo, dric, ds);

  rep.flag_constant_s = ss.stddev <= verdict_tol * (1.0 + ss.sup);
  rep.flag_killing = rep.killing_residual <= verdict_tol;
  rep.flag_zero_integral =
      std::abs(rep.lie_integral) <= verdict_tol * (1.0 + 2.0 * rep.dstar_theta_norm2);
  return {std::move(be), rep};
}

std::pair<YorkResult, Theorem2Report> ricci_york(const Geometry& geo, const SolveOptions& sopts,
                                                 const KernelOptions& kopts, double verdict_tol) {
  const MetricField& m = geo.metric();
  const int n = geo.n();
  const SymTensorField& ric = geo.curv().ricci;
  const ScalarField& s = geo.curv().scalar;

  YorkResult yr = york(geo, ric, sopts, kopts);

  Theorem2Report rep;
  rep.verdict_tol = verdict_tol;
  ScalarStats ss = scalar_stats(s, m);
  rep.s_stddev = ss.stddev;
  rep.s_sup = ss.sup;

  SymTensorField st = cauchy_ahlfors(geo, yr.theta);
  const double nst = l2_norm(st, m);
  const double nth = l2_norm(yr.theta, m);
  rep.conformal_killing_residual = nth > 1e-12 ? nst / nth : nst;
  rep.s_theta_norm2 = nst * nst;

  rep.lie_integral = lie_derivative_integral(geo, yr.theta, s);

  // lambda - s/n
  {
    double sup = 0.0;
    const double* lv = yr.lambda.values();
    const double* sv = s.values();
    for (std::size_t p = 0; p < s.points(); ++p)
      sup = std::max(sup, std::abs(lv[p] - sv[p] / n));
    rep.lambda_minus_s_over_n_sup = sup;
  }

  OneFormField ds = exterior_derivative(geo, s);
  {
    OneFormField sst = ahlfors_laplacian(geo, yr.theta);
    OneFormField r1 = sst;
    axpy(r1, (n - 2.0) / (2.0 * n), ds);
    rep.ahlfors_identity_residual = relative_residual(geo, r1, ds);
    OneFormField r2 = std::move(sst);
    axpy(r2, (n - 2.0) / n, ds);
    rep.ahlfors_identity_paper_residual = relative_residual(geo, r2, ds);
  }
  {
    OneFormField samp = sampson_laplacian(geo, yr.theta);
    OneFormField dlam = exterior_derivative(geo, yr.lambda);
    OneFormField r = samp;
    axpy(r, static_cast<double>(n) - 2.0, dlam);
    rep.sampson_identity_residual = relative_residual(geo, r, dlam);
  }
  {
    SymTensorField dev(ric.grid());
    for (int c = 0; c < ric.ncomp(); ++c) {
      const double* rv = ric.comp(c);
      const double* gv = m.g().comp(c);
      const double* sv = s.values();
      double* o = dev.comp(c);
      for (std::size_t p = 0; p < ric.points(); ++p) o[p] = rv[p] - sv[p] / n * gv[p];
    }
    rep.einstein_residual = l2_norm(dev, m) / (1.0 + l2_norm(ric, m));
  }
  if (n >= 3)
    rep.york_lie_identity_residual =
        std::abs(rep.lie_integral + (2.0 * n / (n - 2.0)) * rep.s_theta_norm2);

  rep.trivial_decomposition = rep.conformal_killing_residual <= verdict_tol;
  rep.flag_constant_s = ss.stddev <= verdict_tol * (1.0 + ss.sup);
  rep.flag_zero_integral =
      std::abs(rep.lie_integral) <= verdict_tol * (1.0 + 2.0 * rep.s_theta_norm2);
  const double ric_scale = 1.0 + l2_norm(ric, m);
  rep.einstein_verdict = rep.trivial_decomposition &&
                         l2_norm(yr.phi_tt, m) <= verdict_tol * ric_scale &&
                         rep.lambda_minus_s_over_n_sup <= std::sqrt(verdict_tol);
  return {std::move(yr), rep};
}

SampsonIdentity sampson_identity_check(const Geometry& geo, const YorkResult& yr) {
  const int n = geo.n();
  const ScalarField& s = geo.curv().scalar;
  SampsonIdentity out;
  OneFormField dlam = exterior_derivative(geo, yr.lambda);
  {
    OneFormField r = sampson_laplacian(geo, yr.theta);
    axpy(r, static_cast<double>(n) - 2.0, dlam);
    out.residual = relative_residual(geo, r, dlam);
  }
  OneFormField ds = exterior_derivative(geo, s);
  {
    // ds = -d(delta theta) + n d lambda, exact by the definition of lambda
    ScalarField dth = codifferential(geo, yr.theta);
    OneFormField r = exterior_derivative(geo, dth);
    axpy(r, 1.0, ds);
    axpy(r, -static_cast<double>(n), dlam);
    out.step_4_10 = relative_residual(geo, r, ds);
  }
  {
    // -ds = 2 dd* theta - 2 d lambda
    OneFormField r = delta_delta_star(geo, yr.theta);
    scale(r, 2.0);
    axpy(r, 1.0, ds);
    axpy(r, -2.0, dlam);
    out.step_4_11 = relative_residual(geo, r, ds);
  }
  return out;
}

SolitonReport soliton_residual(const Geometry& geo, const VectorField& xi,
                               const ScalarField& lambda, double verdict_tol) {
  const MetricField& m = geo.metric();
  require_same_grid(geo.grid(), xi.grid());
  require_same_grid(geo.grid(), lambda.grid());
  const SymTensorField& ric = geo.curv().ricci;

  OneFormField theta = flat(xi, m);
  SymTensorField ks = killing_op(geo, theta);
  SymTensorField resid(geo.grid());
  for (int c = 0; c < resid.ncomp(); ++c) {
    const double* rv = ric.comp(c);
    const double* kv = ks.comp(c);
    const double* gv = m.g().comp(c);
    const double* lv = lambda.values();
    double* o = resid.comp(c);
    for (std::size_t p = 0; p < resid.points(); ++p) o[p] = rv[p] - kv[p] - lv[p] * gv[p];
  }

  SolitonReport rep;
  rep.verdict_tol = verdict_tol;
  rep.residual_l2 = l2_norm(resid, m);
  rep.residual_sup = sup_norm(resid);
  ScalarStats ls = scalar_stats(lambda, m);
  rep.lambda_stddev = ls.stddev;
  const double nth = l2_norm(theta, m);
  const double nks = l2_norm(ks, m);
  rep.killing_residual = nth > 1e-12 ? nks / nth : nks;
  OneFormField samp = sampson_laplacian(geo, theta);
  rep.sampson_theta_residual = l2_norm(samp, m) / (1.0 + nth);
  rep.is_soliton = ls.stddev <= verdict_tol * (1.0 + ls.sup);
  rep.is_trivial = rep.killing_residual <= verdict_tol;
  return rep;
}

}  // namespace tsplit
