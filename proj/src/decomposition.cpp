#include "tensorsplit/decomposition.hpp"

#include <cmath>

namespace tsplit {

namespace {

SymTensorField scale_metric(const MetricField& m, const ScalarField& lam) {
  SymTensorField out(m.grid());
  for (int s = 0; s < out.ncomp(); ++s) {
    const double* gc = m.g().comp(s);
    const double* lv = lam.values();
    double* o = out.comp(s);
    for (std::size_t p = 0; p < out.points(); ++p) o[p] = lv[p] * gc[p];
  }
  return out;
}

}  // namespace

OrthoDiagnostics berger_ebin_orthogonality(const Geometry& geo, const SymTensorField& phi,
                                           const BergerEbinResult& r) {
  const MetricField& m = geo.metric();
  OrthoDiagnostics d;
  SymTensorField ks = killing_op(geo, r.theta);
  const double nphi = l2_norm(phi, m);
  d.values["norm_phi"] = nphi;
  d.values["norm_dstar_theta"] = l2_norm(ks, m);
  d.values["norm_phi0"] = l2_norm(r.phi0, m);
  d.values["inner_dstar_theta_phi0"] = l2_inner(ks, r.phi0, m);
  d.values["norm_div_phi0"] = l2_norm(divergence_sym(geo, r.phi0), m);
  // left-to-right recomputation of the remainder; zero bitwise
  SymTensorField rec(phi.grid());
  for (int s = 0; s < phi.ncomp(); ++s) {
    const double* a = phi.comp(s);
    const double* b = ks.comp(s);
    const double* c = r.phi0.comp(s);
    double* o = rec.comp(s);
    for (std::size_t p = 0; p < phi.points(); ++p) o[p] = a[p] - b[p] - c[p];
  }
  d.values["reconstruction_sup"] = sup_norm(rec);
  return d;
}

BergerEbinResult berger_ebin(const Geometry& geo, const SymTensorField& phi,
                             const SolveOptions& sopts, const KernelOptions& kopts) {
  require_same_grid(geo.grid(), phi.grid());
  BergerEbinResult out;
  LinearOp op = make_delta_delta_star_op(geo);
  std::vector<OneFormField> kernel;
  if (sopts.deflate_kernel) kernel = kernel_basis(op, kopts, &out.kernel_stats);
  OneFormField rhs = divergence_sym(geo, phi);
  auto [theta, stats] = solve_spsd(op, rhs, sopts, kernel);
  out.theta = std::move(theta);
  out.stats = stats;
  SymTensorField ks = killing_op(geo, out.theta);
  out.phi0 = SymTensorField(phi.grid());
  for (int s = 0; s < phi.ncomp(); ++s) {
    const double* a = phi.comp(s);
    const double* b = ks.comp(s);
    double* o = out.phi0.comp(s);
    for (std::size_t p = 0; p < phi.points(); ++p) o[p] = a[p] - b[p];
  }
  out.diagnostics = berger_ebin_orthogonality(geo, phi, out);
  return out;
}

OrthoDiagnostics york_orthogonality(const Geometry& geo, const SymTensorField& phi,
                                    const YorkResult& r) {
  const MetricField& m = geo.metric();
  OrthoDiagnostics d;
  SymTensorField ks = killing_op(geo, r.theta);
  SymTensorField lg = scale_metric(m, r.lambda);
  SymTensorField s_theta = cauchy_ahlfors(geo, r.theta);
  const double nphi = l2_norm(phi, m);
  d.values["norm_phi"] = nphi;
  d.values["norm_dstar_theta"] = l2_norm(ks, m);
  d.values["norm_lambda_g"] = l2_norm(lg, m);
  d.values["norm_phi_tt"] = l2_norm(r.phi_tt, m);
  d.values["norm_s_theta"] = l2_norm(s_theta, m);
  d.values["inner_dstar_theta_phi_tt"] = l2_inner(ks, r.phi_tt, m);
  d.values["inner_lambda_g_phi_tt"] = l2_inner(lg, r.phi_tt, m);
  d.values["inner_s_theta_phi_tt"] = l2_inner(s_theta, r.phi_tt, m);
  // recorded but not an orthogonality claim: the longitudinal and pure-trace
  // parts are not L2-orthogonal to each other in general
  d.values["inner_dstar_theta_lambda_g"] = l2_inner(ks, lg, m);
  d.values["norm_trace_phi_tt"] = l2_norm(trace_g(r.phi_tt, m), m);
  d.values["norm_div_phi_tt"] = l2_norm(divergence_sym(geo, r.phi_tt), m);
  SymTensorField rec(phi.grid());
  for (int s = 0; s < phi.ncomp(); ++s) {
    const double* a = phi.comp(s);
    const double* b = ks.comp(s);
    const double* c = lg.comp(s);
    const double* e = r.phi_tt.comp(s);
    double* o = rec.comp(s);
    for (std::size_t p = 0; p < phi.points(); ++p) o[p] = a[p] - b[p] - c[p] - e[p];
  }
  d.values["reconstruction_sup"] = sup_norm(rec);
  return d;
}

YorkResult york(const Geometry& geo, const SymTensorField& phi, const SolveOptions& sopts,
                const KernelOptions& kopts) {
  require_same_grid(geo.grid(), phi.grid());
  const MetricField& m = geo.metric();
  const int n = geo.n();
  YorkResult out;
  out.outside_dimension_hypothesis = (n == 2);

  LinearOp op = make_ahlfors_op(geo);
  std::vector<OneFormField> kernel;
  if (sopts.deflate_kernel) kernel = kernel_basis(op, kopts, &out.kernel_stats);

  auto [tr, phiring] = trace_and_traceless(phi, m);
  OneFormField rhs = cauchy_ahlfors_adjoint(geo, phiring);
  auto [theta, stats] = solve_spsd(op, rhs, sopts, kernel);
  out.theta = std::move(theta);
  out.stats = stats;

  ScalarField dtheta = codifferential(geo, out.theta);
  out.lambda = ScalarField(phi.grid());
  {
    const double* tv = tr.values();
    const double* dv = dtheta.values();
    double* lv = out.lambda.values();
    for (std::size_t p = 0; p < phi.points(); ++p) lv[p] = (tv[p] + dv[p]) / n;
  }
  SymTensorField ks = killing_op(geo, out.theta);
  out.phi_tt = SymTensorField(phi.grid());
  for (int s = 0; s < phi.ncomp(); ++s) {
    const double* a = phi.comp(s);
    const double* b = ks.comp(s);
    const double* gc = m.g().comp(s);
    const double* lv = out.lambda.values();
    double* o = out.phi_tt.comp(s);
    for (std::size_t p = 0; p < phi.points(); ++p) o[p] = a[p] - b[p] - lv[p] * gc[p];
  }
  out.diagnostics = york_orthogonality(geo, phi, out);
  return out;
}

}  // namespace tsplit
