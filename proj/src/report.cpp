#include "tensorsplit/report.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>

#include "tensorsplit/config_json.hpp"
#include "tensorsplit/field_io.hpp"
#include "tensorsplit/immersion.hpp"
#include "tensorsplit/random_fields.hpp"
#include "tensorsplit/ricci_apps.hpp"

namespace tsplit {

using nlohmann::json;

ScalarSpec scalar_spec_from_json(const json& j, int dim) {
  ScalarSpec s;
  if (!j.contains("modes")) throw std::invalid_argument("scalar spec: missing modes");
  for (const auto& jm : j.at("modes")) {
    ScalarMode m;
    m.amp = jm.at("amp").get<double>();
    const auto k = jm.at("k").get<std::vector<int>>();
    if ((int)k.size() != dim) throw std::invalid_argument("scalar spec: k size != dim");
    for (int a = 0; a < dim; ++a) m.k[a] = k[a];
    if (jm.contains("phase")) {
      const auto ph = jm.at("phase").get<std::vector<double>>();
      for (int a = 0; a < dim && a < (int)ph.size(); ++a) m.phase[a] = ph[a];
    }
    s.modes.push_back(m);
  }
  return s;
}

namespace {

ScalarSpec builtin_u(int dim, double amp) {
  ScalarSpec u;
  ScalarMode m;
  m.amp = amp;
  for (int a = 0; a < dim; ++a) m.k[a] = 1;
  u.modes.push_back(m);
  return u;
}

MetricSpec builtin_metric(const std::string& name, int dim) {
  if (name == "flat") return MetricSpec::flat(dim);
  if (name == "conformal") return MetricSpec::conformal(dim, builtin_u(dim, 0.1));
  if (name == "diagonal_periodic") {
    MetricSpec s;
    s.family = MetricSpec::Family::diagonal_periodic;
    s.dim = dim;
    s.dp_alpha = {0.3, 0.2, 0.25};
    s.dp_alpha.resize(dim);
    s.dp_wave.assign(dim, {0, 0, 0});
    for (int a = 0; a < dim; ++a) s.dp_wave[a][(a + 1) % dim] = 1;
    s.dp_phase = {0.3, 1.1, 2.0};
    s.dp_phase.resize(dim);
    return s;
  }
  if (name == "product") {
    MetricSpec s;
    s.family = MetricSpec::Family::product;
    s.dim = dim;
    if (dim == 3) {
      MetricSpec::Factor f1{std::make_shared<MetricSpec>(MetricSpec::conformal(2, builtin_u(2, 0.1))),
                            {0, 1}};
      MetricSpec::Factor f2{std::make_shared<MetricSpec>(MetricSpec::flat(1)), {2}};
      s.factors = {f1, f2};
    } else {
      MetricSpec::Factor f1{std::make_shared<MetricSpec>(MetricSpec::flat(1)), {0}};
      MetricSpec::Factor f2{std::make_shared<MetricSpec>(MetricSpec::flat(1)), {1}};
      s.factors = {f1, f2};
    }
    return s;
  }
  throw std::invalid_argument("unknown metric family: " + name);
}

}  // namespace

MetricSpec metric_spec_from_json(const json& j, int dim) {
  if (j.is_string()) return builtin_metric(j.get<std::string>(), dim);
  const std::string family = j.at("family").get<std::string>();
  MetricSpec s;
  s.dim = dim;
  if (family == "flat_diagonal") {
    s.family = MetricSpec::Family::flat_diagonal;
    s.diag = j.contains("diag") ? j.at("diag").get<std::vector<double>>()
                                : std::vector<double>(dim, 1.0);
    if ((int)s.diag.size() != dim) throw std::invalid_argument("flat_diagonal: diag size != dim");
  } else if (family == "conformal_flat") {
    s.family = MetricSpec::Family::conformal_flat;
    s.conf_u = j.contains("u") ? scalar_spec_from_json(j.at("u"), dim) : builtin_u(dim, 0.1);
  } else if (family == "diagonal_periodic") {
    s.family = MetricSpec::Family::diagonal_periodic;
    s.dp_alpha = j.at("alpha").get<std::vector<double>>();
    const auto waves = j.at("wave").get<std::vector<std::vector<int>>>();
    for (const auto& w : waves) {
      std::array<int, 3> a{0, 0, 0};
      for (int i = 0; i < dim && i < (int)w.size(); ++i) a[i] = w[i];
      s.dp_wave.push_back(a);
    }
    s.dp_phase = j.contains("phase") ? j.at("phase").get<std::vector<double>>()
                                     : std::vector<double>(dim, 0.0);
    if ((int)s.dp_alpha.size() != dim || (int)s.dp_wave.size() != dim ||
        (int)s.dp_phase.size() != dim)
      throw std::invalid_argument("diagonal_periodic: parameter sizes must equal dim");
    for (double a : s.dp_alpha)
      if (std::abs(a) >= 1.0)
        throw std::invalid_argument("diagonal_periodic: |alpha| must be < 1");
  } else if (family == "product") {
    s.family = MetricSpec::Family::product;
    std::vector<bool> used(dim, false);
    for (const auto& jf : j.at("factors")) {
      MetricSpec::Factor f;
      f.axes = jf.at("axes").get<std::vector<int>>();
      for (int a : f.axes) {
        if (a < 0 || a >= dim || used[a])
          throw std::invalid_argument("product: axes must partition 0..dim-1");
        used[a] = true;
      }
      f.spec = std::make_shared<MetricSpec>(metric_spec_from_json(jf.at("spec"), (int)f.axes.size()));
      s.factors.push_back(std::move(f));
    }
    for (bool u : used)
      if (!u) throw std::invalid_argument("product: axes must cover 0..dim-1");
  } else {
    throw std::invalid_argument("unknown metric family: " + family);
  }
  return s;
}

namespace {

struct Checks {
  json arr = json::array();
  bool all_pass = true;
  void add(const std::string& name, double value, double threshold, const std::string& stmt) {
    const bool ok = value <= threshold;
    all_pass = all_pass && ok;
    arr.push_back({{"name", name},
                   {"value", value},
                   {"threshold", threshold},
                   {"passed", ok},
                   {"statement", stmt}});
  }
  void add_flag(const std::string& name, bool ok, const std::string& stmt) {
    all_pass = all_pass && ok;
    arr.push_back({{"name", name}, {"passed", ok}, {"statement", stmt}});
  }
  void info(const std::string& name, double value, const std::string& stmt) {
    arr.push_back({{"name", name}, {"value", value}, {"passed", nullptr}, {"statement", stmt}});
  }
};

struct Ctx {
  json config;
  Grid grid;
  int order = 4;
  std::uint64_t seed = 0;
  SolveOptions sopts;
  KernelOptions kopts;
  double verdict_tol = 1e-6;
  std::string dump_dir;
  bool any_not_converged = false;
  json dumped = json::array();
};

Grid grid_from_json(const json& c) {
  int n = 2;
  std::vector<int> dims;
  std::vector<double> lengths;
  if (c.contains("grid")) {
    const auto& jg = c.at("grid");
    n = jg.value("n", 2);
    if (jg.contains("dims")) dims = jg.at("dims").get<std::vector<int>>();
    else if (jg.contains("N")) dims.assign(n, jg.at("N").get<int>());
    if (jg.contains("lengths")) lengths = jg.at("lengths").get<std::vector<double>>();
  }
  if (dims.empty()) dims.assign(n, 32);
  if (lengths.empty()) lengths.assign(n, 1.0);
  return make_grid(n, dims, lengths);
}

Ctx make_ctx(const json& c) {
  Ctx x;
  x.config = c;
  x.grid = grid_from_json(c);
  x.order = c.value("order", 4);
  if (x.order != 2 && x.order != 4) throw std::invalid_argument("order must be 2 or 4");
  x.seed = c.value("seed", (std::uint64_t)0);
  if (c.contains("solve")) {
    const auto& js = c.at("solve");
    x.sopts.rel_tol = js.value("rel_tol", 1e-10);
    if (!(x.sopts.rel_tol > 0.0 && x.sopts.rel_tol < 1e-2))
      throw std::invalid_argument("solve.rel_tol must be in (0, 1e-2)");
    x.sopts.max_iter = js.value("max_iter", 0);
    x.sopts.deflate_kernel = js.value("deflate_kernel", true);
    const std::string pc = js.value("preconditioner", "none");
    if (pc == "diagonal") x.sopts.preconditioner = SolveOptions::Precond::diagonal;
    else if (pc != "none") throw std::invalid_argument("unknown preconditioner: " + pc);
  }
  if (c.contains("kernel")) {
    const auto& jk = c.at("kernel");
    x.kopts.max_dim = jk.value("max_dim", 0);
    x.kopts.eig_tol = jk.value("eig_tol", 1e-8);
    x.kopts.probes = jk.value("probes", 0);
    x.kopts.max_outer = jk.value("max_outer", 24);
  }
  x.kopts.seed = x.seed;
  if (c.contains("tolerances")) x.verdict_tol = c.at("tolerances").value("verdict", 1e-6);
  if (c.contains("output")) x.dump_dir = c.at("output").value("dump_fields", "");
  return x;
}

Geometry make_geometry(const Ctx& x) {
  const json& c = x.config;
  MetricSpec spec = c.contains("metric") ? metric_spec_from_json(c.at("metric"), x.grid.n)
                                         : MetricSpec::flat(x.grid.n);
  return Geometry(sample_metric(spec, x.grid), x.order);
}

void dump_field(Ctx& x, const Field& f, const std::string& name) {
  if (x.dump_dir.empty()) return;
  std::filesystem::create_directories(x.dump_dir);
  const std::string path = x.dump_dir + "/" + name + ".json";
  write_field(f, path);
  x.dumped.push_back(path);
}

json theorem1_json(const Theorem1Report& r) {
  return {{"scalar_curvature_stddev", r.scalar_curvature_stddev},
          {"scalar_curvature_sup", r.scalar_curvature_sup},
          {"killing_residual", r.killing_residual},
          {"lie_integral", r.lie_integral},
          {"bianchi_residual", r.bianchi_residual},
          {"identity_residual", r.identity_residual},
          {"identity_scale", r.identity_scale},
          {"dstar_theta_norm2", r.dstar_theta_norm2},
          {"flag_constant_s", r.flag_constant_s},
          {"flag_killing", r.flag_killing},
          {"flag_zero_integral", r.flag_zero_integral},
          {"verdict_tol", r.verdict_tol}};
}

json theorem2_json(const Theorem2Report& r) {
  return {{"s_stddev", r.s_stddev},
          {"s_sup", r.s_sup},
          {"conformal_killing_residual", r.conformal_killing_residual},
          {"lie_integral", r.lie_integral},
          {"lambda_minus_s_over_n_sup", r.lambda_minus_s_over_n_sup},
          {"ahlfors_identity_residual", r.ahlfors_identity_residual},
          {"ahlfors_identity_paper_residual", r.ahlfors_identity_paper_residual},
          {"sampson_identity_residual", r.sampson_identity_residual},
          {"einstein_residual", r.einstein_residual},
          {"york_lie_identity_residual", r.york_lie_identity_residual},
          {"s_theta_norm2", r.s_theta_norm2},
          {"trivial_decomposition", r.trivial_decomposition},
          {"flag_constant_s", r.flag_constant_s},
          {"flag_zero_integral", r.flag_zero_integral},
          {"einstein_verdict", r.einstein_verdict},
          {"verdict_tol", r.verdict_tol}};
}

json stats_json(const SolveStats& s) {
  return {{"iterations", s.iterations},
          {"final_rel_residual", s.final_rel_residual},
          {"kernel_dim_deflated", s.kernel_dim_deflated},
          {"converged", s.converged}};
}

json diag_json(const OrthoDiagnostics& d) {
  json j;
  for (const auto& [k, v] : d.values) j[k] = v;
  return j;
}

// ------------------------------------------------------------------ commands

void cmd_curvature(Ctx& x, Checks& ck, json& values) {
  Geometry geo = make_geometry(x);
  const MetricField& m = geo.metric();
  const auto& cv = geo.curv();
  ScalarStats ss = scalar_stats(cv.scalar, m);
  values["scalar_curvature"] = {{"sup", ss.sup}, {"stddev", ss.stddev}, {"mean", ss.mean}};
  values["ricci_sup"] = sup_norm(cv.ricci);

  ScalarField tr = trace_g(cv.ricci, m);
  double sup = 0.0;
  for (std::size_t p = 0; p < tr.points(); ++p)
    sup = std::max(sup, std::abs(tr.values()[p] - cv.scalar.values()[p]));
  ck.add("trace_consistency", sup, 1e-12 * (1.0 + ss.sup),
         "trace_g(Ric) = s pointwise (definitional consistency)");

  OneFormField ds = exterior_derivative(geo, cv.scalar);
  OneFormField br = divergence_sym(geo, cv.ricci);
  axpy(br, 0.5, ds);
  const double bianchi = l2_norm(br, m) / (1.0 + l2_norm(ds, m));
  values["bianchi_residual"] = bianchi;
  if (x.config.contains("check_thresholds") &&
      x.config.at("check_thresholds").contains("bianchi"))
    ck.add("bianchi", bianchi, x.config.at("check_thresholds").at("bianchi").get<double>(),
           "|delta Ric + ds/2| / (1+|ds|): contracted second Bianchi identity");
  else
    ck.info("bianchi", bianchi, "|delta Ric + ds/2| / (1+|ds|)");

  dump_field(x, cv.ricci, "ricci");
  dump_field(x, cv.scalar, "scalar_curvature");
}

void cmd_ricci(Ctx& x, Checks& ck, json& values, json& flags) {
  Geometry geo = make_geometry(x);
  auto [be, t1] = ricci_berger_ebin(geo, x.sopts, x.kopts, x.verdict_tol);
  auto [yk, t2] = ricci_york(geo, x.sopts, x.kopts, x.verdict_tol);
  SampsonIdentity si = sampson_identity_check(geo, yk);
  x.any_not_converged = x.any_not_converged || !be.stats.converged || !yk.stats.converged;

  values["theorem1"] = theorem1_json(t1);
  values["theorem2"] = theorem2_json(t2);
  values["sampson_identity"] = {{"residual", si.residual},
                                {"step_trace_derivative", si.step_4_10},
                                {"step_divergence", si.step_4_11}};
  values["berger_ebin"] = {{"stats", stats_json(be.stats)}, {"diagnostics", diag_json(be.diagnostics)}};
  values["york"] = {{"stats", stats_json(yk.stats)},
                    {"diagnostics", diag_json(yk.diagnostics)},
                    {"outside_dimension_hypothesis", yk.outside_dimension_hypothesis}};

  flags["constant_scalar_curvature"] = t1.flag_constant_s;
  flags["killing_theta"] = t1.flag_killing;
  flags["zero_lie_integral"] = t1.flag_zero_integral;
  flags["trivial_york"] = t2.trivial_decomposition;
  flags["einstein"] = t2.einstein_verdict;

  ck.add("be_integral_identity", t1.identity_residual, 1e-6 * t1.identity_scale,
         "int L_xi s dv = -2 <d* theta, d* theta> (derived form)");
  ck.add("sign_law", t1.lie_integral, 1e-10,
         "int L_xi s dv <= 0: no vector field makes the integral positive");
  ck.add("be_reconstruction", be.diagnostics.get("reconstruction_sup"), 0.0,
         "phi0 is the exact subtractive remainder");
  ck.add("york_reconstruction", yk.diagnostics.get("reconstruction_sup"), 0.0,
         "phi_tt is the exact subtractive remainder");
  const bool t1_agree = (t1.flag_constant_s == t1.flag_killing) &&
                        (t1.flag_killing == t1.flag_zero_integral);
  ck.add_flag("theorem1_equivalence", t1_agree,
              "constant s <=> Killing theta# <=> vanishing Lie integral");
  const bool t2_agree = (t2.flag_constant_s == t2.trivial_decomposition) &&
                        (t2.trivial_decomposition == t2.flag_zero_integral);
  ck.add_flag("theorem2_equivalence", t2_agree,
              "constant s <=> trivial York split <=> vanishing Lie integral");

  dump_field(x, be.theta, "be_theta");
  dump_field(x, be.phi0, "be_phi0");
  dump_field(x, yk.theta, "york_theta");
  dump_field(x, yk.lambda, "york_lambda");
  dump_field(x, yk.phi_tt, "york_phi_tt");
}

void cmd_decompose(Ctx& x, Checks& ck, json& values) {
  Geometry geo = make_geometry(x);
  const MetricField& m = geo.metric();
  const json jd = x.config.value("decompose", json::object());
  const std::string kind = jd.value("kind", "berger_ebin");

  SymTensorField phi(x.grid);
  if (jd.contains("input") && jd.at("input").is_string()) {
    const std::string inp = jd.at("input").get<std::string>();
    if (inp == "metric") {
      phi = m.g();
    } else {
      Field f = read_field(inp);
      if (f.kind() != FieldKind::sym_tensor)
        throw std::invalid_argument("decompose input must be a symtensor field file");
      require_same_grid(f.grid(), x.grid);
      phi.raw() = f.raw();
    }
  } else {
    Rng rng(x.seed);
    const json jr = jd.contains("input") ? jd.at("input").value("random", json::object())
                                         : json::object();
    phi = random_smooth_sym(x.grid, rng, jr.value("kmax", 2), jr.value("damp", 2));
  }
  const double nphi = l2_norm(phi, m);
  values["norm_phi"] = nphi;

  const double c_tol = 100.0 * x.sopts.rel_tol;
  if (kind == "berger_ebin") {
    BergerEbinResult r = berger_ebin(geo, phi, x.sopts, x.kopts);
    x.any_not_converged = x.any_not_converged || !r.stats.converged;
    values["stats"] = stats_json(r.stats);
    values["diagnostics"] = diag_json(r.diagnostics);
    ck.add("reconstruction", r.diagnostics.get("reconstruction_sup"), 0.0,
           "phi = d* theta + phi0 with the subtractive remainder");
    ck.add("orthogonality", std::abs(r.diagnostics.get("inner_dstar_theta_phi0")),
           std::max(c_tol * nphi * nphi, 1e-14), "<d* theta, phi0> = 0");
    ck.add("divergence_free_remainder", r.diagnostics.get("norm_div_phi0"),
           std::max(c_tol * nphi, 1e-12), "|delta phi0| small: phi0 in the kernel of delta");
    dump_field(x, r.theta, "theta");
    dump_field(x, r.phi0, "phi0");
  } else if (kind == "york") {
    YorkResult r = york(geo, phi, x.sopts, x.kopts);
    x.any_not_converged = x.any_not_converged || !r.stats.converged;
    values["stats"] = stats_json(r.stats);
    values["diagnostics"] = diag_json(r.diagnostics);
    values["outside_dimension_hypothesis"] = r.outside_dimension_hypothesis;
    ck.add("reconstruction", r.diagnostics.get("reconstruction_sup"), 0.0,
           "phi = d* theta + lambda g + phi_tt with the subtractive remainder");
    ck.add("trace_free_tt", r.diagnostics.get("norm_trace_phi_tt"),
           std::max(1e-11 * nphi, 1e-14), "trace_g phi_tt = 0 pointwise");
    ck.add("divergence_tt", r.diagnostics.get("norm_div_phi_tt"),
           std::max(x.config.value("check_thresholds", json::object())
                        .value("div_tt_rel", 1e-6) * nphi,
                    1e-12),
           "|delta phi_tt| small: phi_tt transverse");
    ck.add("orthogonality_tt", std::abs(r.diagnostics.get("inner_dstar_theta_phi_tt")),
           std::max(c_tol * nphi * nphi, 1e-14), "<d* theta, phi_tt> = 0");
    dump_field(x, r.theta, "theta");
    dump_field(x, r.lambda, "lambda");
    dump_field(x, r.phi_tt, "phi_tt");
  } else {
    throw std::invalid_argument("decompose.kind must be berger_ebin or york");
  }
  dump_field(x, phi, "phi");
}

void cmd_soliton(Ctx& x, Checks& ck, json& values, json& flags) {
  Geometry geo = make_geometry(x);
  const MetricField& m = geo.metric();
  const json js = x.config.value("soliton", json::object());

  VectorField xi(x.grid);
  ScalarField lam(x.grid);
  bool from_york = js.value("from", "") == std::string("ricci_york");
  double tt_norm = 0.0;
  if (from_york) {
    auto [yk, t2] = ricci_york(geo, x.sopts, x.kopts, x.verdict_tol);
    x.any_not_converged = x.any_not_converged || !yk.stats.converged;
    xi = sharp(yk.theta, m);
    lam = yk.lambda;
    tt_norm = l2_norm(yk.phi_tt, m);
    values["york"] = theorem2_json(t2);
  } else {
    if (js.contains("xi")) {
      const auto& jx = js.at("xi");
      for (int c = 0; c < x.grid.n && c < (int)jx.size(); ++c) {
        ScalarSpec sp = scalar_spec_from_json(jx.at(c), x.grid.n);
        double pt[3];
        for (std::size_t p = 0; p < x.grid.points; ++p) {
          x.grid.coords(p, pt);
          xi.comp(c)[p] = sp.value(pt, x.grid.lengths.data(), x.grid.n);
        }
      }
    }
    if (js.contains("lambda")) {
      ScalarSpec sp = scalar_spec_from_json(js.at("lambda"), x.grid.n);
      double pt[3];
      for (std::size_t p = 0; p < x.grid.points; ++p) {
        x.grid.coords(p, pt);
        lam.values()[p] = sp.value(pt, x.grid.lengths.data(), x.grid.n);
      }
    }
  }

  SolitonReport r = soliton_residual(geo, xi, lam, x.verdict_tol);
  values["residual_l2"] = r.residual_l2;
  values["residual_sup"] = r.residual_sup;
  values["lambda_stddev"] = r.lambda_stddev;
  values["killing_residual"] = r.killing_residual;
  values["sampson_theta_residual"] = r.sampson_theta_residual;
  flags["is_soliton"] = r.is_soliton;
  flags["is_trivial"] = r.is_trivial;
  if (from_york)
    ck.add("residual_equals_tt", std::abs(r.residual_l2 - tt_norm), 1e-12 * (1.0 + tt_norm),
           "with the York parts, Ric - (1/2)L_xi g - lambda g = phi_tt exactly");
}

void cmd_hypersurface(Ctx& x, Checks& ck, json& values, json& flags) {
  const json jh = x.config.value("hypersurface", json::object());
  ScalarField height(x.grid);
  if (jh.contains("height") && jh.at("height").is_string()) {
    Field f = read_field(jh.at("height").get<std::string>());
    if (f.kind() != FieldKind::scalar) throw std::invalid_argument("height must be a scalar field");
    require_same_grid(f.grid(), x.grid);
    height.raw() = f.raw();
  } else if (jh.contains("height")) {
    ScalarSpec sp = scalar_spec_from_json(jh.at("height"), x.grid.n);
    double pt[3];
    for (std::size_t p = 0; p < x.grid.points; ++p) {
      x.grid.coords(p, pt);
      height.values()[p] = sp.value(pt, x.grid.lengths.data(), x.grid.n);
    }
  }
  GraphHypersurface hyp = graph_hypersurface(height, x.order);
  HypersurfaceReport r = hypersurface_decomposition_report(hyp, x.sopts, x.kopts, x.verdict_tol);

  values["mean_curvature_stddev"] = r.mean_curvature_stddev;
  values["mean_curvature_sup"] = r.mean_curvature_sup;
  values["codazzi_residual"] = r.codazzi_residual;
  values["killing_residual"] = r.killing_residual;
  values["lie_trace_integral_be"] = r.lie_trace_integral_be;
  values["dstar_theta_norm2"] = r.dstar_theta_norm2;
  values["be_identity_residual"] = r.be_identity_residual;
  values["be_identity_as_printed"] = r.be_identity_as_printed;
  values["lie_trace_integral_york"] = r.lie_trace_integral_york;
  values["s_theta_norm2"] = r.s_theta_norm2;
  values["york_identity_residual"] = r.york_identity_residual;
  values["theorem4_residual"] = r.theorem4_residual;
  values["sst_dh_ratio"] = r.sst_dh_ratio;
  values["sst_dh_ratio_derived"] = r.sst_dh_ratio_derived;
  values["sst_dh_align"] = r.sst_dh_align;
  flags["constant_mean_curvature"] = r.flag_constant_h;
  flags["killing_theta"] = r.flag_killing;
  flags["zero_lie_integral"] = r.flag_zero_integral;

  const bool agree = (r.flag_constant_h == r.flag_killing) &&
                     (r.flag_killing == r.flag_zero_integral);
  ck.add_flag("proposition3_equivalence", agree,
              "constant H <=> Killing theta# <=> vanishing Lie integral");
  ck.add("be_identity", r.be_identity_residual, 1e-6 * (1.0 + r.dstar_theta_norm2),
         "int L_xi trace_g(phi) dv = -<d* theta, d* theta> (derived constant)");
  ck.add("york_identity", r.york_identity_residual, 1e-6 * (1.0 + r.s_theta_norm2),
         "int L_xi trace_g(phi) dv = -(n/(n-1)) <S theta, S theta> (derived constant)");
  dump_field(x, hyp.second_form, "second_form");
  dump_field(x, hyp.mean_curvature, "mean_curvature");
}

TorusMap map_from_json(const Ctx& x, const json& jm) {
  TorusMap map;
  const auto w = jm.at("winding").get<std::vector<std::vector<int>>>();
  map.m = (int)w.size();
  if (map.m < 2 || map.m > 3) throw std::invalid_argument("map: target dimension must be 2 or 3");
  map.winding = w;
  for (const auto& row : w)
    if ((int)row.size() != x.grid.n) throw std::invalid_argument("map: winding must be m x n");
  if (jm.contains("perturbation")) {
    const auto& jp = jm.at("perturbation");
    for (int a = 0; a < map.m && a < (int)jp.size(); ++a) {
      ScalarField p(x.grid);
      if (!jp.at(a).is_null()) {
        ScalarSpec sp = scalar_spec_from_json(jp.at(a), x.grid.n);
        double pt[3];
        for (std::size_t q = 0; q < x.grid.points; ++q) {
          x.grid.coords(q, pt);
          p.values()[q] = sp.value(pt, x.grid.lengths.data(), x.grid.n);
        }
      }
      map.perturbation.push_back(std::move(p));
    }
  }
  map.target = jm.contains("target") ? metric_spec_from_json(jm.at("target"), map.m)
                                     : MetricSpec::flat(map.m);
  if (jm.contains("target_lengths")) {
    const auto tl = jm.at("target_lengths").get<std::vector<double>>();
    for (int a = 0; a < map.m && a < (int)tl.size(); ++a) map.target_lengths[a] = tl[a];
  }
  return map;
}

void cmd_map(Ctx& x, Checks& ck, json& values, json& flags) {
  Geometry geo = make_geometry(x);
  TorusMap map = map_from_json(x, x.config.at("map"));
  MapReport r = harmonic_balance_check(geo, map, x.sopts, x.kopts, x.verdict_tol);

  values["energy"] = r.energy;
  values["tension_norm"] = r.tension_norm;
  values["lemma2_residual"] = r.lemma2_residual;
  values["eq72_residual"] = r.eq72_residual;
  values["min_jacobian_gram_det"] = r.min_jacobian_gram_det;
  values["sampson_theta_residual"] = r.sampson_theta_residual;
  values["div_minus_trace_stddev"] = r.div_minus_trace_stddev;
  values["affine_divergence_constant"] = r.div_minus_trace_mean;
  values["half_trace_stddev"] = r.half_trace_stddev;
  values["energy_constant"] = r.energy_constant;
  values["energy_identity_residual"] = r.energy_identity_residual;
  flags["harmonic"] = r.flag_harmonic;
  flags["infinitesimal_harmonic_transformation"] = r.flag_iht;
  flags["affine_divergence"] = r.flag_affine_divergence;

  ck.add_flag("two_of_three", r.two_of_three_consistent,
              "of {harmonic, iht theta, div xi = trace g* + C}, any two imply the third");
  ck.add_flag("rank_condition", r.min_jacobian_gram_det > 0.0,
              "the differential has full rank everywhere");
}

void cmd_kernel(Ctx& x, Checks& ck, json& values) {
  Geometry geo = make_geometry(x);
  const MetricField& m = geo.metric();
  for (const auto& [opname, op] : {std::pair<std::string, LinearOp>{"delta_delta_star",
                                                                    make_delta_delta_star_op(geo)},
                                   {"ahlfors", make_ahlfors_op(geo)}}) {
    KernelStats st;
    std::vector<OneFormField> basis = kernel_basis(op, x.kopts, &st);
    json jb;
    jb["dimension"] = basis.size();
    jb["ritz_values"] = st.ritz;
    jb["lambda_max"] = st.lambda_max;
    jb["threshold"] = st.threshold;
    jb["outer_iterations"] = st.outer_iterations;
    jb["converged"] = st.converged;
    x.any_not_converged = x.any_not_converged || !st.converged;
    double worst = 0.0;
    for (const auto& v : basis) {
      OneFormField av = op.apply(v);
      worst = std::max(worst, l2_norm(av, m) / std::max(l2_norm(v, m), 1e-300));
    }
    jb["max_basis_residual"] = worst;
    values[opname] = jb;
    if (!basis.empty())
      ck.add("kernel_residual_" + opname, worst, 10.0 * st.threshold,
             "|op v| <= 10 * eig_tol * lambda_max for each basis vector");
  }
}

void cmd_convergence(Ctx& x, Checks& ck, json& values) {
  const json jc = x.config.value("convergence", json::object());
  const std::string check = jc.value("check", "curvature");
  std::vector<int> ladder = jc.value("dims", std::vector<int>{16, 32, 64});
  if (ladder.size() < 3) throw std::invalid_argument("convergence: ladder needs >= 3 resolutions");
  for (std::size_t i = 1; i < ladder.size(); ++i)
    if (ladder[i] != 2 * ladder[i - 1])
      throw std::invalid_argument("convergence: each resolution must double the last");

  std::vector<double> errors;
  std::vector<ScalarField> scalars;  // for the restriction-reference checks
  std::vector<Grid> grids;
  double ref_scale = 1.0;

  for (int N : ladder) {
    Ctx sub = x;
    std::vector<int> dims(x.grid.n, N);
    std::vector<double> lengths(x.grid.lengths.begin(), x.grid.lengths.begin() + x.grid.n);
    sub.grid = make_grid(x.grid.n, dims, lengths);
    if (check == "curvature") {
      Geometry geo = make_geometry(sub);
      scalars.push_back(geo.curv().scalar);
      grids.push_back(sub.grid);
      ref_scale = std::max(ref_scale, scalar_stats(geo.curv().scalar, geo.metric()).sup);
    } else if (check == "bianchi") {
      Geometry geo = make_geometry(sub);
      OneFormField ds = exterior_derivative(geo, geo.curv().scalar);
      OneFormField br = divergence_sym(geo, geo.curv().ricci);
      axpy(br, 0.5, ds);
      errors.push_back(l2_norm(br, geo.metric()) / (1.0 + l2_norm(ds, geo.metric())));
    } else if (check == "codazzi") {
      ScalarField height(sub.grid);
      ScalarSpec sp = scalar_spec_from_json(x.config.at("hypersurface").at("height"), sub.grid.n);
      double pt[3];
      for (std::size_t p = 0; p < sub.grid.points; ++p) {
        sub.grid.coords(p, pt);
        height.values()[p] = sp.value(pt, sub.grid.lengths.data(), sub.grid.n);
      }
      errors.push_back(codazzi_divergence_check(graph_hypersurface(height, sub.order)));
    } else if (check == "weitzenboeck") {
      Geometry geo = make_geometry(sub);
      Rng rng(sub.seed);
      OneFormField th = random_smooth_oneform(sub.grid, rng, 1, 2);
      const double nth = l2_norm(th, geo.metric());
      if (nth > 0.0) scale(th, 1.0 / nth);
      errors.push_back(l2_norm(weitzenboeck_residual(geo, th), geo.metric()));
    } else if (check == "sampson") {
      Geometry geo = make_geometry(sub);
      auto [yk, t2] = ricci_york(geo, sub.sopts, sub.kopts, sub.verdict_tol);
      sub.any_not_converged = sub.any_not_converged || !yk.stats.converged;
      x.any_not_converged = x.any_not_converged || sub.any_not_converged;
      errors.push_back(t2.sampson_identity_residual);
    } else if (check == "map_balance") {
      Geometry geo = make_geometry(sub);
      TorusMap map = map_from_json(sub, x.config.at("map"));
      MapReport r = harmonic_balance_check(geo, map, sub.sopts, sub.kopts, sub.verdict_tol);
      errors.push_back(r.eq72_residual);
    } else {
      throw std::invalid_argument("unknown convergence check: " + check);
    }
  }

  if (check == "curvature") {
    // restriction of the finest solution onto each coarser grid
    const ScalarField& fine = scalars.back();
    const Grid& gf = grids.back();
    for (std::size_t i = 0; i + 1 < scalars.size(); ++i) {
      const Grid& gc = grids[i];
      const int f = gf.dims[0] / gc.dims[0];
      double sup = 0.0;
      for (int a = 0; a < gc.dims[0]; ++a)
        for (int b = 0; b < gc.dims[1]; ++b) {
          if (gc.n == 2) {
            sup = std::max(sup, std::abs(scalars[i].values()[gc.index(a, b)] -
                                         fine.values()[gf.index(a * f, b * f)]));
          } else {
            for (int c = 0; c < gc.dims[2]; ++c)
              sup = std::max(sup, std::abs(scalars[i].values()[gc.index(a, b, c)] -
                                           fine.values()[gf.index(a * f, b * f, c * f)]));
          }
        }
      errors.push_back(sup);
    }
  }

  values["errors"] = errors;
  values["ladder"] = ladder;
  bool exact = true;
  for (double e : errors) exact = exact && e <= 1e-12 * (1.0 + ref_scale);
  if (exact) {
    values["observed_order"] = "exact";
  } else {
    std::vector<double> slopes;
    for (std::size_t i = 0; i + 1 < errors.size(); ++i)
      slopes.push_back(std::log2(errors[i] / errors[i + 1]));
    values["slopes"] = slopes;
    const double observed = *std::min_element(slopes.begin(), slopes.end());
    values["observed_order"] = observed;
    if (jc.contains("expect_order"))
      ck.add("observed_order", jc.at("expect_order").get<double>() - observed, 0.0,
             "measured convergence order meets the expectation");
  }
}

}  // namespace

RunResult run(const json& config) {
  const auto t0 = std::chrono::steady_clock::now();
  Ctx x = make_ctx(config);
  const std::string command = config.value("command", "");
  Checks ck;
  json values = json::object();
  json flags = json::object();

  if (command == "curvature") cmd_curvature(x, ck, values);
  else if (command == "ricci") cmd_ricci(x, ck, values, flags);
  else if (command == "decompose") cmd_decompose(x, ck, values);
  else if (command == "soliton") cmd_soliton(x, ck, values, flags);
  else if (command == "hypersurface") cmd_hypersurface(x, ck, values, flags);
  else if (command == "map") cmd_map(x, ck, values, flags);
  else if (command == "kernel") cmd_kernel(x, ck, values);
  else if (command == "convergence") cmd_convergence(x, ck, values);
  else throw std::invalid_argument("unknown command: " + command);

  RunResult out;
  out.report["schema_version"] = 1;
  out.report["command"] = command;
  out.report["config"] = x.config;
  out.report["checks"] = ck.arr;
  out.report["values"] = values;
  out.report["flags"] = flags;
  out.report["fields"] = x.dumped;
  const auto t1 = std::chrono::steady_clock::now();
  out.report["timing"] = {
      {"wall_ms", std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count()}};
  out.exit_status = x.any_not_converged ? 2 : (ck.all_pass ? 0 : 3);
  return out;
}

int run_text(const std::string& config_text, std::string& report_out) {
  json config = json::parse(config_text);
  RunResult r = run(config);
  report_out = r.report.dump(2);
  return r.exit_status;
}

}  // namespace tsplit
