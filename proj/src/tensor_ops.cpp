#include "tensorsplit/tensor_ops.hpp"

#include <cassert>
#include <cmath>
#include <memory>
#include <unordered_map>
#include <vector>

namespace tsplit {

namespace {

// thread-local freelist of grid-sized buffers; the solver applies operators
// thousands of times and 2MB allocations would hit mmap every call
class Scratch {
 public:
  explicit Scratch(std::size_t len) : len_(len) {
    auto& fl = freelist()[len];
    if (!fl.empty()) {
      buf_ = std::move(fl.back());
      fl.pop_back();
    } else {
      buf_.assign(len, 0.0);
    }
  }
  ~Scratch() { freelist()[len_].push_back(std::move(buf_)); }
  Scratch(const Scratch&) = delete;
  double* data() { return buf_.data(); }

 private:
  static std::unordered_map<std::size_t, std::vector<std::vector<double>>>& freelist() {
    thread_local std::unordered_map<std::size_t, std::vector<std::vector<double>>> fl;
    return fl;
  }
  std::size_t len_;
  std::vector<double> buf_;
};

struct SymPack {
  int n = 0, nsym = 0;
  int ci[6]{}, cj[6]{};
  explicit SymPack(int dim) : n(dim), nsym(dim * (dim + 1) / 2) {
    int t = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) { ci[t] = i; cj[t] = j; ++t; }
  }
};

// delta_d theta: exact adjoint of the plain exterior derivative on functions
void codiff1_core(const Geometry& geo, const double* const* th, double* out) {
  const Grid& gr = geo.grid();
  const MetricField& m = geo.metric();
  const int n = gr.n;
  const std::size_t P = gr.points;
  Scratch u(P);
  for (int j = 0; j < n; ++j) {
    double* ud = u.data();
    for (std::size_t p = 0; p < P; ++p) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += m.g_inv().comp(sym_index(i, j, n))[p] * th[i][p];
      ud[p] = m.weight(p) * s;
    }
    if (j == 0) apply_axis(gr, j, geo.d1_t(j), ud, out);
    else apply_axis_add(gr, j, geo.d1_t(j), ud, out);
  }
  for (std::size_t p = 0; p < P; ++p) out[p] /= m.weight(p);
}

// A1 theta: raw symmetrized derivative with stabilized stencils
void killing_raw_core(const Geometry& geo, const double* const* th, double* const* out) {
  const Grid& gr = geo.grid();
  const int n = gr.n;
  const std::size_t P = gr.points;
  std::vector<std::unique_ptr<Scratch>> dth;  // dth[a*n+b] = D~_a th_b
  dth.reserve(n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      dth.emplace_back(std::make_unique<Scratch>(P));
      apply_axis(gr, a, geo.d1_stab(a), th[b], dth.back()->data());
    }
  const auto& chris = geo.curv().christoffel;
  SymPack sp(n);
  for (int s = 0; s < sp.nsym; ++s) {
    const int i = sp.ci[s], j = sp.cj[s];
    const double* dij = dth[i * n + j]->data();
    const double* dji = dth[j * n + i]->data();
    double* o = out[s];
    for (std::size_t p = 0; p < P; ++p) {
      double v = 0.5 * (dij[p] + dji[p]);
      for (int k = 0; k < n; ++k) v -= chris[k][s][p] * th[k][p];
      o[p] = v;
    }
  }
}

// trace correction: out[ij] -= (1/n) g_ij (trace_g out + dtheta)
void trace_correct(const Geometry& geo, const double* const* th, double* const* a1) {
  const Grid& gr = geo.grid();
  const MetricField& m = geo.metric();
  const int n = gr.n;
  const std::size_t P = gr.points;
  SymPack sp(n);
  Scratch dth(P);
  codiff1_core(geo, th, dth.data());
  Scratch tr(P);
  double* trd = tr.data();
  for (std::size_t p = 0; p < P; ++p) {
    double t = 0.0;
    for (int s = 0; s < sp.nsym; ++s) {
      const double mult = (sp.ci[s] == sp.cj[s]) ? 1.0 : 2.0;
      t += mult * m.g_inv().comp(s)[p] * a1[s][p];
    }
    trd[p] = t + dth.data()[p];
  }
  const double inv_n = 1.0 / n;
  for (int s = 0; s < sp.nsym; ++s) {
    double* o = a1[s];
    const double* gc = m.g().comp(s);
    for (std::size_t p = 0; p < P; ++p) o[p] -= inv_n * gc[p] * trd[p];
  }
}

void killing_core(const Geometry& geo, const double* const* th, double* const* out) {
  killing_raw_core(geo, th, out);
  trace_correct(geo, th, out);
}

// exact adjoint of A1 applied to a packed symmetric field given as
// Psi^{ij} = w g^{ia} g^{jb} phi_ab (preweighted, packed symmetric)
void a1_adjoint_from_psi(const Geometry& geo, const double* const* psi, double* const* out) {
  const Grid& gr = geo.grid();
  const MetricField& m = geo.metric();
  const int n = gr.n;
  const std::size_t P = gr.points;
  SymPack sp(n);
  std::vector<std::unique_ptr<Scratch>> v;  // v[j] = sum_i D~t_i Psi^{ij}
  for (int j = 0; j < n; ++j) {
    v.emplace_back(std::make_unique<Scratch>(P));
    for (int i = 0; i < n; ++i) {
      const double* src = psi[sym_index(i, j, n)];
      if (i == 0) apply_axis(gr, i, geo.d1_stab_t(i), src, v[j]->data());
      else apply_axis_add(gr, i, geo.d1_stab_t(i), src, v[j]->data());
    }
  }
  const auto& chris = geo.curv().christoffel;
  for (std::size_t p = 0; p < P; ++p) {
    double vj[3];
    for (int j = 0; j < n; ++j) {
      double s = v[j]->data()[p];
      for (int t = 0; t < sp.nsym; ++t) {
        const double mult = (sp.ci[t] == sp.cj[t]) ? 1.0 : 2.0;
        s -= mult * psi[t][p] * chris[j][t][p];
      }
      vj[j] = s;
    }
    const double iw = 1.0 / m.weight(p);
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += m.g().comp(sym_index(k, j, n))[p] * vj[j];
      out[k][p] = s * iw;
    }
  }
}

// Psi for a general packed symmetric field
void build_psi(const Geometry& geo, const double* const* phi, double* const* psi) {
  const MetricField& m = geo.metric();
  const int n = geo.n();
  const std::size_t P = geo.grid().points;
  SymPack sp(n);
  double gi[9], ph[9], tmp[9];
  for (std::size_t p = 0; p < P; ++p) {
    m.mat_inv(p, gi);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) ph[i * n + j] = phi[sym_index(i, j, n)][p];
    const double w = m.weight(p);
    // tmp = gi * ph ; psi = w * tmp * gi
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int a = 0; a < n; ++a) s += gi[i * n + a] * ph[a * n + j];
        tmp[i * n + j] = s;
      }
    for (int s = 0; s < sp.nsym; ++s) {
      const int i = sp.ci[s], j = sp.cj[s];
      double acc = 0.0;
      for (int b = 0; b < n; ++b) acc += tmp[i * n + b] * gi[b * n + j];
      psi[s][p] = w * acc;
    }
  }
}

// Psi for the pure-trace field tau*g: Psi^{ij} = w tau g^{ij}
void build_psi_trace(const Geometry& geo, const double* tau, double* const* psi) {
  const MetricField& m = geo.metric();
  const int nsym = ncomp_for(FieldKind::sym_tensor, geo.n());
  const std::size_t P = geo.grid().points;
  for (int s = 0; s < nsym; ++s) {
    const double* gic = m.g_inv().comp(s);
    double* o = psi[s];
    for (std::size_t p = 0; p < P; ++p) o[p] = m.weight(p) * tau[p] * gic[p];
  }
}

void trace_core(const Geometry& geo, const double* const* phi, double* out) {
  const MetricField& m = geo.metric();
  const int n = geo.n();
  const std::size_t P = geo.grid().points;
  SymPack sp(n);
  for (std::size_t p = 0; p < P; ++p) {
    double t = 0.0;
    for (int s = 0; s < sp.nsym; ++s) {
      const double mult = (sp.ci[s] == sp.cj[s]) ? 1.0 : 2.0;
      t += mult * m.g_inv().comp(s)[p] * phi[s][p];
    }
    out[p] = t;
  }
}

void d_scalar_core(const Geometry& geo, const double* f, double* const* out) {
  const Grid& gr = geo.grid();
  for (int a = 0; a < gr.n; ++a) apply_axis(gr, a, geo.d1(a), f, out[a]);
}

// divergence_sym on raw arrays
void divsym_core(const Geometry& geo, const double* const* phi, double* const* out) {
  const Grid& gr = geo.grid();
  const int n = gr.n;
  const int nsym = n * (n + 1) / 2;
  const std::size_t P = gr.points;

  std::vector<std::unique_ptr<Scratch>> psi;
  double* psd[6];
  for (int s = 0; s < nsym; ++s) {
    psi.emplace_back(std::make_unique<Scratch>(P));
    psd[s] = psi.back()->data();
  }
  build_psi(geo, phi, psd);
  a1_adjoint_from_psi(geo, psd, out);  // out = A1* phi

  Scratch tau(P);
  trace_core(geo, phi, tau.data());
  build_psi_trace(geo, tau.data(), psd);
  std::vector<std::unique_ptr<Scratch>> corr;
  double* cor[3];
  for (int a = 0; a < n; ++a) {
    corr.emplace_back(std::make_unique<Scratch>(P));
    cor[a] = corr.back()->data();
  }
  a1_adjoint_from_psi(geo, psd, cor);  // A1*(tau g)
  std::vector<std::unique_ptr<Scratch>> dtau;
  double* dt[3];
  for (int a = 0; a < n; ++a) {
    dtau.emplace_back(std::make_unique<Scratch>(P));
    dt[a] = dtau.back()->data();
  }
  d_scalar_core(geo, tau.data(), dt);
  const double inv_n = 1.0 / n;
  for (int a = 0; a < n; ++a) {
    double* o = out[a];
    for (std::size_t p = 0; p < P; ++p) o[p] -= inv_n * (cor[a][p] + dt[a][p]);
  }
}

void comp_ptrs(const Field& f, const double** ptr) {
  for (int c = 0; c < f.ncomp(); ++c) ptr[c] = f.comp(c);
}
void comp_ptrs(Field& f, double** ptr) {
  for (int c = 0; c < f.ncomp(); ++c) ptr[c] = f.comp(c);
}

}  // namespace

SymTensorField killing_op(const Geometry& geo, const OneFormField& theta) {
  require_same_grid(geo.grid(), theta.grid());
  SymTensorField out(geo.grid());
  const double* th[3];
  double* o[6];
  comp_ptrs(theta, th);
  comp_ptrs(out, o);
  killing_core(geo, th, o);
  return out;
}

OneFormField divergence_sym(const Geometry& geo, const SymTensorField& phi) {
  require_same_grid(geo.grid(), phi.grid());
  OneFormField out(geo.grid());
  const double* ph[6];
  double* o[3];
  comp_ptrs(phi, ph);
  comp_ptrs(out, o);
  divsym_core(geo, ph, o);
  return out;
}

ScalarField trace_g(const SymTensorField& phi, const MetricField& m) {
  require_same_grid(phi.grid(), m.grid());
  const int n = m.n();
  ScalarField out(phi.grid());
  SymPack sp(n);
  double* o = out.values();
  for (std::size_t p = 0; p < phi.points(); ++p) {
    double t = 0.0;
    for (int s = 0; s < sp.nsym; ++s) {
      const double mult = (sp.ci[s] == sp.cj[s]) ? 1.0 : 2.0;
      t += mult * m.g_inv().comp(s)[p] * phi.comp(s)[p];
    }
    o[p] = t;
  }
  return out;
}

std::pair<ScalarField, SymTensorField> trace_and_traceless(const SymTensorField& phi,
                                                           const MetricField& m) {
  ScalarField tr = trace_g(phi, m);
  SymTensorField tl(phi.grid());
  const int n = m.n();
  const double inv_n = 1.0 / n;
  for (int s = 0; s < phi.ncomp(); ++s) {
    const double* ph = phi.comp(s);
    const double* gc = m.g().comp(s);
    const double* tv = tr.values();
    double* o = tl.comp(s);
    for (std::size_t p = 0; p < phi.points(); ++p) o[p] = ph[p] - inv_n * tv[p] * gc[p];
  }
  return {std::move(tr), std::move(tl)};
}

OneFormField exterior_derivative(const Geometry& geo, const ScalarField& f) {
  require_same_grid(geo.grid(), f.grid());
  OneFormField out(geo.grid());
  double* o[3];
  comp_ptrs(out, o);
  d_scalar_core(geo, f.values(), o);
  return out;
}

TwoFormField exterior_derivative(const Geometry& geo, const OneFormField& theta) {
  require_same_grid(geo.grid(), theta.grid());
  const Grid& gr = geo.grid();
  const int n = gr.n;
  TwoFormField out(gr);
  Scratch a(gr.points), b(gr.points);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      apply_axis(gr, i, geo.d1(i), theta.comp(j), a.data());
      apply_axis(gr, j, geo.d1(j), theta.comp(i), b.data());
      double* o = out.comp(two_form_index(i, j, n));
      for (std::size_t p = 0; p < gr.points; ++p) o[p] = a.data()[p] - b.data()[p];
    }
  return out;
}

ScalarField codifferential(const Geometry& geo, const OneFormField& theta) {
  require_same_grid(geo.grid(), theta.grid());
  ScalarField out(geo.grid());
  const double* th[3];
  comp_ptrs(theta, th);
  codiff1_core(geo, th, out.values());
  return out;
}

OneFormField codifferential(const Geometry& geo, const TwoFormField& omega) {
  require_same_grid(geo.grid(), omega.grid());
  const Grid& gr = geo.grid();
  const MetricField& m = geo.metric();
  const int n = gr.n;
  const std::size_t P = gr.points;
  OneFormField out(gr);
  // Om^{ij} = g^{ia} g^{jb} om_ab (antisymmetric full), weighted by w
  std::vector<std::unique_ptr<Scratch>> om;
  double* od[9];
  for (int t = 0; t < n * n; ++t) {
    om.emplace_back(std::make_unique<Scratch>(P));
    od[t] = om.back()->data();
  }
  double gi[9], f[9], tmp[9];
  for (std::size_t p = 0; p < P; ++p) {
    m.mat_inv(p, gi);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) f[i * n + j] = omega.at(i, j, p);
    const double w = m.weight(p);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int a = 0; a < n; ++a) s += gi[i * n + a] * f[a * n + j];
        tmp[i * n + j] = s;
      }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int b = 0; b < n; ++b) s += tmp[i * n + b] * gi[b * n + j];
        od[i * n + j][p] = w * s;
      }
  }
  std::vector<std::unique_ptr<Scratch>> v;
  for (int j = 0; j < n; ++j) {
    v.emplace_back(std::make_unique<Scratch>(P));
    for (int i = 0; i < n; ++i) {
      if (i == 0) apply_axis(gr, i, geo.d1_t(i), od[i * n + j], v[j]->data());
      else apply_axis_add(gr, i, geo.d1_t(i), od[i * n + j], v[j]->data());
    }
  }
  for (std::size_t p = 0; p < P; ++p) {
    const double iw = 1.0 / m.weight(p);
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += m.g().comp(sym_index(k, j, n))[p] * v[j]->data()[p];
      out.comp(k)[p] = s * iw;
    }
  }
  return out;
}

SymTensorField cauchy_ahlfors(const Geometry& geo, const OneFormField& theta) {
  SymTensorField out = killing_op(geo, theta);
  ScalarField dth = codifferential(geo, theta);
  const MetricField& m = geo.metric();
  const double inv_n = 1.0 / geo.n();
  for (int s = 0; s < out.ncomp(); ++s) {
    double* o = out.comp(s);
    const double* gc = m.g().comp(s);
    const double* dv = dth.values();
    for (std::size_t p = 0; p < out.points(); ++p) o[p] += inv_n * dv[p] * gc[p];
  }
  return out;
}

OneFormField cauchy_ahlfors_adjoint(const Geometry& geo, const SymTensorField& omega) {
  OneFormField out = divergence_sym(geo, omega);
  ScalarField tr = trace_g(omega, geo.metric());
  OneFormField dtr = exterior_derivative(geo, tr);
  const double inv_n = 1.0 / geo.n();
  for (int a = 0; a < out.ncomp(); ++a) {
    double* o = out.comp(a);
    const double* d = dtr.comp(a);
    for (std::size_t p = 0; p < out.points(); ++p) o[p] += inv_n * d[p];
  }
  return out;
}

void delta_delta_star_into(const Geometry& geo, const OneFormField& x, OneFormField& out) {
  const int nsym = ncomp_for(FieldKind::sym_tensor, geo.n());
  const std::size_t P = geo.grid().points;
  std::vector<std::unique_ptr<Scratch>> ks;
  double* kd[6];
  for (int s = 0; s < nsym; ++s) {
    ks.emplace_back(std::make_unique<Scratch>(P));
    kd[s] = ks.back()->data();
  }
  const double* th[3];
  double* o[3];
  comp_ptrs(x, th);
  comp_ptrs(out, o);
  killing_core(geo, th, kd);
  divsym_core(geo, kd, o);
}

OneFormField delta_delta_star(const Geometry& geo, const OneFormField& theta) {
  OneFormField out(theta.grid());
  delta_delta_star_into(geo, theta, out);
  return out;
}

void ahlfors_into(const Geometry& geo, const OneFormField& x, OneFormField& out) {
  const Grid& gr = geo.grid();
  const MetricField& m = geo.metric();
  const int n = gr.n;
  const int nsym = n * (n + 1) / 2;
  const std::size_t P = gr.points;
  std::vector<std::unique_ptr<Scratch>> sbuf;
  double* sd[6];
  for (int s = 0; s < nsym; ++s) {
    sbuf.emplace_back(std::make_unique<Scratch>(P));
    sd[s] = sbuf.back()->data();
  }
  const double* th[3];
  double* o[3];
  comp_ptrs(x, th);
  comp_ptrs(out, o);
  // S = killing + (1/n) (delta theta) g
  killing_core(geo, th, sd);
  {
    Scratch dth(P);
    codiff1_core(geo, th, dth.data());
    const double inv_n = 1.0 / n;
    for (int s = 0; s < nsym; ++s) {
      const double* gc = m.g().comp(s);
      for (std::size_t p = 0; p < P; ++p) sd[s][p] += inv_n * dth.data()[p] * gc[p];
    }
  }
  // S* = divergence + (1/n) d(trace)
  divsym_core(geo, sd, o);
  Scratch tr(P);
  trace_core(geo, sd, tr.data());
  std::vector<std::unique_ptr<Scratch>> dtr;
  double* dt[3];
  for (int a = 0; a < n; ++a) {
    dtr.emplace_back(std::make_unique<Scratch>(P));
    dt[a] = dtr.back()->data();
  }
  d_scalar_core(geo, tr.data(), dt);
  const double inv_n = 1.0 / n;
  for (int a = 0; a < n; ++a)
    for (std::size_t p = 0; p < P; ++p) o[a][p] += inv_n * dt[a][p];
}

OneFormField ahlfors_laplacian(const Geometry& geo, const OneFormField& theta) {
  OneFormField out(theta.grid());
  ahlfors_into(geo, theta, out);
  return out;
}

OneFormField sampson_laplacian(const Geometry& geo, const OneFormField& theta) {
  OneFormField out = delta_delta_star(geo, theta);
  scale(out, 2.0);
  ScalarField dth = codifferential(geo, theta);
  OneFormField ddth = exterior_derivative(geo, dth);
  axpy(out, -1.0, ddth);
  return out;
}

OneFormField ricci_contract(const Geometry& geo, const OneFormField& theta) {
  const MetricField& m = geo.metric();
  const int n = geo.n();
  OneFormField out(theta.grid());
  const SymTensorField& ric = geo.curv().ricci;
  double gi[9];
  for (std::size_t p = 0; p < theta.points(); ++p) {
    m.mat_inv(p, gi);
    double xi[3];
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int l = 0; l < n; ++l) s += gi[k * n + l] * theta.comp(l)[p];
      xi[k] = s;
    }
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += ric.comp(sym_index(j, k, n))[p] * xi[k];
      out.comp(j)[p] = s;
    }
  }
  return out;
}

OneFormField weitzenboeck_residual(const Geometry& geo, const OneFormField& theta) {
  const int n = geo.n();
  OneFormField out = ahlfors_laplacian(geo, theta);
  TwoFormField dth = exterior_derivative(geo, theta);
  OneFormField cd2 = codifferential(geo, dth);
  axpy(out, -0.5, cd2);
  ScalarField dl = codifferential(geo, theta);
  OneFormField ddl = exterior_derivative(geo, dl);
  axpy(out, -(static_cast<double>(n) - 1.0) / n, ddl);
  OneFormField ric = ricci_contract(geo, theta);
  axpy(out, 1.0, ric);
  return out;
}

VectorField sharp(const OneFormField& theta, const MetricField& m) {
  require_same_grid(theta.grid(), m.grid());
  const int n = m.n();
  VectorField out(theta.grid());
  for (std::size_t p = 0; p < theta.points(); ++p)
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += m.g_inv().comp(sym_index(i, j, n))[p] * theta.comp(j)[p];
      out.comp(i)[p] = s;
    }
  return out;
}

OneFormField flat(const VectorField& xi, const MetricField& m) {
  require_same_grid(xi.grid(), m.grid());
  const int n = m.n();
  OneFormField out(xi.grid());
  for (std::size_t p = 0; p < xi.points(); ++p)
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += m.g().comp(sym_index(i, j, n))[p] * xi.comp(j)[p];
      out.comp(i)[p] = s;
    }
  return out;
}

LinearOp make_delta_delta_star_op(const Geometry& geo) {
  LinearOp op;
  op.geom = &geo;
  op.self_adjoint_psd = true;
  op.kernel_hint = "killing one-forms (isometry generators)";
  op.apply_into = [&geo](const OneFormField& x, OneFormField& y) {
    delta_delta_star_into(geo, x, y);
  };
  return op;
}

LinearOp make_ahlfors_op(const Geometry& geo) {
  LinearOp op;
  op.geom = &geo;
  op.self_adjoint_psd = true;
  op.kernel_hint = "conformal killing one-forms";
  op.apply_into = [&geo](const OneFormField& x, OneFormField& y) { ahlfors_into(geo, x, y); };
  return op;
}

}  // namespace tsplit
