#include "tensorsplit/solver.hpp"

#include <algorithm>
#include <cmath>

#include "tensorsplit/random_fields.hpp"

namespace tsplit {

namespace {

void project_out(OneFormField& r, std::span<const OneFormField> basis, const MetricField& m) {
  for (const auto& b : basis) {
    const double c = l2_inner(b, r, m);
    axpy(r, -c, b);
  }
}

// small dense symmetric eigensolver (cyclic Jacobi); k <= 16
void jacobi_eigh(std::vector<double>& A, int k, std::vector<double>& evals,
                 std::vector<double>& evecs) {
  evecs.assign(k * k, 0.0);
  for (int i = 0; i < k; ++i) evecs[i * k + i] = 1.0;
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < k; ++p)
      for (int q = p + 1; q < k; ++q) off += A[p * k + q] * A[p * k + q];
    if (off < 1e-30) break;
    for (int p = 0; p < k; ++p)
      for (int q = p + 1; q < k; ++q) {
        const double apq = A[p * k + q];
        if (std::abs(apq) < 1e-300) continue;
        const double app = A[p * k + p], aqq = A[q * k + q];
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t), s = t * c;
        for (int i = 0; i < k; ++i) {
          const double aip = A[i * k + p], aiq = A[i * k + q];
          A[i * k + p] = c * aip - s * aiq;
          A[i * k + q] = s * aip + c * aiq;
        }
        for (int i = 0; i < k; ++i) {
          const double api = A[p * k + i], aqi = A[q * k + i];
          A[p * k + i] = c * api - s * aqi;
          A[q * k + i] = s * api + c * aqi;
        }
        for (int i = 0; i < k; ++i) {
          const double vip = evecs[i * k + p], viq = evecs[i * k + q];
          evecs[i * k + p] = c * vip - s * viq;
          evecs[i * k + q] = s * vip + c * viq;
        }
      }
  }
  evals.assign(k, 0.0);
  for (int i = 0; i < k; ++i) evals[i] = A[i * k + i];
  // sort ascending along with eigenvector columns
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return evals[a] < evals[b]; });
  std::vector<double> ev2(k), vec2(k * k);
  for (int j = 0; j < k; ++j) {
    ev2[j] = evals[idx[j]];
    for (int i = 0; i < k; ++i) vec2[i * k + j] = evecs[i * k + idx[j]];
  }
  evals = std::move(ev2);
  evecs = std::move(vec2);
}

// plain CG on (op + sigma I) x = b in the weighted inner product
void cg_shifted(const LinearOp& op, double sigma, const OneFormField& b, OneFormField& x,
                double rel_tol, int max_iter) {
  const MetricField& m = op.geom->metric();
  x.fill(0.0);
  OneFormField r = b;
  OneFormField p = r;
  OneFormField ap(b.grid());
  double rr = l2_inner(r, r, m);
  const double target = rel_tol * std::sqrt(rr);
  if (!(std::sqrt(rr) > 0.0)) return;
  for (int it = 0; it < max_iter; ++it) {
    op.apply_into(p, ap);
    if (sigma != 0.0) axpy(ap, sigma, p);
    const double pap = l2_inner(p, ap, m);
    if (!(pap > 0.0)) break;
    const double alpha = rr / pap;
    axpy(x, alpha, p);
    axpy(r, -alpha, ap);
    const double rr2 = l2_inner(r, r, m);
    if (std::sqrt(rr2) <= target) break;
    const double beta = rr2 / rr;
    rr = rr2;
    // p = r + beta p
    double* pd = p.raw().data();
    const double* rd = r.raw().data();
    for (std::size_t i = 0; i < p.raw().size(); ++i) pd[i] = rd[i] + beta * pd[i];
  }
}

}  // namespace

double estimate_lambda_max(const LinearOp& op, std::uint64_t seed, int iters) {
  const MetricField& m = op.geom->metric();
  Rng rng(seed);
  OneFormField v = white_noise_oneform(op.geom->grid(), rng);
  OneFormField w(v.grid());
  double lam = 1.0;
  for (int i = 0; i < iters; ++i) {
    op.apply_into(v, w);
    lam = l2_norm(w, m);
    if (!(lam > 0.0)) return 0.0;
    std::swap(v, w);
    scale(v, 1.0 / lam);
  }
  return lam;
}

std::vector<OneFormField> kernel_basis(const LinearOp& op, const KernelOptions& opts,
                                       KernelStats* stats_out) {
  const Geometry& geo = *op.geom;
  const MetricField& m = geo.metric();
  const Grid& gr = geo.grid();
  const int n = gr.n;
  const int max_dim = opts.max_dim > 0 ? opts.max_dim : n + 2;
  const int block_size = std::max(opts.probes > 0 ? opts.probes : std::max(max_dim, n + 2),
                                  n + 1);

  KernelStats st;
  st.lambda_max = estimate_lambda_max(op, opts.seed ^ 0x9e3779b9ULL);
  st.threshold = opts.eig_tol * st.lambda_max;

  // candidates g(e_a, .) first, then seeded random probes
  std::vector<OneFormField> block;
  for (int a = 0; a < n && (int)block.size() < block_size; ++a) {
    OneFormField v(gr);
    for (int i = 0; i < n; ++i) {
      const double* gc = m.g().comp(sym_index(i, a, n));
      double* vd = v.comp(i);
      for (std::size_t p = 0; p < gr.points; ++p) vd[p] = gc[p];
    }
    block.push_back(std::move(v));
  }
  Rng rng(opts.seed);
  while ((int)block.size() < block_size) block.push_back(white_noise_oneform(gr, rng));

  const double sigma = std::max(1e-3 * st.lambda_max, 10.0 * st.threshold);
  const int inner_max = 4000;
  int accepted_prev = -1;
  std::vector<OneFormField> rot;  // rotated Ritz block
  for (int outer = 0; outer < opts.max_outer; ++outer) {
    st.outer_iterations = outer + 1;
    // inverse-power step
    std::vector<OneFormField> W;
    W.reserve(block.size());
    for (const auto& v : block) {
      OneFormField w(gr);
      cg_shifted(op, sigma, v, w, 1e-3, inner_max);
      W.push_back(std::move(w));
    }
    // modified Gram-Schmidt in the weighted inner product
    std::vector<OneFormField> V;
    for (auto& w : W) {
      for (const auto& b : V) axpy(w, -l2_inner(b, w, m), b);
      const double nn = l2_norm(w, m);
      if (nn > 1e-280) {
        scale(w, 1.0 / nn);
        V.push_back(std::move(w));
      }
    }
    const int k = (int)V.size();
    if (k == 0) break;
    // Rayleigh-Ritz
    std::vector<OneFormField> AV;
    AV.reserve(k);
    for (const auto& v : V) AV.push_back(op.apply(v));
    std::vector<double> B(k * k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) B[i * k + j] = l2_inner(V[i], AV[j], m);
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) {
        const double s = 0.5 * (B[i * k + j] + B[j * k + i]);
        B[i * k + j] = s;
        B[j * k + i] = s;
      }
    std::vector<double> evals, evecs;
    jacobi_eigh(B, k, evals, evecs);
    rot.clear();
    for (int j = 0; j < k; ++j) {
      OneFormField v(gr);
      for (int i = 0; i < k; ++i) axpy(v, evecs[i * k + j], V[i]);
      rot.push_back(std::move(v));
    }
    st.ritz = evals;
    int acc = 0;
    for (double e : evals)
      if (e <= st.threshold) ++acc;
    block = std::move(rot);
    if (acc == accepted_prev && outer >= 1) {
      st.converged = true;
      break;
    }
    accepted_prev = acc;
  }

  int dim = 0;
  for (double e : st.ritz)
    if (e <= st.threshold) ++dim;
  dim = std::min(dim, max_dim);
  std::vector<OneFormField> basis;
  for (int i = 0; i < dim; ++i) basis.push_back(std::move(block[i]));
  // re-orthonormalize the returned set
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) axpy(basis[i], -l2_inner(basis[j], basis[i], m), basis[j]);
    const double nn = l2_norm(basis[i], m);
    if (nn > 0.0) scale(basis[i], 1.0 / nn);
  }
  if (stats_out) *stats_out = st;
  return basis;
}

std::pair<OneFormField, SolveStats> solve_spsd(const LinearOp& op, const OneFormField& rhs,
                                               const SolveOptions& opts,
                                               std::span<const OneFormField> kernel,
                                               const OneFormField* x0) {
  const Geometry& geo = *op.geom;
  const MetricField& m = geo.metric();
  const Grid& gr = geo.grid();
  SolveStats st;
  st.kernel_dim_deflated = opts.deflate_kernel ? (int)kernel.size() : 0;

  OneFormField b = rhs;
  if (opts.deflate_kernel) {
    project_out(b, kernel, m);
  } else if (!kernel.empty()) {
    OneFormField tmp = rhs;
    project_out(tmp, kernel, m);
    const double removed2 = std::max(l2_inner(rhs, rhs, m) - l2_inner(tmp, tmp, m), 0.0);
    const double nrhs = l2_norm(rhs, m);
    if (nrhs > 0.0 && std::sqrt(removed2) > 1e-6 * nrhs)
      throw InconsistentRhsError("rhs has a kernel component above 1e-6 relative and deflation is disabled");
  }

  const double nb = l2_norm(b, m);
  OneFormField x(gr);
  if (x0) {
    x = *x0;
    if (opts.deflate_kernel) project_out(x, kernel, m);
  }
  if (!(nb > 0.0)) {
    st.converged = true;
    return {std::move(x), st};
  }

  const int max_iter = opts.max_iter > 0
                           ? opts.max_iter
                           : (int)(20.0 * std::sqrt((double)gr.points));

  // optional pointwise metric-Jacobi preconditioner
  std::vector<double> jac;
  if (opts.preconditioner == SolveOptions::Precond::diagonal) {
    const int n = gr.n;
    jac.resize((std::size_t)n * gr.points);
    for (int c = 0; c < n; ++c) {
      const double* gic = m.g_inv().comp(sym_index(c, c, n));
      for (std::size_t p = 0; p < gr.points; ++p)
        jac[(std::size_t)c * gr.points + p] = 1.0 / (m.weight(p) * gic[p]);
    }
  }
  auto precond = [&](const OneFormField& r, OneFormField& z) {
    if (jac.empty()) {
      z = r;
      return;
    }
    const double* rd = r.raw().data();
    double* zd = z.raw().data();
    for (std::size_t i = 0; i < r.raw().size(); ++i) zd[i] = jac[i] * rd[i];
  };

  OneFormField r(gr), ap(gr), z(gr);
  op.apply_into(x, ap);
  for (std::size_t i = 0; i < r.raw().size(); ++i) r.raw()[i] = b.raw()[i] - ap.raw()[i];
  if (opts.deflate_kernel) project_out(r, kernel, m);
  precond(r, z);
  OneFormField p = z;
  double rz = l2_inner(r, z, m);
  double rn = l2_norm(r, m);
  st.final_rel_residual = rn / nb;
  if (st.final_rel_residual <= opts.rel_tol) {
    st.converged = true;
    return {std::move(x), st};
  }
  for (int it = 0; it < max_iter; ++it) {
    op.apply_into(p, ap);
    if (opts.deflate_kernel) project_out(ap, kernel, m);
    const double pap = l2_inner(p, ap, m);
    if (!(pap > 0.0)) break;
    const double alpha = rz / pap;
    axpy(x, alpha, p);
    axpy(r, -alpha, ap);
    st.iterations = it + 1;
    rn = l2_norm(r, m);
    st.final_rel_residual = rn / nb;
    if (st.final_rel_residual <= opts.rel_tol) {
      st.converged = true;
      break;
    }
    precond(r, z);
    const double rz2 = l2_inner(r, z, m);
    const double beta = rz2 / rz;
    rz = rz2;
    double* pd = p.raw().data();
    const double* zd = z.raw().data();
    for (std::size_t i = 0; i < p.raw().size(); ++i) pd[i] = zd[i] + beta * pd[i];
  }
  if (opts.deflate_kernel) project_out(x, kernel, m);
  return {std::move(x), st};
}

}  // namespace tsplit
