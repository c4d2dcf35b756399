#pragma once

#include <memory>
#include <optional>

#include "tensorsplit/decomposition.hpp"

namespace tsplit {

/// Graph hypersurface x -> (x, F(x)) in the flat ambient T^n x R:
/// induced metric g_ij = delta_ij + F_i F_j, normal scale W = sqrt(1+|dF|^2),
/// second fundamental form phi_ij = Hess_ij F / W, shape operator A = g^{-1} phi,
/// mean curvature H = (1/n) trace_g phi.
struct GraphHypersurface {
  ScalarField height;
  ScalarField w;  // sqrt(1 + |dF|^2)
  SymTensorField second_form;
  std::vector<std::vector<double>> shape_operator;  // A[i][j] component arrays (rank-(1,1))
  ScalarField mean_curvature;
  std::shared_ptr<Geometry> geom;  // induced metric geometry
};

GraphHypersurface graph_hypersurface(const ScalarField& height, int order);

/// | delta phi + d(trace_g phi) | / (1 + |d trace_g phi|): the trace-derived
/// Codazzi consequence for flat ambient space; decays at stencil order.
double codazzi_divergence_check(const GraphHypersurface& hyp);

struct HypersurfaceReport {
  double mean_curvature_stddev = 0.0;
  double mean_curvature_sup = 0.0;
  double codazzi_residual = 0.0;
  // Berger-Ebin side
  double killing_residual = 0.0;
  double lie_trace_integral_be = 0.0;     // int L_xi trace_g(phi) dv, xi from BE theta
  double dstar_theta_norm2 = 0.0;
  double be_identity_residual = 0.0;      // |lie + |d* theta|^2|  (derived constant 1)
  double be_identity_as_printed = 0.0;    // |lie + 2 |d* theta|^2| (reference)
  // York side
  double lie_trace_integral_york = 0.0;
  double s_theta_norm2 = 0.0;
  double york_identity_residual = 0.0;    // |lie_y + (n/(n-1)) |S theta|^2|
  double theorem4_residual = 0.0;         // |phi - mean(H) g - phi_tt| / (1+|phi|) when H const
  double sst_dh_ratio = 0.0;              // fitted c in S*S theta ~ c dH
  double sst_dh_ratio_derived = 0.0;      // -(n-1)
  double sst_dh_align = 0.0;              // residual of the parallelism fit, relative
  bool flag_constant_h = false;
  bool flag_killing = false;
  bool flag_zero_integral = false;
  double verdict_tol = 1e-6;
};

HypersurfaceReport hypersurface_decomposition_report(const GraphHypersurface& hyp,
                                                     const SolveOptions& sopts = {},
                                                     const KernelOptions& kopts = {},
                                                     double verdict_tol = 1e-6);

/// Smooth torus map f(x) = A x + p(x), integer winding matrix A (m x n),
/// periodic perturbation components p, analytic target metric.
struct TorusMap {
  int m = 2;                                   // target dimension
  std::vector<std::vector<int>> winding;       // m x n
  std::vector<ScalarField> perturbation;       // m sampled components (may be zero fields)
  MetricSpec target;                           // analytic, dim m
  std::array<double, 3> target_lengths{1.0, 1.0, 1.0};
};

/// g*_ij = (f_*)^a_i (f_*)^b_j gbar_ab(f(x)).
SymTensorField pullback_metric(const Geometry& src, const TorusMap& map);
/// tau^a = g^{ij} (d_i d_j f^a - Gamma^k_ij d_k f^a + Gbar^a_bc d_i f^b d_j f^c).
std::vector<ScalarField> tension_field(const Geometry& src, const TorusMap& map);
/// E(f) = 1/2 int trace_g(f* gbar) dv.
double map_energy(const Geometry& src, const TorusMap& map);

struct MapReport {
  double energy = 0.0;
  double tension_norm = 0.0;        // sqrt(int gbar(tau,tau) dv)
  double lemma2_residual = 0.0;     // |delta(g* - (1/2) trace g* . g)| relative
  double eq72_residual = 0.0;       // both sides of the balance equation
  double min_jacobian_gram_det = 0.0;  // rank check: min det(J J^T) over points
  // Theorem 5 triple
  bool flag_harmonic = false;
  bool flag_iht = false;            // infinitesimal harmonic transformation
  bool flag_affine_divergence = false;
  double sampson_theta_residual = 0.0;
  double div_minus_trace_stddev = 0.0;
  double div_minus_trace_mean = 0.0;   // the constant C of div xi = trace_g g* + C
  bool two_of_three_consistent = false;
  // Corollary 7
  double half_trace_stddev = 0.0;
  double energy_constant = 0.0;        // E / Vol
  double energy_identity_residual = 0.0;  // |E - mean(trace g*/2) Vol|
  double verdict_tol = 1e-6;
};

MapReport harmonic_balance_check(const Geometry& src, const TorusMap& map,
                                 const SolveOptions& sopts = {}, const KernelOptions& kopts = {},
                                 double verdict_tol = 1e-6);

}  // namespace tsplit
