#pragma once

#include "tensorsplit/decomposition.hpp"

namespace tsplit {

/// Residuals and verdicts for the Berger-Ebin split of the Ricci tensor:
/// constant scalar curvature <=> Killing theta# <=> vanishing Lie integral,
/// with the tested integral identity int L_xi s dv = -2 <d* theta, d* theta>.
struct Theorem1Report {
  double scalar_curvature_stddev = 0.0;
  double scalar_curvature_sup = 0.0;
  double killing_residual = 0.0;  // |d* theta| / |theta|, absolute if theta ~ 0
  double lie_integral = 0.0;      // int L_xi s dv
  double bianchi_residual = 0.0;  // |d Ric + ds/2| / (1 + |ds|)
  double identity_residual = 0.0; // |lie + 2 |d* theta|^2|
  double identity_scale = 0.0;    // 1 + |d* theta|^2
  double dstar_theta_norm2 = 0.0;
  bool flag_constant_s = false;
  bool flag_killing = false;
  bool flag_zero_integral = false;
  double verdict_tol = 1e-6;
};

std::pair<BergerEbinResult, Theorem1Report> ricci_berger_ebin(const Geometry& geo,
                                                              const SolveOptions& sopts = {},
                                                              const KernelOptions& kopts = {},
                                                              double verdict_tol = 1e-6);

/// York split of the Ricci tensor plus the derived identities:
/// S*S theta = -((n-2)/(2n)) ds, Delta_S theta = -(n-2) d lambda,
/// int L_xi s dv = -(2n/(n-2)) |S theta|^2 (n >= 3).
struct Theorem2Report {
  double s_stddev = 0.0;
  double s_sup = 0.0;
  double conformal_killing_residual = 0.0;  // |S theta| / |theta|, absolute if theta ~ 0
  double lie_integral = 0.0;
  double lambda_minus_s_over_n_sup = 0.0;
  double ahlfors_identity_residual = 0.0;   // |S*S theta + ((n-2)/(2n)) ds| / (1+|ds|)
  double ahlfors_identity_paper_residual = 0.0;  // with the printed (n-2)/n constant
  double sampson_identity_residual = 0.0;   // |Delta_S theta + (n-2) d lambda| / (1+|d lambda|)
  double einstein_residual = 0.0;           // |Ric - (s/n) g| / (1+|Ric|)
  double york_lie_identity_residual = 0.0;  // |lie + (2n/(n-2)) |S theta|^2| (n>=3)
  double s_theta_norm2 = 0.0;
  bool trivial_decomposition = false;
  bool flag_constant_s = false;
  bool flag_zero_integral = false;
  bool einstein_verdict = false;
  double verdict_tol = 1e-6;
};

std::pair<YorkResult, Theorem2Report> ricci_york(const Geometry& geo,
                                                 const SolveOptions& sopts = {},
                                                 const KernelOptions& kopts = {},
                                                 double verdict_tol = 1e-6);

/// Residuals of Delta_S theta = -(n-2) d lambda and the two proof steps
/// ds = -d(delta theta) + n d lambda and -ds = 2 dd* theta - 2 d lambda.
struct SampsonIdentity {
  double residual = 0.0;        // |Delta_S theta + (n-2) d lambda| / (1+|d lambda|)
  double step_4_10 = 0.0;       // |ds + d(delta theta) - n d lambda| / (1+|ds|)
  double step_4_11 = 0.0;       // |ds + 2 dd* theta - 2 d lambda| / (1+|ds|)
};
SampsonIdentity sampson_identity_check(const Geometry& geo, const YorkResult& yr);

/// Pointwise residual of Ric = (1/2) L_xi g + lambda g and the soliton
/// verdicts; fed with the York parts the residual equals phi_tt exactly.
struct SolitonReport {
  double residual_l2 = 0.0;
  double residual_sup = 0.0;
  double lambda_stddev = 0.0;
  double killing_residual = 0.0;       // |d* theta| relative
  double sampson_theta_residual = 0.0; // |Delta_S theta| / (1+|theta|)
  bool is_soliton = false;  // lambda constant within tol
  bool is_trivial = false;  // xi Killing within tol
  double verdict_tol = 1e-6;
};

SolitonReport soliton_residual(const Geometry& geo, const VectorField& xi,
                               const ScalarField& lambda, double verdict_tol = 1e-6);

}  // namespace tsplit
