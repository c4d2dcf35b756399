#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tensorsplit/tensor_ops.hpp"

namespace tsplit {

struct SolveOptions {
  double rel_tol = 1e-10;
  int max_iter = 0;  // 0: default 20*sqrt(points)
  bool deflate_kernel = true;
  enum class Precond { none, diagonal } preconditioner = Precond::none;
};

struct SolveStats {
  int iterations = 0;
  double final_rel_residual = 0.0;
  int kernel_dim_deflated = 0;
  bool converged = false;
};

struct KernelOptions {
  int max_dim = 0;       // 0: default n+2
  double eig_tol = 1e-8; // relative to the estimated largest eigenvalue
  int probes = 0;        // block size; 0: default max(max_dim, n+2)
  int max_outer = 24;
  std::uint64_t seed = 0;
};

struct KernelStats {
  std::vector<double> ritz;  // all block Ritz values, ascending
  double lambda_max = 0.0;
  double threshold = 0.0;
  int outer_iterations = 0;
  bool converged = false;
};

struct InconsistentRhsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Orthonormal basis (in l2_inner) of the near-null space of a self-adjoint
/// PSD operator: all eigenvectors with eigenvalue <= eig_tol * lambda_max.
/// Block shifted inverse-power iteration with Rayleigh-Ritz extraction; the
/// block holds the n candidate one-forms g(e_a, .) followed by seeded random
/// probes. Deterministic given the seed.
std::vector<OneFormField> kernel_basis(const LinearOp& op, const KernelOptions& opts,
                                       KernelStats* stats = nullptr);

/// Conjugate gradients in the weighted L2 inner product for a self-adjoint
/// PSD system. If opts.deflate_kernel, rhs/iterates are projected against the
/// supplied kernel span and the solution is the kernel-orthogonal
/// representative. With deflation off and a nonempty kernel, a kernel
/// component above 1e-6 * |rhs| raises InconsistentRhsError.
std::pair<OneFormField, SolveStats> solve_spsd(const LinearOp& op, const OneFormField& rhs,
                                               const SolveOptions& opts,
                                               std::span<const OneFormField> kernel = {},
                                               const OneFormField* x0 = nullptr);

/// 20 power iterations from a seeded probe.
double estimate_lambda_max(const LinearOp& op, std::uint64_t seed = 99, int iters = 20);

}  // namespace tsplit
