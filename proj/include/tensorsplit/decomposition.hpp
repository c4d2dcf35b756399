#pragma once

#include <map>
#include <string>

#include "tensorsplit/solver.hpp"

namespace tsplit {

/// Inner products between parts and constraint norms, all recomputable from
/// the stored fields. Values are raw; the relative forms divide by the input
/// norm as indicated by the key name.
struct OrthoDiagnostics {
  std::map<std::string, double> values;
  double get(const std::string& k) const { return values.at(k); }
};

/// phi = delta* theta + phi0 with phi0 the subtractive remainder, so the
/// reconstruction is exact by construction; theta is the kernel-orthogonal
/// representative.
struct BergerEbinResult {
  OneFormField theta;
  SymTensorField phi0;
  SolveStats stats;
  KernelStats kernel_stats;
  OrthoDiagnostics diagnostics;
};

BergerEbinResult berger_ebin(const Geometry& geo, const SymTensorField& phi,
                             const SolveOptions& sopts = {}, const KernelOptions& kopts = {});

/// phi = delta* theta + lambda g + phi_tt (subtractive remainder);
/// lambda = (trace_g phi + delta theta)/n pointwise.
struct YorkResult {
  OneFormField theta;
  ScalarField lambda;
  SymTensorField phi_tt;
  SolveStats stats;
  KernelStats kernel_stats;
  OrthoDiagnostics diagnostics;
  bool outside_dimension_hypothesis = false;  // n == 2 runs
};

YorkResult york(const Geometry& geo, const SymTensorField& phi, const SolveOptions& sopts = {},
                const KernelOptions& kopts = {});

OrthoDiagnostics berger_ebin_orthogonality(const Geometry& geo, const SymTensorField& phi,
                                           const BergerEbinResult& r);
OrthoDiagnostics york_orthogonality(const Geometry& geo, const SymTensorField& phi,
                                    const YorkResult& r);

}  // namespace tsplit
