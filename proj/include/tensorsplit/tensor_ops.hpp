#pragma once

#include <functional>
#include <string>
#include <utility>

#include "tensorsplit/geometry.hpp"

namespace tsplit {

/// delta* theta = (1/2) L_{theta#} g, the symmetrized covariant derivative.
/// Discretely: stabilized central differences plus Christoffel terms, with the
/// pure-trace part adjusted so that trace_g(delta* theta) = -codifferential(theta)
/// holds pointwise to round-off.
SymTensorField killing_op(const Geometry& geo, const OneFormField& theta);

/// Exact discrete L2-adjoint of killing_op (stencil transposes and
/// metric-weight conjugation). Continuum meaning: delta phi = -div phi,
/// and delta(Ric) = -(1/2) ds.
OneFormField divergence_sym(const Geometry& geo, const SymTensorField& phi);

ScalarField trace_g(const SymTensorField& phi, const MetricField& m);
std::pair<ScalarField, SymTensorField> trace_and_traceless(const SymTensorField& phi,
                                                           const MetricField& m);

OneFormField exterior_derivative(const Geometry& geo, const ScalarField& f);
TwoFormField exterior_derivative(const Geometry& geo, const OneFormField& theta);

/// Exact adjoint of d on functions; continuum delta theta = -div(theta#).
ScalarField codifferential(const Geometry& geo, const OneFormField& theta);
/// Exact adjoint of d on one-forms under the strict-upper 2-form product.
OneFormField codifferential(const Geometry& geo, const TwoFormField& omega);

/// S theta = delta* theta + (1/n)(delta theta) g; pointwise traceless.
SymTensorField cauchy_ahlfors(const Geometry& geo, const OneFormField& theta);
/// S* omega = delta omega + (1/n) d(trace_g omega); exact adjoint of S.
OneFormField cauchy_ahlfors_adjoint(const Geometry& geo, const SymTensorField& omega);

OneFormField delta_delta_star(const Geometry& geo, const OneFormField& theta);
OneFormField ahlfors_laplacian(const Geometry& geo, const OneFormField& theta);
/// Sampson Laplacian: 2 delta delta* - d delta.
OneFormField sampson_laplacian(const Geometry& geo, const OneFormField& theta);

/// Ric(theta#, .) as a one-form, from the cached curvature.
OneFormField ricci_contract(const Geometry& geo, const OneFormField& theta);

/// S*S theta - [ (1/2) delta(d theta) + ((n-1)/n) d(delta theta) - Ric(theta#,.) ].
OneFormField weitzenboeck_residual(const Geometry& geo, const OneFormField& theta);

VectorField sharp(const OneFormField& theta, const MetricField& m);
OneFormField flat(const VectorField& xi, const MetricField& m);

/// Matrix-free self-adjoint operator on one-forms.
struct LinearOp {
  std::function<void(const OneFormField&, OneFormField&)> apply_into;
  const Geometry* geom = nullptr;
  bool self_adjoint_psd = false;
  std::string kernel_hint;

  OneFormField apply(const OneFormField& x) const {
    OneFormField y(x.grid());
    apply_into(x, y);
    return y;
  }
};

LinearOp make_delta_delta_star_op(const Geometry& geo);
LinearOp make_ahlfors_op(const Geometry& geo);

// Allocation-free variants used by the solver hot path.
void delta_delta_star_into(const Geometry& geo, const OneFormField& x, OneFormField& out);
void ahlfors_into(const Geometry& geo, const OneFormField& x, OneFormField& out);

}  // namespace tsplit
