#pragma once

#include <vector>

#include "tensorsplit/field.hpp"
#include "tensorsplit/metric.hpp"
#include "tensorsplit/stencil.hpp"

namespace tsplit {

/// Weighted L2 inner product: full g-contraction for scalars, one-forms and
/// symmetric tensors; strict-upper (form) contraction for 2-forms. The
/// per-point kernel is algebraically symmetric in (a, b) and the point
/// reduction is sequential, so <a,b> == <b,a> bitwise.
double l2_inner(const Field& a, const Field& b, const MetricField& m);
double l2_norm(const Field& a, const MetricField& m);

/// Pointwise sum_i xi^i D_i f with the plain central stencil of the given order.
ScalarField directional_derivative(const VectorField& xi, const ScalarField& f, int order);

/// Christoffel symbols (structurally symmetric in the lower pair), Ricci
/// tensor and scalar curvature of a sampled metric, order-h^order accurate.
struct CurvatureBundle {
  // christoffel[k][sym_index(i,j)] -> component array over the grid
  std::vector<std::vector<std::vector<double>>> christoffel;
  SymTensorField ricci;
  ScalarField scalar;
};

CurvatureBundle curvature(const MetricField& metric, int order);

/// Metric + stencil order + cached Christoffels/curvature: the shared context
/// for every differential operator.
class Geometry {
 public:
  Geometry(MetricField metric, int order);

  const MetricField& metric() const { return metric_; }
  const Grid& grid() const { return metric_.grid(); }
  int n() const { return metric_.n(); }
  int order() const { return order_; }
  const CurvatureBundle& curv() const { return curv_; }

  const StencilTaps& d1(int axis) const { return d1_[axis]; }
  const StencilTaps& d1_t(int axis) const { return d1t_[axis]; }
  const StencilTaps& d1_stab(int axis) const { return d1s_[axis]; }
  const StencilTaps& d1_stab_t(int axis) const { return d1st_[axis]; }
  const StencilTaps& d2(int axis) const { return d2_[axis]; }

  double volume() const { return volume_; }

 private:
  MetricField metric_;
  int order_;
  CurvatureBundle curv_;
  StencilTaps d1_[3], d1t_[3], d1s_[3], d1st_[3], d2_[3];
  double volume_ = 0.0;
};

/// Volume-weighted mean and standard deviation of a scalar field.
struct ScalarStats {
  double mean = 0.0;
  double stddev = 0.0;
  double sup = 0.0;
};
ScalarStats scalar_stats(const ScalarField& f, const MetricField& m);

}  // namespace tsplit
