#pragma once

#include <array>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "tensorsplit/field.hpp"
#include "tensorsplit/grid.hpp"

namespace tsplit {

struct IndefiniteMetricError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One analytic Fourier term: amp * prod_{a : k_a != 0} sin(2*pi*k_a*x_a/L_a + phase_a).
/// A term with all k_a = 0 is the constant amp.
struct ScalarMode {
  double amp = 0.0;
  std::array<int, 3> k{0, 0, 0};
  std::array<double, 3> phase{0.0, 0.0, 0.0};
};

/// Smooth periodic scalar function given in closed form, evaluable with two
/// derivatives at any point of the torus (not only grid points).
struct ScalarSpec {
  std::vector<ScalarMode> modes;
  double value(const double* x, const double* lengths, int dim) const;
  double d1(int c, const double* x, const double* lengths, int dim) const;
  double d2(int c1, int c2, const double* x, const double* lengths, int dim) const;
  bool empty() const { return modes.empty(); }
};

/// Analytic metric catalog. All families evaluate g, dg, d2g in closed form.
struct MetricSpec {
  enum class Family { flat_diagonal, conformal_flat, diagonal_periodic, product };

  Family family = Family::flat_diagonal;
  int dim = 2;

  std::vector<double> diag;  // flat_diagonal entries (default 1)

  ScalarSpec conf_u;  // conformal exponent: g = exp(2u) * delta

  // diagonal_periodic: g_aa = 1 + alpha_a * sin(2*pi*(wave_a . x / L) + phase_a)
  std::vector<double> dp_alpha;
  std::vector<std::array<int, 3>> dp_wave;
  std::vector<double> dp_phase;

  struct Factor {
    std::shared_ptr<MetricSpec> spec;
    std::vector<int> axes;  // global axes this factor occupies
  };
  std::vector<Factor> factors;  // product family

  /// g at x (row-major dim x dim).
  void eval(const double* x, const double* lengths, double* g) const;
  /// dg/dx_c at x.
  void eval_d1(const double* x, const double* lengths, int c, double* dg) const;
  /// d2 g / dx_c1 dx_c2.
  void eval_d2(const double* x, const double* lengths, int c1, int c2, double* d2g) const;

  static MetricSpec flat(int dim);
  static MetricSpec conformal(int dim, const ScalarSpec& u);
};

/// Sampled positive-definite metric with cached inverse, determinant and
/// volume weight.
class MetricField {
 public:
  MetricField() = default;
  /// Takes ownership of the sampled components; computes caches and verifies
  /// pointwise positive-definiteness (throws IndefiniteMetricError).
  explicit MetricField(SymTensorField g);

  const Grid& grid() const { return g_.grid(); }
  int n() const { return g_.grid().n; }
  const SymTensorField& g() const { return g_; }
  const SymTensorField& g_inv() const { return g_inv_; }
  const ScalarField& det() const { return det_; }
  const ScalarField& sqrt_det() const { return sqrt_det_; }

  /// L2 volume weight at point p: sqrt(det g) * prod(h_a).
  double weight(std::size_t p) const { return sqrt_det_.values()[p] * cell_; }

  void mat(std::size_t p, double* m) const;      // full n x n of g
  void mat_inv(std::size_t p, double* m) const;  // full n x n of g^{-1}

 private:
  SymTensorField g_, g_inv_;
  ScalarField det_, sqrt_det_;
  double cell_ = 0.0;
};

MetricField sample_metric(const MetricSpec& spec, const Grid& grid);

}  // namespace tsplit
