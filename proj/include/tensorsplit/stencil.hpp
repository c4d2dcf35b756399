#pragma once

#include <array>

#include "tensorsplit/grid.hpp"

namespace tsplit {

/// Periodic 1D stencil with offsets -radius..radius.
struct StencilTaps {
  int radius = 0;
  std::array<double, 7> c{};  // c[m + radius]

  double& at(int off) { return c[off + radius]; }
  double at(int off) const { return c[off + radius]; }
};

/// Central first derivative, truncation O(h^order), order in {2,4}.
StencilTaps d1_taps(int order, double h);
/// Central second derivative, truncation O(h^order).
StencilTaps d2_taps(int order, double h);
/// kappa * (sixth central difference); annihilates constants, O(h^6) on
/// smooth data, responds O(kappa) on per-axis alternating modes.
StencilTaps delta6_taps(double kappa);
StencilTaps add(const StencilTaps& a, const StencilTaps& b);
/// Euclidean transpose of the periodic stencil (reversed taps).
StencilTaps transpose(const StencilTaps& t);

/// out[p] = sum_m taps[m] * in[p + m e_axis] with periodic wraparound.
void apply_axis(const Grid& g, int axis, const StencilTaps& t, const double* in, double* out);
/// out += stencil(in)
void apply_axis_add(const Grid& g, int axis, const StencilTaps& t, const double* in, double* out);

}  // namespace tsplit
