#pragma once

// shared helpers for the unit suites

#include <cmath>

#include "tensorsplit/geometry.hpp"
#include "tensorsplit/random_fields.hpp"
#include "tensorsplit/tensor_ops.hpp"

namespace ts_test {

inline tsplit::Grid grid2(int N, double L = 1.0) {
  const int dims[2] = {N, N};
  const double len[2] = {L, L};
  return tsplit::make_grid(2, dims, len);
}

inline tsplit::Grid grid3(int N, double L = 1.0) {
  const int dims[3] = {N, N, N};
  const double len[3] = {L, L, L};
  return tsplit::make_grid(3, dims, len);
}

inline tsplit::ScalarSpec sine_mode(int dim, double amp, std::initializer_list<int> k,
                                    std::initializer_list<double> phase = {}) {
  tsplit::ScalarSpec s;
  tsplit::ScalarMode m;
  m.amp = amp;
  int i = 0;
  for (int v : k) m.k[i++] = v;
  i = 0;
  for (double v : phase) m.phase[i++] = v;
  (void)dim;
  s.modes.push_back(m);
  return s;
}

// the u = 0.1 sin(2 pi x) sin(2 pi y) conformal test metric
inline tsplit::MetricSpec conformal2(double amp = 0.1) {
  return tsplit::MetricSpec::conformal(2, sine_mode(2, amp, {1, 1}));
}

inline tsplit::MetricSpec diagonal_periodic2() {
  tsplit::MetricSpec s;
  s.family = tsplit::MetricSpec::Family::diagonal_periodic;
  s.dim = 2;
  s.dp_alpha = {0.3, 0.2};
  s.dp_wave = {{{0, 1, 0}}, {{1, 0, 0}}};
  s.dp_phase = {0.3, 1.1};
  return s;
}

inline tsplit::MetricSpec conformal3(double amp = 0.1) {
  return tsplit::MetricSpec::conformal(3, sine_mode(3, amp, {1, 1, 1}));
}

// analytic scalar curvature of exp(2u) delta on T^2: s = -2 e^{-2u} lap(u)
inline double conformal2_s_exact(double x, double y, double amp = 0.1) {
  const double tp = 2.0 * M_PI;
  const double u = amp * std::sin(tp * x) * std::sin(tp * y);
  const double lap = -2.0 * tp * tp * u;
  return -2.0 * std::exp(-2.0 * u) * lap;
}

}  // namespace ts_test
