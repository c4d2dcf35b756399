#include "tensorsplit/random_fields.hpp"

#include <cmath>

namespace tsplit {

std::uint64_t Rng::next() {
  // splitmix64
  std::uint64_t z = (s_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  // Box-Muller; discard the second variate to keep the stream simple
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

namespace {

void fill_smooth(const Grid& g, Rng& rng, int kmax, int damp, double* out) {
  const int n = g.n;
  int k[3] = {0, 0, 0};
  struct Mode {
    int k[3];
    double amp, phase;
  };
  std::vector<Mode> modes;
  const int lo = -kmax, hi = kmax;
  // fixed enumeration order so the field is a deterministic function of the
  // rng state, independent of grid resolution
  for (k[0] = lo; k[0] <= hi; ++k[0])
    for (k[1] = lo; k[1] <= hi; ++k[1]) {
      if (n == 2) {
        double k2 = k[0] * k[0] + k[1] * k[1];
        double a = rng.normal() / std::pow(1.0 + k2, damp);
        modes.push_back({{k[0], k[1], 0}, a, 2.0 * M_PI * rng.uniform()});
      } else {
        for (k[2] = lo; k[2] <= hi; ++k[2]) {
          double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
          double a = rng.normal() / std::pow(1.0 + k2, damp);
          modes.push_back({{k[0], k[1], k[2]}, a, 2.0 * M_PI * rng.uniform()});
        }
      }
    }
  double x[3];
  for (std::size_t p = 0; p < g.points; ++p) {
    g.coords(p, x);
    double v = 0.0;
    for (const auto& m : modes) {
      double arg = m.phase;
      for (int a = 0; a < n; ++a) arg += 2.0 * M_PI * m.k[a] * x[a] / g.lengths[a];
      v += m.amp * std::cos(arg);
    }
    out[p] = v;
  }
}

}  // namespace

ScalarField random_smooth_scalar(const Grid& g, Rng& rng, int kmax, int damp) {
  ScalarField f(g);
  fill_smooth(g, rng, kmax, damp, f.values());
  return f;
}

OneFormField random_smooth_oneform(const Grid& g, Rng& rng, int kmax, int damp) {
  OneFormField f(g);
  for (int c = 0; c < f.ncomp(); ++c) fill_smooth(g, rng, kmax, damp, f.comp(c));
  return f;
}

SymTensorField random_smooth_sym(const Grid& g, Rng& rng, int kmax, int damp) {
  SymTensorField f(g);
  for (int c = 0; c < f.ncomp(); ++c) fill_smooth(g, rng, kmax, damp, f.comp(c));
  return f;
}

OneFormField white_noise_oneform(const Grid& g, Rng& rng) {
  OneFormField f(g);
  for (int c = 0; c < f.ncomp(); ++c) {
    double* v = f.comp(c);
    for (std::size_t p = 0; p < g.points; ++p) v[p] = rng.normal();
  }
  return f;
}

}  // namespace tsplit
