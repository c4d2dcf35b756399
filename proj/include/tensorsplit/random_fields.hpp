#pragma once

#include <cstdint>

#include "tensorsplit/field.hpp"

namespace tsplit {

/// Deterministic RNG for probe vectors and random smooth test fields.
/// Box-Muller over mt19937_64 so the stream is identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : s_(seed) {}
  double uniform();   // [0,1)
  double normal();

 private:
  std::uint64_t next();
  std::uint64_t s_;
  // xoshiro-style splitmix; small and fully specified
};

/// Random smooth periodic field: sum over integer modes |k|_inf <= kmax of
/// amp * cos(2 pi k.x/L + phase), amp ~ N(0,1)/(1+|k|^2)^damp.
ScalarField random_smooth_scalar(const Grid& g, Rng& rng, int kmax = 2, int damp = 2);
OneFormField random_smooth_oneform(const Grid& g, Rng& rng, int kmax = 2, int damp = 2);
SymTensorField random_smooth_sym(const Grid& g, Rng& rng, int kmax = 2, int damp = 2);

/// White-noise one-form (used as solver probes).
OneFormField white_noise_oneform(const Grid& g, Rng& rng);

}  // namespace tsplit
