#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>

namespace tsplit {

/// Uniform periodic lattice on the flat n-torus (n = 2 or 3).
/// Point (i0,...,i_{n-1}) sits at x_a = i_a * spacing[a]; storage is
/// row-major with the last axis fastest.
struct Grid {
  int n = 0;
  std::array<int, 3> dims{1, 1, 1};
  std::array<double, 3> lengths{0.0, 0.0, 0.0};
  std::array<double, 3> spacing{0.0, 0.0, 0.0};
  std::size_t points = 0;

  std::size_t index(int i, int j, int k = 0) const {
    if (n == 2) return static_cast<std::size_t>(i) * dims[1] + j;
    return (static_cast<std::size_t>(i) * dims[1] + j) * dims[2] + k;
  }

  /// Coordinates of grid point p (p = flat index).
  void coords(std::size_t p, double* x) const {
    if (n == 2) {
      x[0] = spacing[0] * static_cast<double>(p / dims[1]);
      x[1] = spacing[1] * static_cast<double>(p % dims[1]);
    } else {
      std::size_t k = p % dims[2];
      std::size_t rest = p / dims[2];
      x[0] = spacing[0] * static_cast<double>(rest / dims[1]);
      x[1] = spacing[1] * static_cast<double>(rest % dims[1]);
      x[2] = spacing[2] * static_cast<double>(k);
    }
  }

  double cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < n; ++a) v *= spacing[a];
    return v;
  }

  bool operator==(const Grid& o) const {
    return n == o.n && dims == o.dims && lengths == o.lengths;
  }
};

/// Build a grid; throws std::invalid_argument on out-of-range dimension,
/// odd or too-small axis, or nonpositive length.
Grid make_grid(int n, std::span<const int> dims, std::span<const double> lengths);

inline void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw std::invalid_argument("grid mismatch");
}

}  // namespace tsplit
