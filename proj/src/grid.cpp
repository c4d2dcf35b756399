#include "tensorsplit/grid.hpp"

#include <string>

namespace tsplit {

Grid make_grid(int n, std::span<const int> dims, std::span<const double> lengths) {
  if (n != 2 && n != 3)
    throw std::invalid_argument("dimension out of range: n must be 2 or 3, got " + std::to_string(n));
  if (static_cast<int>(dims.size()) != n || static_cast<int>(lengths.size()) != n)
    throw std::invalid_argument("dims/lengths size must equal n");
  Grid g;
  g.n = n;
  g.points = 1;
  for (int a = 0; a < n; ++a) {
    if (dims[a] < 8 || dims[a] % 2 != 0)
      throw std::invalid_argument("axis " + std::to_string(a) + " must be even and >= 8, got " +
                                  std::to_string(dims[a]));
    if (!(lengths[a] > 0.0))
      throw std::invalid_argument("axis " + std::to_string(a) + " length must be positive");
    g.dims[a] = dims[a];
    g.lengths[a] = lengths[a];
    g.spacing[a] = lengths[a] / dims[a];
    g.points *= static_cast<std::size_t>(dims[a]);
  }
  return g;
}

}  // namespace tsplit
