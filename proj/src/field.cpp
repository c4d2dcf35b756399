#include "tensorsplit/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tsplit {

const char* kind_name(FieldKind k) {
  switch (k) {
    case FieldKind::scalar: return "scalar";
    case FieldKind::one_form: return "oneform";
    case FieldKind::vector: return "vector";
    case FieldKind::sym_tensor: return "symtensor";
    case FieldKind::two_form: return "twoform";
  }
  return "?";
}

FieldKind kind_from_name(const std::string& s) {
  if (s == "scalar") return FieldKind::scalar;
  if (s == "oneform") return FieldKind::one_form;
  if (s == "vector") return FieldKind::vector;
  if (s == "symtensor") return FieldKind::sym_tensor;
  if (s == "twoform") return FieldKind::two_form;
  throw std::invalid_argument("unknown field kind: " + s);
}

int ncomp_for(FieldKind k, int n) {
  switch (k) {
    case FieldKind::scalar: return 1;
    case FieldKind::one_form: return n;
    case FieldKind::vector: return n;
    case FieldKind::sym_tensor: return n * (n + 1) / 2;
    case FieldKind::two_form: return n * (n - 1) / 2;
  }
  return 0;
}

Field::Field(const Grid& grid, FieldKind kind)
    : grid_(grid), kind_(kind), ncomp_(ncomp_for(kind, grid.n)),
      data_(static_cast<std::size_t>(ncomp_) * grid.points, 0.0) {}

void Field::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

void require_same_kind(const Field& a, const Field& b) {
  if (a.kind() != b.kind()) throw std::invalid_argument("field kind mismatch");
}

void axpy(Field& y, double a, const Field& x) {
  require_same_kind(y, x);
  require_same_grid(y.grid(), x.grid());
  double* yd = y.raw().data();
  const double* xd = x.raw().data();
  const std::size_t m = y.raw().size();
  for (std::size_t i = 0; i < m; ++i) yd[i] += a * xd[i];
}

void scale(Field& y, double a) {
  for (double& v : y.raw()) v *= a;
}

double sup_norm(const Field& f) {
  double m = 0.0;
  for (double v : f.raw()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace tsplit
