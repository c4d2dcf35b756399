#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tensorsplit/grid.hpp"

namespace tsplit {

enum class FieldKind { scalar, one_form, vector, sym_tensor, two_form };

const char* kind_name(FieldKind k);
FieldKind kind_from_name(const std::string& s);
int ncomp_for(FieldKind k, int n);

/// Packed index of the (i,j) entry of a symmetric tensor, i <= j.
/// Order (0,0),(0,1),...,(0,n-1),(1,1),...,(n-1,n-1).
inline int sym_index(int i, int j, int n) {
  if (i > j) { int t = i; i = j; j = t; }
  return i * n - i * (i - 1) / 2 + (j - i);
}

/// Packed index of the strict-upper (i,j), i < j, of a 2-form.
inline int two_form_index(int i, int j, int n) {
  // (0,1),(0,2),...,(0,n-1),(1,2),...
  return i * (2 * n - i - 3) / 2 + j - 1;
}

/// Component-major field storage: ncomp arrays of grid.points doubles each.
class Field {
 public:
  Field() = default;
  Field(const Grid& grid, FieldKind kind);

  const Grid& grid() const { return grid_; }
  FieldKind kind() const { return kind_; }
  int ncomp() const { return ncomp_; }
  std::size_t points() const { return grid_.points; }

  double* comp(int c) { return data_.data() + static_cast<std::size_t>(c) * grid_.points; }
  const double* comp(int c) const { return data_.data() + static_cast<std::size_t>(c) * grid_.points; }
  std::span<double> comp_span(int c) { return {comp(c), grid_.points}; }
  std::span<const double> comp_span(int c) const { return {comp(c), grid_.points}; }

  std::vector<double>& raw() { return data_; }
  const std::vector<double>& raw() const { return data_; }

  void fill(double v);

 private:
  Grid grid_{};
  FieldKind kind_ = FieldKind::scalar;
  int ncomp_ = 0;
  std::vector<double> data_;
};

struct ScalarField : Field {
  ScalarField() = default;
  explicit ScalarField(const Grid& g) : Field(g, FieldKind::scalar) {}
  double* values() { return comp(0); }
  const double* values() const { return comp(0); }
};

struct OneFormField : Field {
  OneFormField() = default;
  explicit OneFormField(const Grid& g) : Field(g, FieldKind::one_form) {}
};

struct VectorField : Field {
  VectorField() = default;
  explicit VectorField(const Grid& g) : Field(g, FieldKind::vector) {}
};

/// Stores the upper triangle; at(i,j,...) with j < i reads the (j,i) entry.
struct SymTensorField : Field {
  SymTensorField() = default;
  explicit SymTensorField(const Grid& g) : Field(g, FieldKind::sym_tensor) {}
  double at(int i, int j, std::size_t p) const { return comp(sym_index(i, j, grid().n))[p]; }
};

/// Stores the strict upper triangle; at(j,i) returns the negated (i,j) entry.
struct TwoFormField : Field {
  TwoFormField() = default;
  explicit TwoFormField(const Grid& g) : Field(g, FieldKind::two_form) {}
  double at(int i, int j, std::size_t p) const {
    if (i == j) return 0.0;
    if (i < j) return comp(two_form_index(i, j, grid().n))[p];
    return -comp(two_form_index(j, i, grid().n))[p];
  }
};

void require_same_kind(const Field& a, const Field& b);

// pointwise helpers used across modules
void axpy(Field& y, double a, const Field& x);   // y += a*x
void scale(Field& y, double a);
double sup_norm(const Field& f);

}  // namespace tsplit
