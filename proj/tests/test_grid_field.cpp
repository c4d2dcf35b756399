#include "doctest.h"

#include <cstdio>
#include <filesystem>

#include "support.hpp"
#include "tensorsplit/field_io.hpp"

using namespace tsplit;

TEST_CASE("make_grid derives spacings") {
  {
    const int dims[2] = {16, 16};
    const double len[2] = {1.0, 1.0};
    Grid g = make_grid(2, dims, len);
    CHECK(g.spacing[0] == doctest::Approx(1.0 / 16).epsilon(0));
    CHECK(g.points == 256);
  }
  {
    const int dims[3] = {8, 8, 8};
    const double len[3] = {1.0, 2.0, 1.0};
    Grid g = make_grid(3, dims, len);
    CHECK(g.spacing[0] == 1.0 / 8);
    CHECK(g.spacing[1] == 2.0 / 8);
    CHECK(g.spacing[2] == 1.0 / 8);
    CHECK(g.points == 512);
  }
}

TEST_CASE("make_grid rejects bad input") {
  const double len[2] = {1.0, 1.0};
  {
    const int dims[2] = {7, 16};
    CHECK_THROWS_AS((void)make_grid(2, dims, len), std::invalid_argument);
  }
  {
    const int dims[2] = {6, 16};
    CHECK_THROWS_AS((void)make_grid(2, dims, len), std::invalid_argument);
  }
  {
    const int dims[2] = {16, 16};
    const double bad[2] = {0.0, 1.0};
    CHECK_THROWS_AS((void)make_grid(2, dims, bad), std::invalid_argument);
  }
  {
    const int dims[2] = {16, 16};
    CHECK_THROWS_AS((void)make_grid(4, dims, len), std::invalid_argument);
  }
}

TEST_CASE("symmetric accessor returns the mirror entry") {
  Grid g = ts_test::grid2(8);
  SymTensorField f(g);
  f.comp(sym_index(0, 1, 2))[5] = 3.25;
  CHECK(f.at(1, 0, 5) == 3.25);
  CHECK(f.at(0, 1, 5) == 3.25);
}

TEST_CASE("two-form accessor negates the mirror entry") {
  Grid g = ts_test::grid2(8);
  TwoFormField f(g);
  f.comp(0)[3] = 1.5;
  CHECK(f.at(0, 1, 3) == 1.5);
  CHECK(f.at(1, 0, 3) == -1.5);
  CHECK(f.at(0, 0, 3) == 0.0);
}

TEST_CASE("field file round-trip is bitwise") {
  Grid g = ts_test::grid2(8);
  Rng rng(7);
  SymTensorField f = random_smooth_sym(g, rng);
  const std::string path = std::filesystem::temp_directory_path() / "ts_field_rt.json";
  write_field(f, path);
  Field back = read_field(path);
  REQUIRE(back.kind() == FieldKind::sym_tensor);
  REQUIRE(back.raw().size() == f.raw().size());
  for (std::size_t i = 0; i < f.raw().size(); ++i) CHECK(back.raw()[i] == f.raw()[i]);
  std::remove(path.c_str());
}

TEST_CASE("field file rejects wrong layout and length") {
  Grid g = ts_test::grid2(8);
  ScalarField f(g);
  std::string txt = field_to_json_text(f);
  CHECK_THROWS(field_from_json_text(std::string(txt).replace(txt.find("last-fastest"), 12, "first-fastest")));
}

TEST_CASE("coords walk the lattice row-major, last axis fastest") {
  Grid g = ts_test::grid2(8);
  double x[2];
  g.coords(1, x);  // second point: last axis advanced
  CHECK(x[0] == 0.0);
  CHECK(x[1] == doctest::Approx(1.0 / 8));
  g.coords(g.index(3, 2), x);
  CHECK(x[0] == doctest::Approx(3.0 / 8));
  CHECK(x[1] == doctest::Approx(2.0 / 8));
}
