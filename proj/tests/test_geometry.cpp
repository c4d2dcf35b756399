#include "doctest.h"

#include "support.hpp"

using namespace tsplit;

TEST_CASE("flat curvature vanishes exactly") {
  Grid g = ts_test::grid2(16);
  Geometry geo(sample_metric(MetricSpec::flat(2), g), 4);
  CHECK(sup_norm(geo.curv().ricci) == 0.0);
  CHECK(sup_norm(geo.curv().scalar) == 0.0);
  for (const auto& k : geo.curv().christoffel)
    for (const auto& c : k)
      for (double v : c) CHECK(v == 0.0);
}

TEST_CASE("conformal scalar curvature matches the closed form at order 4") {
  double prev = 0.0;
  std::vector<double> errs;
  for (int N : {16, 32, 64}) {
    Grid g = ts_test::grid2(N);
    Geometry geo(sample_metric(ts_test::conformal2(), g), 4);
    double sup = 0.0;
    double x[3];
    for (std::size_t p = 0; p < g.points; ++p) {
      g.coords(p, x);
      sup = std::max(sup, std::abs(geo.curv().scalar.values()[p] -
                                   ts_test::conformal2_s_exact(x[0], x[1])));
    }
    errs.push_back(sup);
    prev = sup;
  }
  (void)prev;
  // observed order >= 3.5 on each doubling
  CHECK(std::log2(errs[0] / errs[1]) >= 3.5);
  CHECK(std::log2(errs[1] / errs[2]) >= 3.5);
  CHECK(errs[2] <= 1e-3);  // absolute scale sanity at N=64
}

TEST_CASE("curvature trace consistency") {
  Grid g = ts_test::grid2(32);
  Geometry geo(sample_metric(ts_test::diagonal_periodic2(), g), 4);
  ScalarField tr = trace_g(geo.curv().ricci, geo.metric());
  double sup = 0.0, ssup = 0.0;
  for (std::size_t p = 0; p < g.points; ++p) {
    sup = std::max(sup, std::abs(tr.values()[p] - geo.curv().scalar.values()[p]));
    ssup = std::max(ssup, std::abs(geo.curv().scalar.values()[p]));
  }
  CHECK(sup <= 1e-12 * (1.0 + ssup));
}

TEST_CASE("product metric lifts the 2D scalar curvature") {
  const int N = 16;
  Grid g2 = ts_test::grid2(N);
  Geometry geo2(sample_metric(ts_test::conformal2(), g2), 4);
  Grid g3 = ts_test::grid3(N);
  MetricSpec s;
  s.family = MetricSpec::Family::product;
  s.dim = 3;
  s.factors.push_back({std::make_shared<MetricSpec>(ts_test::conformal2()), {0, 1}});
  s.factors.push_back({std::make_shared<MetricSpec>(MetricSpec::flat(1)), {2}});
  Geometry geo3(sample_metric(s, g3), 4);
  double sup = 0.0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      sup = std::max(sup, std::abs(geo3.curv().scalar.values()[g3.index(i, j, 3)] -
                                   geo2.curv().scalar.values()[g2.index(i, j)]));
  CHECK(sup <= 1e-10);  // same 2D stencil arithmetic lifted along the flat factor
}

TEST_CASE("l2_inner: volume, trace identity, symmetry, positivity") {
  Grid g = ts_test::grid2(32);
  MetricField flat = sample_metric(MetricSpec::flat(2), g);
  ScalarField one(g);
  one.fill(1.0);
  CHECK(l2_inner(one, one, flat) == 1.0);  // dyadic weights: exactly the volume

  CHECK(l2_inner(flat.g(), flat.g(), flat) == doctest::Approx(2.0).epsilon(1e-14));

  MetricField conf = sample_metric(ts_test::conformal2(), g);
  Rng rng(3);
  SymTensorField a = random_smooth_sym(g, rng);
  SymTensorField b = random_smooth_sym(g, rng);
  const double ab = l2_inner(a, b, conf);
  const double ba = l2_inner(b, a, conf);
  CHECK(ab == ba);  // bitwise symmetric kernel + fixed reduction order
  CHECK(l2_inner(a, a, conf) > 0.0);

  SymTensorField zero(g);
  CHECK(l2_inner(zero, zero, conf) == 0.0);
}

TEST_CASE("l2_inner matches refined-grid quadrature for smooth fields") {
  // trig-polynomial integrands on N=32 vs N=96: trapezoid quadrature of
  // smooth periodic data is spectrally exact, so both agree to round-off
  auto value = [](const Grid& g, std::size_t p, int c) {
    double x[3];
    g.coords(p, x);
    const double tp = 2 * M_PI;
    return std::sin(tp * x[0] + 0.3 * c) * std::cos(tp * x[1] - 0.1 * c) +
           0.5 * std::cos(tp * 2 * x[0]);
  };
  double vals[2];
  int which = 0;
  for (int N : {32, 96}) {
    const int dims[2] = {N, N};
    const double len[2] = {1.0, 1.0};
    Grid g = make_grid(2, dims, len);
    MetricField m = sample_metric(ts_test::conformal2(), g);
    OneFormField a(g), b(g);
    for (int c = 0; c < 2; ++c)
      for (std::size_t p = 0; p < g.points; ++p) {
        a.comp(c)[p] = value(g, p, c);
        b.comp(c)[p] = value(g, p, c + 2);
      }
    vals[which++] = l2_inner(a, b, m);
  }
  CHECK(std::abs(vals[0] - vals[1]) <= 1e-10 * (1.0 + std::abs(vals[1])));
}

TEST_CASE("l2_inner rejects mismatches") {
  Grid g = ts_test::grid2(16);
  Grid h = ts_test::grid2(32);
  MetricField m = sample_metric(MetricSpec::flat(2), g);
  ScalarField a(g);
  OneFormField b(g);
  CHECK_THROWS_AS((void)l2_inner(a, b, m), std::invalid_argument);
  ScalarField c(h);
  CHECK_THROWS_AS((void)l2_inner(a, c, m), std::invalid_argument);
}

TEST_CASE("directional derivative") {
  Grid g = ts_test::grid2(64);
  VectorField xi(g);
  ScalarField f(g);
  double x[3];
  for (std::size_t p = 0; p < g.points; ++p) {
    g.coords(p, x);
    xi.comp(0)[p] = 1.0;
    f.values()[p] = std::sin(2 * M_PI * x[0]);
  }
  ScalarField df = directional_derivative(xi, f, 4);
  double sup = 0.0;
  for (std::size_t p = 0; p < g.points; ++p) {
    g.coords(p, x);
    sup = std::max(sup, std::abs(df.values()[p] - 2 * M_PI * std::cos(2 * M_PI * x[0])));
  }
  CHECK(sup <= 1e-5);

  VectorField zero(g);
  ScalarField z = directional_derivative(zero, f, 4);
  CHECK(sup_norm(z) == 0.0);
  ScalarField cst(g);
  cst.fill(4.5);
  ScalarField zc = directional_derivative(xi, cst, 4);
  CHECK(sup_norm(zc) == 0.0);
}
