#include "doctest.h"

#include "support.hpp"

using namespace tsplit;

TEST_CASE("flat metric samples to the identity") {
  Grid g = ts_test::grid2(16);
  MetricField m = sample_metric(MetricSpec::flat(2), g);
  for (std::size_t p = 0; p < g.points; ++p) {
    CHECK(m.g().comp(0)[p] == 1.0);
    CHECK(m.g().comp(1)[p] == 0.0);
    CHECK(m.det().values()[p] == 1.0);
  }
}

TEST_CASE("conformal with u = 0 equals flat") {
  Grid g = ts_test::grid2(16);
  MetricField flat = sample_metric(MetricSpec::flat(2), g);
  MetricField conf = sample_metric(MetricSpec::conformal(2, ScalarSpec{}), g);
  for (std::size_t p = 0; p < g.points; ++p)
    for (int c = 0; c < 3; ++c) CHECK(conf.g().comp(c)[p] == flat.g().comp(c)[p]);
}

TEST_CASE("conformal determinant is exp(4u) in 2D") {
  Grid g = ts_test::grid2(32);
  MetricField m = sample_metric(ts_test::conformal2(), g);
  double x[3];
  for (std::size_t p = 0; p < g.points; ++p) {
    g.coords(p, x);
    const double u = 0.1 * std::sin(2 * M_PI * x[0]) * std::sin(2 * M_PI * x[1]);
    CHECK(m.det().values()[p] == doctest::Approx(std::exp(4.0 * u)).epsilon(1e-14));
  }
}

TEST_CASE("metric inverse is pointwise exact to 1e-13") {
  Grid g = ts_test::grid2(16);
  for (const MetricSpec& spec : {ts_test::conformal2(), ts_test::diagonal_periodic2()}) {
    MetricField m = sample_metric(spec, g);
    double a[9], b[9];
    for (std::size_t p = 0; p < g.points; ++p) {
      m.mat(p, a);
      m.mat_inv(p, b);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          double s = 0.0;
          for (int k = 0; k < 2; ++k) s += a[i * 2 + k] * b[k * 2 + j];
          CHECK(std::abs(s - (i == j ? 1.0 : 0.0)) <= 1e-13);
        }
    }
  }
}

TEST_CASE("indefinite metric is rejected at construction") {
  Grid g = ts_test::grid2(16);
  MetricSpec bad;
  bad.family = MetricSpec::Family::flat_diagonal;
  bad.dim = 2;
  bad.diag = {1.0, -0.5};
  CHECK_THROWS_AS((void)sample_metric(bad, g), IndefiniteMetricError);
}

TEST_CASE("product metric assembles blocks") {
  Grid g = ts_test::grid3(8);
  MetricSpec s;
  s.family = MetricSpec::Family::product;
  s.dim = 3;
  s.factors.push_back({std::make_shared<MetricSpec>(ts_test::conformal2()), {0, 1}});
  s.factors.push_back({std::make_shared<MetricSpec>(MetricSpec::flat(1)), {2}});
  MetricField m = sample_metric(s, g);
  for (std::size_t p = 0; p < g.points; ++p) {
    CHECK(m.g().comp(sym_index(2, 2, 3))[p] == 1.0);
    CHECK(m.g().comp(sym_index(0, 2, 3))[p] == 0.0);
    CHECK(m.g().comp(sym_index(0, 0, 3))[p] == m.g().comp(sym_index(1, 1, 3))[p]);
  }
}

TEST_CASE("3D metric inverse and positive-definiteness") {
  Grid g = ts_test::grid3(8);
  MetricField m = sample_metric(ts_test::conformal3(), g);
  double a[9], b[9];
  for (std::size_t p = 0; p < g.points; p += 17) {
    m.mat(p, a);
    m.mat_inv(p, b);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) s += a[i * 3 + k] * b[k * 3 + j];
        CHECK(std::abs(s - (i == j ? 1.0 : 0.0)) <= 1e-13);
      }
  }
}

TEST_CASE("analytic spec derivatives match finite differences off-grid") {
  MetricSpec spec = ts_test::conformal2();
  const double L[2] = {1.0, 1.0};
  const double x[2] = {0.237, 0.681};
  const double eps = 1e-6;
  double gp[4], gm[4], d1[4];
  for (int c = 0; c < 2; ++c) {
    double xp[2] = {x[0], x[1]}, xm[2] = {x[0], x[1]};
    xp[c] += eps;
    xm[c] -= eps;
    spec.eval(xp, L, gp);
    spec.eval(xm, L, gm);
    spec.eval_d1(x, L, c, d1);
    for (int t = 0; t < 4; ++t)
      CHECK(d1[t] == doctest::Approx((gp[t] - gm[t]) / (2 * eps)).epsilon(1e-6));
  }
  // second derivative, diagonal direction
  double d2[4], g0[4];
  spec.eval(x, L, g0);
  for (int c = 0; c < 2; ++c) {
    double xp[2] = {x[0], x[1]}, xm[2] = {x[0], x[1]};
    xp[c] += eps;
    xm[c] -= eps;
    spec.eval(xp, L, gp);
    spec.eval(xm, L, gm);
    spec.eval_d2(x, L, c, c, d2);
    for (int t = 0; t < 4; ++t)
      CHECK(d2[t] == doctest::Approx((gp[t] - 2 * g0[t] + gm[t]) / (eps * eps)).epsilon(5e-4));
  }
}
