#include <cmath>
#include <numbers>

#include "cwave/source.hpp"
#include "support.hpp"

using namespace cwave;

TEST_CASE("Ricker wavelet values") {
  const double fp = 10, dr = 0.05;
  CHECK(ricker(dr, fp, dr) == 1.0);
  const double zero = dr + 1 / (std::sqrt(2.0) * std::numbers::pi * fp);
  CHECK(std::abs(ricker(zero, fp, dr)) < 1e-14);
  // a = pi^2 * 100 * 0.0025 = 2.4674011002723395; (1 - 2a) e^{-a}.
  CHECK(ricker(0.0, fp, dr) == doctest::Approx(-0.3336907922964695).epsilon(1e-12));
}

TEST_CASE("Ricker derivative agrees with a centred difference") {
  const double fp = 5, dr = 0.2, d = 1e-6;
  for (double t : {0.0, 0.1, 0.17, 0.2, 0.26, 0.4}) {
    const double fd = (ricker(t + d, fp, dr) - ricker(t - d, fp, dr)) / (2 * d);
    CHECK(ricker_dt(t, fp, dr) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
  }
  CHECK(ricker_dt(dr, fp, dr) == 0.0);
}

TEST_CASE("point injection") {
  const auto g = Grid::build({{0.0, 2.0}, {0.0, 2.0}, {0.0, 2.0}}, {79, 79, 79});
  ScalarField f(g);
  inject_point_source(f, {1.0, 1.0, 1.0}, 0.0);
  CHECK(f.values().abs().maxCoeff() == 0.0);

  const auto g1 = testing::unit_cube(39);  // h = 1/40
  ScalarField f1(g1);
  inject_point_source(f1, {0.5, 0.5, 0.5}, 1.0);
  CHECK(f1(20, 20, 20) == doctest::Approx(64000.0).epsilon(1e-12));
  CHECK(f1.values().sum() == doctest::Approx(64000.0).epsilon(1e-12));
}

TEST_CASE("ties go to the lower index") {
  const auto g = testing::unit_square(9);  // h = 0.1
  const auto idx = nearest_interior_node(g, {0.35, 0.45, 0.0});
  CHECK(idx[0] == 3);
  CHECK(idx[1] == 4);
  CHECK(nearest_interior_node(g, {0.36, 0.44, 0.0})[0] == 4);
}

TEST_CASE("sources outside the interior are rejected") {
  const auto g = testing::unit_square(9);
  ScalarField f(g);
  CHECK_THROWS_WITH_AS(inject_point_source(f, {0.0, 0.5, 0.0}, 1.0), "source outside interior", Error);
  CHECK_THROWS_WITH_AS(inject_point_source(f, {0.5, 1.2, 0.0}, 1.0), "source outside interior", Error);
  CHECK_THROWS_WITH_AS(inject_point_source(f, {0.02, 0.5, 0.0}, 1.0), "source outside interior", Error);
  CHECK_THROWS_AS(SourceSpec<double>::point_ricker(0.0, 0.1, {0.5, 0.5, 0.0}), Error);
  CHECK_THROWS_AS(SourceSpec<double>::point_ricker(5.0, -0.1, {0.5, 0.5, 0.0}), Error);
}

TEST_CASE("source spec evaluation") {
  const auto g = testing::unit_square(9);
  ScalarField f(g);
  const auto an = SourceSpec<double>::analytic([](double t, double x, double, double) { return t * x; });
  an.add_to(f, 2.0, 0.5);
  CHECK(f(4, 4) == doctest::Approx(0.4));
  ScalarField d(g);
  an.add_dt_to(d, 2.0, 1e-3);  // finite-difference fallback
  CHECK(d(4, 4) == doctest::Approx(0.4));

  const auto rk = SourceSpec<double>::point_ricker(10.0, 0.05, {0.5, 0.5, 0.0}, 2.0);
  ScalarField r(g), rd(g);
  rk.add_to(r, 0.0);
  rk.add_dt_to(rd, 0.0, 1e-3);
  CHECK(r(5, 5) == doctest::Approx(2.0 * ricker(0.0, 10.0, 0.05) / 0.01));
  CHECK(rd(5, 5) == doctest::Approx(2.0 * ricker_dt(0.0, 10.0, 0.05) / 0.01));

  ScalarField none(g, 1.0);
  SourceSpec<double>::none().add_to(none, 1.0);
  CHECK(none.values().minCoeff() == 1.0);
}
