#include <cmath>

#include "cwave/grid.hpp"
#include "support.hpp"

using namespace cwave;

TEST_CASE("grid spacing follows extents and interior counts") {
  const auto g = testing::unit_square(9);
  CHECK(g.h(0) == doctest::Approx(0.1));
  CHECK(g.h(1) == doctest::Approx(0.1));
  CHECK(g.stored(0) == 11);
  CHECK(g.stored(2) == 1);

  const auto g3 = Grid::build({{0.0, 2.0}, {0.0, 2.0}, {0.0, 2.0}}, {79, 79, 79});
  for (int a = 0; a < 3; ++a) CHECK(g3.h(a) == doctest::Approx(0.025));
  CHECK(g3.size() == 81L * 81 * 81);
}

TEST_CASE("grid construction errors") {
  CHECK_THROWS_WITH_AS(Grid::build({{0.0, 1.0}, {0.0, 1.0}}, {4, 9}),
                       "grid too small for 4th-order closure", Error);
  CHECK_THROWS_WITH_AS(Grid::build({{1.0, 1.0}, {0.0, 1.0}}, {9, 9}), "empty axis", Error);
  CHECK_THROWS_WITH_AS(Grid::build({{0.0, NAN}, {0.0, 1.0}}, {9, 9}), "empty axis", Error);
  CHECK_THROWS_AS(Grid::build({{0.0, 1.0}}, {9}), Error);
}

TEST_CASE("flat index round-trips") {
  const auto g = Grid::build({{0.0, 1.0}, {0.0, 2.0}, {-1.0, 1.0}}, {5, 6, 7});
  for (int k = 0; k < g.stored(2); ++k)
    for (int j = 0; j < g.stored(1); ++j)
      for (int i = 0; i < g.stored(0); ++i) {
        const auto ijk = g.unravel(g.index(i, j, k));
        REQUIRE(ijk[0] == i);
        REQUIRE(ijk[1] == j);
        REQUIRE(ijk[2] == k);
      }
  CHECK(g.index(1, 0, 0) - g.index(0, 0, 0) == 1);  // x-fastest
}

TEST_CASE("sample") {
  const auto g = testing::unit_square(9);
  const auto zero = sample([](double, double, double) { return 0.0; }, g);
  CHECK(zero.values().abs().maxCoeff() == 0.0);

  const auto ramp = sample([](double x, double, double) { return x; }, g);
  for (int i = 0; i <= 10; ++i) CHECK(ramp(i, 3) == doctest::Approx(0.1 * i));
  for (Index f = 1; f < g.stored(0); ++f) CHECK(ramp.values()[f] > ramp.values()[f - 1]);

  CHECK_THROWS_WITH_AS(sample([](double x, double, double) { return 1.0 / (x - x); }, g),
                       "non-finite sample", Error);

  const auto g3 = testing::unit_cube(9);
  const auto rho = sample([](double x, double y, double z) { return std::exp((-x - y - z) / 3); }, g3);
  CHECK(rho(10, 10, 10) == doctest::Approx(std::exp(-1.0)));
  CHECK(rho(0, 0, 0) == 1.0);
}

TEST_CASE("media model validation") {
  const auto g = testing::unit_square(5);
  MediaModel<double> m = testing::unit_media(g);
  CHECK_NOTHROW(m.validate());
  m.rho(2, 2) = 0.0;
  CHECK_THROWS_WITH_AS(m.validate(), "invalid media model", Error);
  m = testing::unit_media(g);
  m.c(0, 0) = NAN;
  CHECK_THROWS_WITH_AS(m.validate(), "invalid media model", Error);
  m = testing::unit_media(g);
  m.c.values() *= 2;
  CHECK(m.stiffness()(3, 3) == 4.0);
}

TEST_CASE("file-defined grids allow small interiors") {
  const double origin[] = {0.0, 0.0};
  const double h[] = {0.5, 0.5};
  const int nodes[] = {3, 3};
  const auto g = Grid::from_nodes(origin, h, nodes);
  CHECK(g.n(0) == 1);
  CHECK(g.axis(0).max == 1.0);
  CHECK(g.size() == 9);
  const int too_few[] = {2, 3};
  CHECK_THROWS_AS(Grid::from_nodes(origin, h, too_few), Error);
}

TEST_CASE("boundary data fills only boundary nodes") {
  const auto g = testing::unit_square(6);
  ScalarField u(g, -7.0);
  const auto bc = BoundarySpec<double>::from_solution(
      [](double t, double x, double y, double) { return t + x + 10 * y; });
  bc.apply(u, 2.0);
  u.for_each([&](int i, int j, int k) {
    const auto p = g.point(i, j, k);
    if (g.is_interior(i, j, k)) {
      CHECK(u(i, j) == -7.0);
    } else {
      CHECK(u(i, j) == doctest::Approx(2.0 + p[0] + 10 * p[1]));
    }
  });

  ScalarField z(g, 3.0);
  BoundarySpec<double>::zero().apply(z, 0.0);
  CHECK(z(0, 3) == 0.0);
  CHECK(z(3, 3) == 3.0);
  CHECK(BoundarySpec<double>::zero().is_zero());
}
