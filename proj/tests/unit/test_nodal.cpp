#include <doctest.h>

#include <cmath>
#include <limits>

#include "core/nodal.hpp"

using namespace lvbif;

TEST_SUITE("nodal") {
  const RadialGrid g = build_grid(2, 200);

  TEST_CASE("counts simple roots and locates them") {
    std::vector<double> v(g.n);
    for (int i = 0; i < g.n; ++i) v[i] = std::cos(2.25 * M_PI * g.r[i]);
    const NodalDiagnostic d = nodal_count(v, g);
    CHECK(d.count == 2);
    CHECK(d.simple);
    CHECK_FALSE(d.vanishing);
    REQUIRE(d.zero_locations.size() == 2u);
    CHECK(d.zero_locations[0] == doctest::Approx(2.0 / 9).epsilon(1e-4));
    CHECK(d.zero_locations[1] == doctest::Approx(2.0 / 3).epsilon(1e-4));
  }

  TEST_CASE("double root is not simple") {
    std::vector<double> v(g.n);
    // Two sign changes in adjacent cells around node 100: a numerically double root.
    const double c = g.r[100], e = 0.6 * g.h;
    for (int i = 0; i < g.n; ++i) v[i] = std::pow(g.r[i] - c, 2) - e * e;
    const NodalDiagnostic d = nodal_count(v, g);
    CHECK(d.count == 2);
    CHECK_FALSE(d.simple);
  }

  TEST_CASE("vanishing field is flagged") {
    std::vector<double> v(g.n, 0.0);
    const NodalDiagnostic d = nodal_count(v, g);
    CHECK(d.vanishing);
    CHECK_FALSE(d.simple);
  }

  TEST_CASE("root at r = 1 is not simple") {
    std::vector<double> v(g.n);
    for (int i = 0; i < g.n; ++i) v[i] = std::cos(2.5 * M_PI * g.r[i]);
    const NodalDiagnostic d = nodal_count(v, g);
    CHECK(d.count == 2);
    CHECK_FALSE(d.simple);
  }

  TEST_CASE("root touching the boundary is not simple") {
    std::vector<double> v(g.n);
    for (int i = 0; i < g.n; ++i) v[i] = 1.0 - g.r[i];
    CHECK_FALSE(nodal_count(v, g).simple);
  }

  TEST_CASE("root distance") {
    CHECK(root_distance_cells({0.3, 0.6}, {0.3 + g.h, 0.6}, g.h) == doctest::Approx(1.0));
    CHECK(root_distance_cells({0.3}, {0.3, 0.5}, g.h) == std::numeric_limits<double>::infinity());
  }
}
