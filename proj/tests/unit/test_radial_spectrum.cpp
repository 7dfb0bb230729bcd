#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "core/errors.hpp"
#include "core/nodal.hpp"
#include "core/radial_spectrum.hpp"

using namespace lvbif;

namespace {

// k-th positive root of tan x = x, bracketed in (kπ, kπ + π/2).
double tan_root(int k) {
  double lo = k * M_PI + 1e-9, hi = k * M_PI + M_PI / 2 - 1e-9;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (std::tan(mid) - mid < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_SUITE("radial_spectrum") {
  TEST_CASE("grid geometry") {
    for (int dim : {2, 3, 4}) {
      const RadialGrid g = build_grid(dim, 64);
      CHECK(g.r.back() == doctest::Approx(1.0).epsilon(1e-15));
      const double total = std::accumulate(g.weights.begin(), g.weights.end(), 0.0);
      CHECK(total == doctest::Approx(unit_ball_measure(dim)).epsilon(1e-14));
      CHECK(g.rho.size() == 63u);
    }
    CHECK(unit_ball_measure(2) == doctest::Approx(M_PI));
    CHECK(unit_ball_measure(3) == doctest::Approx(4 * M_PI / 3));
    CHECK_THROWS_AS(build_grid(2, 8), ValidationError);
  }

  TEST_CASE("operator annihilates constants and is weight-symmetric") {
    const RadialGrid g = build_grid(3, 50);
    const DiscreteOperator op = assemble_neumann_laplacian(g);
    const std::vector<double> one(g.n, 1.0);
    for (double v : op.apply(one)) CHECK(std::abs(v) < 1e-9);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd;
    std::vector<double> u(g.n), w(g.n);
    for (int i = 0; i < g.n; ++i) u[i] = nd(rng), w[i] = nd(rng);
    const double lhs = weighted_inner(g, op.apply(u), w), rhs = weighted_inner(g, u, op.apply(w));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(lhs));
    CHECK(weighted_inner(g, op.apply(u), u) > 0);
  }

  TEST_CASE("quadratic is mapped to -2N in the interior") {
    const RadialGrid g = build_grid(2, 128);
    const DiscreteOperator op = assemble_neumann_laplacian(g);
    std::vector<double> q(g.n);
    for (int i = 0; i < g.n; ++i) q[i] = g.r[i] * g.r[i];
    const auto lq = op.apply(q);
    for (int i = 1; i < g.n / 2; ++i) CHECK(lq[i] == doctest::Approx(-4.0).epsilon(1e-3));
  }

  TEST_CASE("Bessel oracle matches tan x = x in three dimensions") {
    for (int k = 1; k <= 4; ++k) {
      const double x = tan_root(k);
      CHECK(bessel_oracle(3, k) == doctest::Approx(x * x).epsilon(1e-12));
    }
    CHECK(bessel_oracle(2, 1) == doctest::Approx(14.681970642123893).epsilon(1e-12));
    CHECK(bessel_oracle(2, 0) == 0.0);
  }

  TEST_CASE("eigenpairs: ordering, normalization, nodal count, orthogonality") {
    const RadialGrid g = build_grid(2, 256);
    const DiscreteOperator op = assemble_neumann_laplacian(g);
    const auto e = eigenpairs(op, g, 5);
    REQUIRE(e.size() == 6u);
    CHECK(e[0].lambda == 0.0);
    for (int j = 0; j <= 5; ++j) {
      CHECK(e[j].j == j);
      if (j) CHECK(e[j].lambda > e[j - 1].lambda);
      double mx = 0;
      for (double v : e[j].f) mx = std::max(mx, std::abs(v));
      CHECK(mx == doctest::Approx(1.0));
      CHECK(e[j].f[0] > 0);
      CHECK(count_sign_changes(e[j].f) == j);
      CHECK(e[j].residual < 1e-7 * std::max(1.0, e[j].lambda));
      CHECK(sturm_count(op, e[j].lambda + 1e-6) == j + 1);
      for (int i = 0; i < j; ++i) {
        const double c = weighted_inner(g, e[i].f, e[j].f);
        const double ni = std::sqrt(weighted_inner(g, e[i].f, e[i].f));
        const double nj = std::sqrt(weighted_inner(g, e[j].f, e[j].f));
        CHECK(std::abs(c) < 1e-9 * ni * nj);
      }
    }
  }

  TEST_CASE("second-order convergence to the oracle") {
    for (int dim : {2, 3}) {
      double prev[4] = {0, 0, 0, 0};
      for (int n : {128, 256, 512}) {
        const RadialGrid g = build_grid(dim, n);
        const auto e = eigenpairs(assemble_neumann_laplacian(g), g, 3);
        for (int j = 1; j <= 3; ++j) {
          const double err = std::abs(e[j].lambda - bessel_oracle(dim, j));
          if (prev[j] > 0) {
            const double order = std::log2(prev[j] / err);
            CHECK(order > 1.8);
            CHECK(order < 2.2);
          }
          prev[j] = err;
        }
      }
    }
  }

  TEST_CASE("extrapolated eigenvalues are far closer to the oracle") {
    const auto ex = extrapolated_eigenvalues(2, 512, 4);
    for (int j = 1; j <= 4; ++j) CHECK(std::abs(ex[j] - bessel_oracle(2, j)) < 1e-6);
  }
}
