#include <doctest.h>

#include <cmath>
#include <vector>

#include "core/bifurcation_points.hpp"
#include "core/errors.hpp"
#include "core/linearization.hpp"

using namespace lvbif;

namespace {

std::vector<EigenPair> spectrum(int dim, int n, int k) {
  const RadialGrid g = build_grid(dim, n);
  return eigenpairs(assemble_neumann_laplacian(g), g, k);
}

}  // namespace

TEST_SUITE("bifurcation_points") {
  TEST_CASE("admissible mode count") {
    const Params p16 = validate_params(16, 16, 2, 1, 2);
    const std::vector<double> lam{0, 14.68, 49.2, 103.5};
    CHECK(admissible_mode_count(p16, lam) == 1);
    CHECK(admissible_mode_count(validate_params(64, 64, 2, 1, 2), lam) == 2);
    CHECK(admissible_mode_count(validate_params(4, 4, 2, 1, 2), lam) == 0);
    CHECK_THROWS_AS(admissible_mode_count(validate_params(200, 200, 2, 1, 2), lam), ValidationError);
  }

  TEST_CASE("single point for mu = sigma = 16") {
    const Params p = validate_params(16, 16, 2, 1, 2);
    const auto e = spectrum(2, 512, 4);
    const auto pts = bifurcation_points(p, e);
    REQUIRE(pts.size() == 1u);
    const auto& bp = pts[0];
    CHECK(bp.j == 1);
    CHECK(bp.lambda_j == e[1].lambda);
    CHECK(std::abs(-delta1(p, bp.beta_j) - bp.lambda_j) < 1e-12 * bp.lambda_j);
    CHECK(bp.m_j == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(bp.diagnostics.index_left == -1);
    CHECK(bp.diagnostics.index_right == 1);
    CHECK(bp.diagnostics.step2_value < 0);
    CHECK(bp.diagnostics.pairing_value > 0);
  }

  TEST_CASE("two ordered points for mu = sigma = 64") {
    const Params p = validate_params(64, 64, 2, 1, 2);
    const auto pts = bifurcation_points(p, spectrum(2, 512, 4));
    REQUIRE(pts.size() == 2u);
    CHECK(pts[0].beta_j < pts[1].beta_j);
    for (const auto& bp : pts) CHECK(bp.diagnostics.index_left * bp.diagnostics.index_right == -1);
  }

  TEST_CASE("no points when sqrt(mu sigma) is below lambda_1") {
    CHECK(bifurcation_points(validate_params(4, 4, 2, 1, 2), spectrum(2, 128, 3)).empty());
  }

  TEST_CASE("kernel slope equals the delta1 eigenvector slope") {
    const Params p = validate_params(5, 9, 3, 1, 3);
    const double lambda = 3.0;
    const double beta = solve_bifurcation_beta(p, lambda);
    CHECK(-delta1(p, beta) == doctest::Approx(lambda).epsilon(1e-13));
    CHECK(kernel_slope(p, beta, lambda) == doctest::Approx(spectral_split(p, beta).m).epsilon(1e-12));
    CHECK_THROWS_AS(solve_bifurcation_beta(p, std::sqrt(45.0)), DomainError);
    CHECK_THROWS_AS(solve_bifurcation_beta(p, 0.0), DomainError);
  }

  TEST_CASE("index jump sign pair") {
    const Params p = validate_params(16, 20, 2, 1, 2);
    const double beta = solve_bifurcation_beta(p, 10.0);
    const IndexJump ij = index_jump_check(p, beta, 10.0);
    CHECK(ij.left == -1);
    CHECK(ij.right == 1);
  }

  TEST_CASE("discrete kernel is one-dimensional") {
    const Params p = validate_params(16, 16, 2, 1, 2);
    const RadialGrid g = build_grid(2, 256);
    const auto e = eigenpairs(assemble_neumann_laplacian(g), g, 3);
    const auto pts = bifurcation_points(p, e);
    REQUIRE(pts.size() == 1u);
    const KernelReport kr = kernel_dimension(EllipticProblem(p, g), pts[0]);
    CHECK(kr.small_count == 1);
    CHECK(kr.gap_orders >= 4.0);
  }

  TEST_CASE("bifurcation direction pairs the eigenfunction with (m, 1)") {
    const Params p = validate_params(16, 16, 2, 1, 2);
    const auto e = spectrum(2, 128, 2);
    const double beta = solve_bifurcation_beta(p, e[1].lambda);
    const FieldPair h = bifurcation_direction(p, beta, e[1]);
    const double m = kernel_slope(p, beta, e[1].lambda);
    for (std::size_t i = 0; i < h.u1.size(); ++i) {
      CHECK(h.u2[i] == e[1].f[i]);
      CHECK(h.u1[i] == doctest::Approx(m * e[1].f[i]));
    }
  }
}
