#include <doctest.h>

#include <cmath>

#include "core/bifurcation_points.hpp"
#include "core/branch_continuation.hpp"

using namespace lvbif;

namespace {

struct Setup {
  Params p = validate_params(16, 16, 2, 1, 2);
  RadialGrid g = build_grid(2, 128);
  std::vector<EigenPair> e = eigenpairs(assemble_neumann_laplacian(g), g, 3);
  std::vector<BifurcationPoint> pts = bifurcation_points(p, e);
  EllipticProblem prob{p, g};
};

}  // namespace

TEST_SUITE("branch_continuation") {
  TEST_CASE("switch point leaves the stem on the requested side") {
    Setup s;
    REQUIRE(s.pts.size() == 1u);
    for (int dir : {1, -1}) {
      double coef = 0;
      const BranchPoint bp = branch_switch(s.prob, s.pts[0], 1e-2, dir, &coef);
      CHECK(coef * dir > 0);
      CHECK(bp.residual < 1e-10);
      CHECK(distance_to_stem(s.prob, bp.state) > 0);
      CHECK(bp.nodal.count == 1);
      CHECK(bp.state.beta == doctest::Approx(s.pts[0].beta_j).epsilon(1e-2));
    }
  }

  TEST_CASE("short continuation keeps the invariants") {
    Setup s;
    BranchConfig cfg;
    cfg.beta_max = 20 * s.pts[0].beta_j;
    for (int dir : {1, -1}) {
      const Branch br = continue_branch(s.prob, s.pts[0], dir, cfg);
      CHECK(br.termination == Termination::BetaCeiling);
      CHECK(br.points.size() >= 3u);
      CHECK(static_cast<int>(br.points.size()) <= cfg.max_points);
      for (const auto& bp : br.points) {
        CHECK(bp.residual < 1e-10);
        CHECK(bp.strictly_inside());
        CHECK(bp.nodal.count == 1);
        CHECK(bp.nodal.simple);
        CHECK(bp.h1_u1 * bp.h1_u1 < s.p.mu * s.g.ball_measure);
        CHECK(bp.h1_u2 * bp.h1_u2 < s.p.mu * s.g.ball_measure);
      }
      CHECK(br.points.back().state.beta >= cfg.beta_max);
      const auto decay = overlap_decay(br);
      REQUIRE(decay.size() >= 2u);
      CHECK(decay.back().overlap < decay.front().overlap);
    }
  }

  TEST_CASE("point budget stops the run") {
    Setup s;
    BranchConfig cfg;
    cfg.max_points = 4;
    const Branch br = continue_branch(s.prob, s.pts[0], 1, cfg);
    CHECK(br.termination == Termination::PointBudget);
    CHECK(br.points.size() == 4u);
  }

  TEST_CASE("arclength inner product includes the beta term") {
    Setup s;
    const StateFields x = constant_fields(s.g.n, 0, 0, 2.0), y = constant_fields(s.g.n, 0, 0, 3.0);
    CHECK(arclength_inner(s.prob, x, y) == doctest::Approx(6.0 * s.g.ball_measure));
    const StateFields z = constant_fields(s.g.n, 1.0, 2.0, 0.0);
    CHECK(arclength_inner(s.prob, z, z) == doctest::Approx(5.0 * s.g.ball_measure));
  }

  TEST_CASE("termination names") {
    CHECK(to_string(Termination::BetaCeiling) == "beta ceiling");
    CHECK(to_string(Termination::NodalChange) == "nodal change");
  }
}
