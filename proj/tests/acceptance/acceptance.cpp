// One line per acceptance criterion; exit status 1 if any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <future>
#include <random>
#include <sstream>
#include <thread>
#include <string>
#include <vector>

#include "core/appendix_verifier.hpp"
#include "core/bifurcation_points.hpp"
#include "core/branch_continuation.hpp"
#include "core/limit_profile.hpp"
#include "core/linearization.hpp"

using namespace lvbif;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::vector<EigenPair> spectrum_on(const RadialGrid& g, int k) {
  return eigenpairs(assemble_neumann_laplacian(g), g, k);
}

Outcome spectral_oracle() {
  bool ok = true;
  double worst_rel = 0, lo = 1e9, hi = -1e9;
  for (int dim : {2, 3}) {
    double err[3][4];
    const int ns[3] = {256, 512, 1024};
    for (int t = 0; t < 3; ++t) {
      const RadialGrid g = build_grid(dim, ns[t]);
      const auto e = spectrum_on(g, 3);
      for (int j = 1; j <= 3; ++j) err[t][j] = std::abs(e[j].lambda - bessel_oracle(dim, j));
    }
    for (int j = 1; j <= 3; ++j) {
      for (int t = 0; t < 2; ++t) {
        const double order = std::log2(err[t][j] / err[t + 1][j]);
        lo = std::min(lo, order);
        hi = std::max(hi, order);
        ok = ok && order >= 1.8 && order <= 2.2;
      }
      const double rel = err[2][j] / bessel_oracle(dim, j);
      worst_rel = std::max(worst_rel, rel);
      ok = ok && rel < 1e-5;
    }
  }
  return {ok, "orders in [" + fmt("%.3f", lo) + ", " + fmt("%.3f", hi) + "], worst relative error at n=1024 " +
                  fmt("%.2e", worst_rel)};
}

Outcome closed_form() {
  std::mt19937_64 rng(1729);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0, worst_close = 0;
  auto scaled = [](const Matrix2& x, const Matrix2& v, double d1, double d2) {
    return eigen_residual(x, v, d1, d2) / (x.max_abs() * v.max_abs());
  };
  for (int k = 0; k < 1000; ++k) {
    const double mu = std::exp(6 * u(rng) - 3), sigma = mu * std::exp(3 * u(rng));
    const double gamma = std::exp(4 * u(rng) - 2), alpha = gamma * std::exp(3 * u(rng) + 1e-6);
    const Params p = validate_params(mu, sigma, alpha, gamma, 2 + k % 2);
    const double beta = p.beta_min() * (1 + std::exp(20 * u(rng) - 12));
    const double lambda = std::exp(9 * u(rng));
    const auto s = spectral_split(p, beta);
    const Matrix2 a = interaction_matrix(p, beta);
    worst = std::max(worst, scaled(a, s.Q, s.delta1, s.delta2));
    worst = std::max(worst, scaled(adjoint_matrix(p, beta), s.P, s.delta1, s.delta2));
    // (m, 1) is the δ1 eigenvector: second row of A (m, 1) = δ1.
    worst = std::max(worst, std::abs(a.a21 * s.m + a.a22 - s.delta1) / (std::abs(a.a21 * s.m) + a.a22));
    const auto is = index_spectrum(p, beta, lambda);
    worst = std::max(worst, scaled(is.D, is.R, is.delta1_l, is.delta2_l));
    const Matrix2 d1 = index_matrix(p, beta, 1.0);
    worst = std::max(worst, std::max({std::abs(d1.a11 + a.a11), std::abs(d1.a12 + a.a12), std::abs(d1.a21 + a.a21),
                                      std::abs(d1.a22 + a.a22)}) /
                                a.max_abs());
    const auto one = index_spectrum(p, beta, 1.0);
    worst_close = std::max(worst_close, std::abs(one.delta2_l + s.delta1) / std::abs(s.delta1));
  }
  const Params w = validate_params(1, 1, 2, 1, 2);
  const auto s = spectral_split(w, 2.0);
  const double worked = std::max({std::abs(s.a - 3.0 / 7), std::abs(s.b - 1.0 / 7), std::abs(s.delta1 + 3.0 / 7),
                                  std::abs(s.delta2 - 1), std::abs(s.m + 2)});
  return {worst < 1e-12 && worst_close < 1e-12 && worked < 1e-14,
          "identity residual " + fmt("%.2e", worst) + ", delta2(beta,1)+delta1 " + fmt("%.2e", worst_close) +
              ", worked case " + fmt("%.2e", worked)};
}

Outcome appendix_sweep() {
  SweepConfig cfg;
  cfg.workers = std::max(1u, std::thread::hardware_concurrency());
  const SweepReport r = run_appendix_sweep(cfg);
  bool ok = r.theorems_hold();
  long fewest = -1;
  const char* required[] = {"g > 0", "h > 0 (interior)", "H < 0", "delta1(beta,lambda) < 0",
                            "d delta2/d lambda < 0", "d delta2/d beta > 0", "alpha b - gamma a < 0",
                            "-delta1 increasing (finite differences)"};
  for (const char* name : required) {
    const auto it = std::find_if(r.theorem_checks.begin(), r.theorem_checks.end(),
                                 [&](const CheckTally& t) { return t.name == name; });
    if (it == r.theorem_checks.end()) return {false, std::string("missing check ") + name};
    ok = ok && it->violations == 0;
    if (std::string(name).rfind("-delta1", 0) != 0) {
      fewest = fewest < 0 ? it->checked : std::min(fewest, it->checked);
      ok = ok && it->checked >= 100000;
    }
  }
  long violations = 0;
  for (const auto& t : r.theorem_checks) violations += t.violations;
  return {ok, std::to_string(violations) + " violations, at least " + std::to_string(fewest) +
                  " points per inequality"};
}

struct Family {
  Params p;
  RadialGrid g;
  std::vector<EigenPair> e;
  std::vector<BifurcationPoint> pts;
};

Family family(double mu, int n) {
  Family f{validate_params(mu, mu, 2, 1, 2), build_grid(2, n), {}, {}};
  f.e = spectrum_on(f.g, 4);
  f.pts = bifurcation_points(f.p, f.e);
  return f;
}

Outcome bifurcation_points_check() {
  const Family a = family(16, 512), b = family(64, 512);
  bool ok = a.pts.size() == 1 && b.pts.size() == 2;
  if (!ok) return {false, "point counts " + std::to_string(a.pts.size()) + ", " + std::to_string(b.pts.size())};
  ok = ok && b.pts[0].beta_j < b.pts[1].beta_j;
  double worst_res = 0, min_gap = 1e9;
  int worst_small = 1;
  for (const Family* f : {&a, &b}) {
    const EllipticProblem prob(f->p, f->g);
    for (const auto& bp : f->pts) {
      worst_res = std::max(worst_res, std::abs(-delta1(f->p, bp.beta_j) - bp.lambda_j) / bp.lambda_j);
      ok = ok && bp.diagnostics.index_left == -1 && bp.diagnostics.index_right == 1;
      const KernelReport kr = kernel_dimension(prob, bp);
      if (kr.small_count != 1) worst_small = kr.small_count;
      min_gap = std::min(min_gap, kr.gap_orders);
      ok = ok && kr.small_count == 1 && kr.gap_orders >= 4.0;
    }
  }
  ok = ok && worst_res < 1e-12;
  return {ok, "k = 1 and k = 2, defining-equation residual " + fmt("%.2e", worst_res) + ", kernel dimension " +
                  std::to_string(worst_small) + " with gap " + fmt("%.1f", min_gap) + " orders"};
}

Outcome instability() {
  bool ok = true;
  double worst = 0, max_leading = -1e300;
  for (double mu : {16.0, 64.0}) {
    const Family f = family(mu, 512);
    const EllipticProblem prob(f.p, f.g);
    const double b1 = f.pts.front().beta_j;
    for (double beta : {0.5 * (f.p.beta_min() + b1), b1, 10 * b1}) {
      const ConstantState c = constant_state(f.p, beta);
      const StabilityReport sr = linearized_spectrum(prob, constant_fields(f.g.n, c.a, c.b, beta), 2);
      const double d1 = delta1(f.p, beta);
      worst = std::max(worst, std::abs(sr.leading.real() - d1) / std::abs(d1));
      max_leading = std::max(max_leading, sr.leading.real());
      ok = ok && sr.unstable && sr.leading.real() < 0;
    }
  }
  ok = ok && worst < 1e-4;
  return {ok, "leading vs delta1 relative " + fmt("%.2e", worst) + ", largest leading eigenvalue " +
                  fmt("%.4g", max_leading)};
}

struct BranchRun {
  Family f = family(16, 512);
  Branch plus, minus;
};

BranchRun& branches() {
  static BranchRun run = [] {
    BranchRun r;
    const EllipticProblem prob(r.f.p, r.f.g);
    auto fut = std::async(std::launch::async, [&] { return continue_branch(prob, r.f.pts.at(0), -1); });
    r.plus = continue_branch(prob, r.f.pts.at(0), 1);
    r.minus = fut.get();
    return r;
  }();
  return run;
}

Outcome branch_invariants() {
  BranchRun& r = branches();
  const double b1 = r.f.pts[0].beta_j, bound = r.f.p.mu * r.f.g.ball_measure;
  bool ok = true;
  double worst_res = 0, reach = 1e300;
  std::size_t steps = 0;
  for (const Branch* br : {&r.plus, &r.minus}) {
    ok = ok && !br->points.empty();
    double top = 0;
    for (const auto& bp : br->points) {
      worst_res = std::max(worst_res, bp.residual);
      ok = ok && bp.residual < 1e-10 && bp.strictly_inside() && bp.nodal.count == 1 && bp.nodal.simple &&
           bp.h1_u1 * bp.h1_u1 < bound && bp.h1_u2 * bp.h1_u2 < bound;
      top = std::max(top, bp.state.beta);
    }
    reach = std::min(reach, top / b1);
    steps = std::max(steps, br->points.size());
    ok = ok && top >= 10 * b1 && br->points.size() <= 500;
  }
  return {ok, "both directions: max residual " + fmt("%.2e", worst_res) + ", reach " + fmt("%.0f", reach) +
                  " beta_1 in at most " + std::to_string(steps) + " points"};
}

Outcome limit_configuration() {
  BranchRun& r = branches();
  const double b1 = r.f.pts[0].beta_j;
  bool ok = true;
  double min_factor = 1e300, max_ratio = 0;
  for (const Branch* br : {&r.plus, &r.minus}) {
    const LimitProfile lp = solve_limit_equation(r.f.p, r.f.g, r.f.e[1], branch_orientation(r.f.pts[0], r.f.p, br->direction));
    const NodalDiagnostic nd = nodal_count(lp.w, r.f.g);
    ok = ok && nd.count == 1 && nd.simple;
    const BranchPoint* near2 = nullptr;
    const BranchPoint* top = nullptr;
    for (const auto& bp : br->points) {
      if (!near2 || std::abs(bp.state.beta - 2 * b1) < std::abs(near2->state.beta - 2 * b1)) near2 = &bp;
      if (!top || bp.state.beta > top->state.beta) top = &bp;
    }
    const double factor = segregation_distance(r.f.p, r.f.g, *near2, lp) / segregation_distance(r.f.p, r.f.g, *top, lp);
    const double ratio = top->overlap / near2->overlap;
    min_factor = std::min(min_factor, factor);
    max_ratio = std::max(max_ratio, ratio);
    ok = ok && factor >= 3 && ratio < 0.1;
  }
  return {ok, "profile has 1 simple root, distance shrinks by " + fmt("%.3g", min_factor) + "x, overlap ratio " +
                  fmt("%.2e", max_ratio)};
}

Outcome double_implementations() {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Params p = validate_params(16, 16, 2, 1, 2);
  const RadialGrid g = build_grid(2, 512);
  const EllipticProblem prob(p, g);
  double worst_res = 0;
  for (int k = 0; k < 20; ++k) {
    StateFields s{std::vector<double>(g.n), std::vector<double>(g.n), 20 + 1000 * u(rng)};
    for (int i = 0; i < g.n; ++i) s.u1[i] = u(rng), s.u2[i] = u(rng);
    const FieldPair a = prob.residual(s), b = prob.residual_rowwise(s), sc = prob.residual_scale(s);
    for (int i = 0; i < g.n; ++i)
      worst_res = std::max({worst_res, std::abs(a.u1[i] - b.u1[i]) / sc.u1[i], std::abs(a.u2[i] - b.u2[i]) / sc.u2[i]});
  }
  const LimitReaction f(p);
  double worst_f = 0;
  for (int k = 0; k < 10000; ++k) {
    const double s = 6 * u(rng) - 3;
    worst_f = std::max(worst_f, std::abs(f(s) - limit_reaction_alt(p.mu, p.gamma, p.alpha, s)) / std::max(1.0, std::abs(f(s))));
  }
  // Jacobian against central differences on a smaller grid, every column.
  const RadialGrid gs = build_grid(2, 64);
  const EllipticProblem ps(p, gs);
  StateFields s{std::vector<double>(gs.n), std::vector<double>(gs.n), 300.0};
  for (int i = 0; i < gs.n; ++i) s.u1[i] = u(rng), s.u2[i] = u(rng);
  const BandedMatrix jac = ps.jacobian(s);
  const std::vector<double> x = interleave(s.u1, s.u2);
  double worst_j = 0;
  for (int c = 0; c < 2 * gs.n; ++c) {
    const double h = 1e-6 * std::max(1.0, std::abs(x[c]));
    std::vector<double> xp = x, xm = x;
    xp[c] += h;
    xm[c] -= h;
    StateFields sp{{}, {}, s.beta}, sm{{}, {}, s.beta};
    deinterleave(xp, sp.u1, sp.u2);
    deinterleave(xm, sm.u1, sm.u2);
    const FieldPair rp = ps.residual(sp), rm = ps.residual(sm);
    const auto fp = interleave(rp.u1, rp.u2), fm = interleave(rm.u1, rm.u2);
    double colmax = 0;
    for (int row = 0; row < 2 * gs.n; ++row) colmax = std::max(colmax, std::abs(jac.get(row, c)));
    for (int row = 0; row < 2 * gs.n; ++row)
      worst_j = std::max(worst_j, std::abs((fp[row] - fm[row]) / (2 * h) - jac.get(row, c)) / colmax);
  }
  return {worst_res < 1e-12 && worst_f < 1e-12 && worst_j < 1e-6,
          "residual " + fmt("%.2e", worst_res) + ", limit reaction " + fmt("%.2e", worst_f) + ", Jacobian " +
              fmt("%.2e", worst_j)};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"spectral oracle", spectral_oracle},
      {"closed-form consistency", closed_form},
      {"appendix sweep", appendix_sweep},
      {"bifurcation points", bifurcation_points_check},
      {"instability of the constant state", instability},
      {"branch invariants", branch_invariants},
      {"limit configuration", limit_configuration},
      {"double implementations", double_implementations},
  };
  int failed = 0, index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %d %s: %s (%s) [%.1fs]\n", index, o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %d criteria passed\n", index - failed, index);
  return failed ? 1 : 0;
}
