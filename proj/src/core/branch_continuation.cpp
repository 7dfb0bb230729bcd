#include "core/branch_continuation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "core/errors.hpp"

namespace lvbif {

std::string to_string(Termination t) {
  switch (t) {
    case Termination::BetaCeiling: return "beta ceiling";
    case Termination::StepFailure: return "step failure";
    case Termination::LoopDetected: return "loop detected";
    case Termination::PointBudget: return "point budget";
    case Termination::NodalChange: return "nodal change";
  }
  return "unknown";
}

namespace {

double h1_seminorm(const RadialGrid& g, const std::vector<double>& u) {
  double s = 0.0;
  for (int i = 0; i + 1 < g.n; ++i) {
    const double d = u[i + 1] - u[i];
    s += g.rho[i] * d * d / g.h;
  }
  return std::sqrt(s * g.dim * g.ball_measure);
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

struct Border {
  std::vector<double> row;  // interleaved, weights included
  double row_beta = 0.0;
  double target = 0.0;

  double eval(const StateFields& s) const {
    double c = row_beta * s.beta;
    for (std::size_t i = 0; i < s.u1.size(); ++i) c += row[2 * i] * s.u1[i] + row[2 * i + 1] * s.u2[i];
    return c - target;
  }
  double scale(const StateFields& s) const {
    double c = std::abs(row_beta * s.beta);
    for (std::size_t i = 0; i < s.u1.size(); ++i)
      c += std::abs(row[2 * i] * s.u1[i]) + std::abs(row[2 * i + 1] * s.u2[i]);
    return std::max({c, std::abs(target), 1e-300});
  }
};

struct CorrectorResult {
  int iterations = 0;
  double residual = 0.0;
  double constraint = 0.0;
};

// Bordered Newton: F(u, β) = 0 together with one linear constraint.
CorrectorResult correct(const EllipticProblem& prob, StateFields& s, const Border& border, int max_iter,
                        double tol) {
  const int n = prob.n();
  CorrectorResult out;
  for (int it = 0;; ++it) {
    if (!(s.beta > 0.0)) throw SolverError("corrector: beta left the positive axis");
    const FieldPair r = prob.residual(s);
    std::vector<double> rv = interleave(r.u1, r.u2);
    const double res = max_abs(rv);
    const double c = border.eval(s);
    out.residual = res;
    out.constraint = std::abs(c) / border.scale(s);
    if (!std::isfinite(res)) throw SolverError("corrector: non-finite residual", res);
    const double scale = std::max(max_abs(s.u1), max_abs(s.u2));
    if (res <= tol && out.constraint <= 1e-12) return out;
    if (it >= max_iter) throw SolverError("corrector: no convergence", res);
    const BandedMatrix jac = prob.jacobian(s);
    const BandedLU lu(jac);
    const std::vector<double> jb = prob.beta_derivative(s);
    std::vector<double> z = jb;
    lu.solve(z);
    double denom = border.row_beta;
    for (int i = 0; i < 2 * n; ++i) denom -= border.row[i] * z[i];
    auto block_solve = [&](std::vector<double> f, double g, std::vector<double>& dx, double& db) {
      lu.solve(f);
      double num = g;
      for (int i = 0; i < 2 * n; ++i) num -= border.row[i] * f[i];
      db = num / denom;
      dx.resize(2 * n);
      for (int i = 0; i < 2 * n; ++i) dx[i] = f[i] - db * z[i];
    };
    std::vector<double> rhs(2 * n);
    for (int i = 0; i < 2 * n; ++i) rhs[i] = -rv[i];
    std::vector<double> dx;
    double db = 0.0;
    block_solve(rhs, -c, dx, db);
    // One refinement sweep on the full bordered system.
    std::vector<double> jdx(2 * n);
    jac.multiply(dx, jdx);
    std::vector<double> r1(2 * n);
    double r2 = -c - border.row_beta * db;
    for (int i = 0; i < 2 * n; ++i) {
      r1[i] = rhs[i] - jdx[i] - jb[i] * db;
      r2 -= border.row[i] * dx[i];
    }
    std::vector<double> ex;
    double eb = 0.0;
    block_solve(r1, r2, ex, eb);
    for (int i = 0; i < 2 * n; ++i) dx[i] += ex[i];
    db += eb;
    for (int i = 0; i < n; ++i) {
      s.u1[i] += dx[2 * i];
      s.u2[i] += dx[2 * i + 1];
    }
    s.beta += db;
    out.iterations = it + 1;
    if (max_abs(dx) <= 1e-13 * std::max(1.0, scale) && std::abs(db) <= 1e-13 * std::abs(s.beta)) {
      const double after = prob.residual_norm(s);
      if (after <= prob.residual_floor(scale) && std::abs(border.eval(s)) / border.scale(s) <= 1e-12) {
        out.residual = after;
        out.constraint = std::abs(border.eval(s)) / border.scale(s);
        return out;
      }
    }
  }
}

std::vector<double> weighted_row(const RadialGrid& g, const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> row(2 * g.n);
  for (int i = 0; i < g.n; ++i) {
    row[2 * i] = g.weights[i] * a[i];
    row[2 * i + 1] = g.weights[i] * b[i];
  }
  return row;
}

struct Vec {
  std::vector<double> u1, u2;
  double beta = 0.0;
};

Vec difference(const StateFields& x, const StateFields& y) {
  Vec d{std::vector<double>(x.u1.size()), std::vector<double>(x.u2.size()), x.beta - y.beta};
  for (std::size_t i = 0; i < x.u1.size(); ++i) {
    d.u1[i] = x.u1[i] - y.u1[i];
    d.u2[i] = x.u2[i] - y.u2[i];
  }
  return d;
}

double vec_norm(const EllipticProblem& prob, const Vec& v) {
  const RadialGrid& g = prob.grid();
  return std::sqrt(weighted_inner(g, v.u1, v.u1) + weighted_inner(g, v.u2, v.u2) +
                   g.ball_measure * v.beta * v.beta);
}

}  // namespace

double arclength_inner(const EllipticProblem& prob, const StateFields& x, const StateFields& y) {
  const RadialGrid& g = prob.grid();
  return weighted_inner(g, x.u1, y.u1) + weighted_inner(g, x.u2, y.u2) + g.ball_measure * x.beta * y.beta;
}

double distance_to_stem(const EllipticProblem& prob, const StateFields& s) {
  const Params& p = prob.params();
  if (!(s.beta > p.beta_min() * (1.0 + 1e-12))) return INFINITY;
  const ConstantState c = constant_state(p, s.beta);
  const RadialGrid& g = prob.grid();
  double acc = 0.0;
  for (int i = 0; i < g.n; ++i) {
    const double d1 = s.u1[i] - c.a, d2 = s.u2[i] - c.b;
    acc += g.weights[i] * (d1 * d1 + d2 * d2);
  }
  return std::sqrt(acc);
}

BranchPoint measure_point(const EllipticProblem& prob, const StateFields& s, double arclength) {
  const Params& p = prob.params();
  const RadialGrid& g = prob.grid();
  BranchPoint bp;
  bp.s = arclength;
  bp.state = s;
  bp.residual = prob.residual_norm(s);
  bp.sup_u1 = *std::max_element(s.u1.begin(), s.u1.end());
  bp.sup_u2 = *std::max_element(s.u2.begin(), s.u2.end());
  bp.min_u1 = *std::min_element(s.u1.begin(), s.u1.end());
  bp.min_u2 = *std::min_element(s.u2.begin(), s.u2.end());
  bp.h1_u1 = h1_seminorm(g, s.u1);
  bp.h1_u2 = h1_seminorm(g, s.u2);
  double ov = 0.0;
  for (int i = 0; i < g.n; ++i) ov += g.weights[i] * s.u1[i] * s.u1[i] * s.u2[i];
  bp.overlap = ov;
  std::vector<double> v(g.n), w(g.n);
  const double cv1 = s.beta * p.gamma - p.mu, cv2 = s.beta * p.alpha - p.mu;
  for (int i = 0; i < g.n; ++i) {
    v[i] = cv1 * s.u1[i] - cv2 * s.u2[i];
    w[i] = p.gamma * s.u1[i] - p.alpha * s.u2[i];
  }
  bp.nodal = nodal_count(v, g);
  bp.nodal.w = std::move(w);
  return bp;
}

BranchPoint branch_switch(const EllipticProblem& prob, const BifurcationPoint& origin, double amplitude,
                          int direction, double* used_coefficient) {
  const RadialGrid& g = prob.grid();
  const double hh = weighted_inner(g, origin.h0.u1, origin.h0.u1) + weighted_inner(g, origin.h0.u2, origin.h0.u2);
  const double unit = std::min(origin.a / std::abs(origin.m_j), origin.b);
  double amp = amplitude;
  std::string last_error = "no attempt";
  for (int attempt = 0; attempt < 4; ++attempt, amp *= 2.0) {
    const double t = (direction >= 0 ? 1.0 : -1.0) * amp * unit;
    Border border{weighted_row(g, origin.h0.u1, origin.h0.u2), 0.0, t * hh};
    StateFields s = constant_fields(g.n, origin.a, origin.b, origin.beta_j);
    for (int i = 0; i < g.n; ++i) {
      s.u1[i] += t * origin.h0.u1[i];
      s.u2[i] += t * origin.h0.u2[i];
    }
    try {
      const CorrectorResult cr = correct(prob, s, border, 30, 1e-11);
      if (distance_to_stem(prob, s) < 0.1 * std::abs(t) * std::sqrt(hh)) {
        last_error = "corrector fell back onto the constant stem";
        continue;
      }
      if (used_coefficient) *used_coefficient = t;
      StateFields c0 = constant_fields(g.n, origin.a, origin.b, origin.beta_j);
      BranchPoint bp = measure_point(prob, s, direction * vec_norm(prob, difference(s, c0)));
      bp.newton_iterations = cr.iterations;
      bp.constraint_residual = cr.constraint;
      return bp;
    } catch (const SolverError& e) {
      last_error = e.what();
    }
  }
  throw SolverError("branch switch failed for j = " + std::to_string(origin.j) + ": " + last_error);
}

Branch continue_branch(const EllipticProblem& prob, const BifurcationPoint& origin, int direction,
                       const BranchConfig& cfg) {
  const Params& p = prob.params();
  const RadialGrid& g = prob.grid();
  Branch br;
  br.j = origin.j;
  br.direction = direction >= 0 ? 1 : -1;
  br.origin = origin;
  const double beta_max = cfg.beta_max > 0.0 ? cfg.beta_max : 1e3 * origin.beta_j;
  const bool nodal_guard = cfg.enforce_nodal && p.equal_rates();

  br.points.push_back(branch_switch(prob, origin, cfg.amplitude, br.direction, &br.switch_amplitude));
  StateFields prev = constant_fields(g.n, origin.a, origin.b, origin.beta_j);
  const double stem_tol = 1e-3 * std::abs(br.switch_amplitude);
  double ds = vec_norm(prob, difference(br.points.back().state, prev));
  double s_acc = std::abs(br.points.back().s);

  while (true) {
    const StateFields& cur = br.points.back().state;
    if (cur.beta >= beta_max) {
      br.termination = Termination::BetaCeiling;
      break;
    }
    if (static_cast<int>(br.points.size()) >= cfg.max_points) {
      br.termination = Termination::PointBudget;
      break;
    }
    Vec t = difference(cur, prev);
    const double tn = vec_norm(prob, t);
    for (double& x : t.u1) x /= tn;
    for (double& x : t.u2) x /= tn;
    t.beta /= tn;

    bool accepted = false;
    bool nodal_failure = false;
    while (!accepted) {
      ds = std::min(ds, 0.2 * std::sqrt(g.ball_measure) * cur.beta);
      if (ds < cfg.ds_min) break;
      StateFields pred = cur;
      for (int i = 0; i < g.n; ++i) {
        pred.u1[i] += ds * t.u1[i];
        pred.u2[i] += ds * t.u2[i];
      }
      pred.beta += ds * t.beta;
      Border border{weighted_row(g, t.u1, t.u2), g.ball_measure * t.beta, 0.0};
      border.target = border.eval(pred);
      StateFields x = pred;
      CorrectorResult cr;
      try {
        cr = correct(prob, x, border, cfg.max_corrector, cfg.newton_tol);
      } catch (const SolverError&) {
        ds *= 0.5;
        continue;
      }
      if (vec_norm(prob, difference(x, pred)) > ds) {
        ds *= 0.5;
        continue;
      }
      BranchPoint bp = measure_point(prob, x, 0.0);
      if (nodal_guard && (bp.nodal.count != br.j || !bp.nodal.simple)) {
        nodal_failure = true;
        ds *= 0.5;
        continue;
      }
      nodal_failure = false;
      const double step = vec_norm(prob, difference(x, cur));
      s_acc += step;
      bp.s = br.direction * s_acc;
      bp.newton_iterations = cr.iterations;
      bp.constraint_residual = cr.constraint;
      if (distance_to_stem(prob, x) < stem_tol) {
        br.termination = Termination::LoopDetected;
        br.note = "returned to the constant stem at beta = " + std::to_string(x.beta);
        return br;
      }
      prev = cur;
      br.points.push_back(std::move(bp));
      accepted = true;
      if (cr.iterations <= cfg.fast_iterations) ds *= cfg.grow;
    }
    if (!accepted) {
      if (nodal_failure) {
        br.termination = Termination::NodalChange;
        br.note = "nodal count of v changed near beta = " + std::to_string(cur.beta);
      } else {
        br.termination = Termination::StepFailure;
        br.note = "step size fell below the minimum near beta = " + std::to_string(cur.beta);
      }
      break;
    }
  }
  return br;
}

std::vector<OverlapSample> overlap_decay(const Branch& branch) {
  std::vector<OverlapSample> out;
  for (const auto& bp : branch.points) out.push_back({bp.state.beta, bp.overlap});
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.beta < b.beta; });
  return out;
}

}  // namespace lvbif
