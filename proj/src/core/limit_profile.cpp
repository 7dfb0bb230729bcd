#include "core/limit_profile.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "core/banded_lu.hpp"
#include "core/errors.hpp"
#include "core/nodal.hpp"

namespace lvbif {

double limit_reaction_alt(double mu, double gamma, double alpha, double s) {
  return mu * s * (1.0 - std::max(s, 0.0) / gamma - std::max(-s, 0.0) / alpha);
}

std::vector<double> limit_residual(const Params& p, const DiscreteOperator& op, const std::vector<double>& w) {
  const LimitReaction f(p);
  std::vector<double> r = op.apply(w);
  for (std::size_t i = 0; i < w.size(); ++i) r[i] -= f(w[i]);
  return r;
}

std::vector<double> limit_residual_alt(const Params& p, const DiscreteOperator& op, const std::vector<double>& w) {
  const int n = op.n;
  std::vector<double> r(n);
  for (int i = 0; i < n; ++i) {
    double l = op.diag[i] * w[i];
    if (i > 0) l += op.lower[i - 1] * w[i - 1];
    if (i + 1 < n) l += op.upper[i] * w[i + 1];
    r[i] = l - limit_reaction_alt(p.mu, p.gamma, p.alpha, w[i]);
  }
  return r;
}

namespace {

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

struct Attempt {
  std::vector<double> w;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

Attempt newton_limit(const Params& p, const DiscreteOperator& op, std::vector<double> w) {
  const LimitReaction f(p);
  const int n = op.n;
  double kmax = 0.0;
  for (int i = 0; i < n; ++i) kmax = std::max(kmax, 2.0 * std::abs(op.diag[i]));
  Attempt a;
  for (int it = 0; it < 60; ++it) {
    std::vector<double> r = limit_residual(p, op, w);
    a.residual = max_abs(r);
    if (!std::isfinite(a.residual)) return a;
    if (a.residual <= 1e-11) {
      a.converged = true;
      break;
    }
    BandedMatrix jac(n, 1, 1);
    for (int i = 0; i < n; ++i) {
      jac.at(i, i) = op.diag[i] - f.derivative(w[i]);
      if (i > 0) jac.at(i, i - 1) = op.lower[i - 1];
      if (i + 1 < n) jac.at(i, i + 1) = op.upper[i];
    }
    try {
      BandedLU lu(jac);
      lu.solve(r);
    } catch (const SolverError&) {
      return a;
    }
    for (int i = 0; i < n; ++i) w[i] -= r[i];
    a.iterations = it + 1;
    const double scale = std::max(1.0, max_abs(w));
    if (max_abs(r) <= 1e-13 * scale) {
      const double after = max_abs(limit_residual(p, op, w));
      a.residual = after;
      a.converged = after <= 1e-10 || after <= 8.0 * 2.2e-16 * kmax * scale;
      break;
    }
  }
  a.w = std::move(w);
  return a;
}

}  // namespace

LimitProfile solve_limit_equation(const Params& p, const RadialGrid& g, const EigenPair& mode, int orientation,
                                  double seed_scale) {
  if (orientation != 1 && orientation != -1) throw ValidationError("orientation must be +1 or -1");
  if (!p.equal_rates()) throw DomainError("limit equation is posed for sigma == mu only");
  if (!(p.mu > mode.lambda)) throw DomainError("limit equation needs mu > lambda_j for a j-nodal solution");
  const DiscreteOperator op = assemble_neumann_laplacian(g);
  const double eps0 = seed_scale > 0.0 ? seed_scale : 0.1 * std::min(p.gamma, p.alpha);
  const double tries[3] = {eps0, 2.0 * eps0, 0.5 * eps0};
  std::string why = "no attempt";
  for (double eps : tries) {
    std::vector<double> seed(mode.f.size());
    for (std::size_t i = 0; i < seed.size(); ++i) seed[i] = orientation * eps * mode.f[i];
    Attempt a = newton_limit(p, op, std::move(seed));
    if (!a.converged) {
      why = "newton did not converge (residual " + std::to_string(a.residual) + ")";
      continue;
    }
    const NodalDiagnostic nd = nodal_count(a.w, g);
    if (nd.vanishing || !nd.simple || nd.count != mode.j) {
      why = "converged to the wrong nodal class (" + std::to_string(nd.count) + " roots)";
      continue;
    }
    if (!(orientation * a.w[0] > 0.0)) {
      why = "converged to the opposite orientation";
      continue;
    }
    LimitProfile lp;
    lp.j = mode.j;
    lp.w = std::move(a.w);
    lp.roots = nd.zero_locations;
    lp.residual = a.residual;
    lp.iterations = a.iterations;
    lp.seed_scale = eps;
    lp.orientation = orientation;
    return lp;
  }
  throw SolverError("limit equation for j = " + std::to_string(mode.j) + ": " + why);
}

int branch_orientation(const BifurcationPoint& origin, const Params& p, int direction) {
  return direction * (p.gamma * origin.m_j - p.alpha) > 0.0 ? 1 : -1;
}

namespace {

std::vector<double> segregation_field(const Params& p, const RadialGrid& g, const BranchPoint& bp,
                                      const LimitProfile& lp) {
  if (static_cast<int>(bp.state.u1.size()) != g.n || static_cast<int>(lp.w.size()) != g.n)
    throw ValidationError("segregation distance: grid mismatch");
  std::vector<double> wb(g.n);
  for (int i = 0; i < g.n; ++i) wb[i] = p.gamma * bp.state.u1[i] - p.alpha * bp.state.u2[i];
  return wb;
}

}  // namespace

double segregation_distance(const Params& p, const RadialGrid& g, const BranchPoint& bp, const LimitProfile& lp) {
  const std::vector<double> wb = segregation_field(p, g, bp, lp);
  double d = 0.0;
  for (int i = 0; i < g.n; ++i) d = std::max(d, std::abs(wb[i] - lp.w[i]));
  return d;
}

double scaled_root_distance(const Params& p, const RadialGrid& g, const BranchPoint& bp, const LimitProfile& lp) {
  const std::vector<double> wb = segregation_field(p, g, bp, lp);
  const double beta = bp.state.beta;
  std::vector<double> v(g.n);
  for (int i = 0; i < g.n; ++i) v[i] = wb[i] - (p.mu / beta) * bp.state.u1[i] + (p.mu / beta) * bp.state.u2[i];
  const NodalDiagnostic nd = nodal_count(v, g);
  return root_distance_cells(nd.zero_locations, lp.roots, g.h);
}

}  // namespace lvbif
