#include "core/elliptic_solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "core/errors.hpp"

namespace lvbif {

StateFields constant_fields(int n, double u1, double u2, double beta) {
  return StateFields{std::vector<double>(n, u1), std::vector<double>(n, u2), beta};
}

EllipticProblem::EllipticProblem(const Params& p, RadialGrid grid)
    : p_(p), grid_(std::move(grid)), op_(assemble_neumann_laplacian(grid_)) {
  for (int i = 0; i < grid_.n; ++i) {
    double row = std::abs(op_.diag[i]);
    if (i > 0) row += std::abs(op_.lower[i - 1]);
    if (i + 1 < grid_.n) row += std::abs(op_.upper[i]);
    kmax_ = std::max(kmax_, row);
  }
}

void EllipticProblem::check(const StateFields& s) const {
  if (static_cast<int>(s.u1.size()) != grid_.n || static_cast<int>(s.u2.size()) != grid_.n)
    throw ValidationError("state fields do not match the grid size " + std::to_string(grid_.n));
}

FieldPair EllipticProblem::residual(const StateFields& s) const {
  check(s);
  FieldPair r{op_.apply(s.u1), op_.apply(s.u2)};
  for (int i = 0; i < grid_.n; ++i) {
    const auto [f1, f2] = reaction(p_, s.beta, s.u1[i], s.u2[i]);
    r.u1[i] -= f1;
    r.u2[i] -= f2;
  }
  return r;
}

FieldPair EllipticProblem::residual_rowwise(const StateFields& s) const {
  check(s);
  const int n = grid_.n;
  FieldPair r{std::vector<double>(n), std::vector<double>(n)};
  const double ba = s.beta * p_.alpha, bg = s.beta * p_.gamma;
  for (int i = 0; i < n; ++i) {
    double l1 = op_.diag[i] * s.u1[i], l2 = op_.diag[i] * s.u2[i];
    if (i > 0) {
      l1 += op_.lower[i - 1] * s.u1[i - 1];
      l2 += op_.lower[i - 1] * s.u2[i - 1];
    }
    if (i + 1 < n) {
      l1 += op_.upper[i] * s.u1[i + 1];
      l2 += op_.upper[i] * s.u2[i + 1];
    }
    const double x = s.u1[i], y = s.u2[i];
    r.u1[i] = l1 + (p_.mu * x * x - p_.mu * x) + ba * x * y;
    r.u2[i] = l2 + (p_.sigma * y * y - p_.sigma * y) + bg * x * y;
  }
  return r;
}

FieldPair EllipticProblem::residual_scale(const StateFields& s) const {
  check(s);
  const int n = grid_.n;
  FieldPair r{std::vector<double>(n), std::vector<double>(n)};
  const double ba = s.beta * p_.alpha, bg = s.beta * p_.gamma;
  for (int i = 0; i < n; ++i) {
    double l1 = std::abs(op_.diag[i] * s.u1[i]), l2 = std::abs(op_.diag[i] * s.u2[i]);
    if (i > 0) {
      l1 += std::abs(op_.lower[i - 1] * s.u1[i - 1]);
      l2 += std::abs(op_.lower[i - 1] * s.u2[i - 1]);
    }
    if (i + 1 < n) {
      l1 += std::abs(op_.upper[i] * s.u1[i + 1]);
      l2 += std::abs(op_.upper[i] * s.u2[i + 1]);
    }
    const double x = std::abs(s.u1[i]), y = std::abs(s.u2[i]);
    r.u1[i] = l1 + p_.mu * (x + x * x) + ba * x * y;
    r.u2[i] = l2 + p_.sigma * (y + y * y) + bg * x * y;
  }
  return r;
}

double EllipticProblem::residual_norm(const StateFields& s) const {
  const FieldPair r = residual(s);
  double m = 0.0;
  for (int i = 0; i < grid_.n; ++i) m = std::max({m, std::abs(r.u1[i]), std::abs(r.u2[i])});
  return m;
}

double EllipticProblem::residual_floor(double scale) const {
  return 8.0 * std::numeric_limits<double>::epsilon() * kmax_ * std::max(scale, 1e-3);
}

BandedMatrix EllipticProblem::jacobian(const StateFields& s) const {
  check(s);
  const int n = grid_.n;
  BandedMatrix j(2 * n, 2, 2);
  const double ba = s.beta * p_.alpha, bg = s.beta * p_.gamma;
  for (int i = 0; i < n; ++i) {
    const int r1 = 2 * i, r2 = 2 * i + 1;
    const double x = s.u1[i], y = s.u2[i];
    j.at(r1, r1) = op_.diag[i] - p_.mu + 2.0 * p_.mu * x + ba * y;
    j.at(r1, r2) = ba * x;
    j.at(r2, r1) = bg * y;
    j.at(r2, r2) = op_.diag[i] - p_.sigma + 2.0 * p_.sigma * y + bg * x;
    if (i > 0) {
      j.at(r1, r1 - 2) = op_.lower[i - 1];
      j.at(r2, r2 - 2) = op_.lower[i - 1];
    }
    if (i + 1 < n) {
      j.at(r1, r1 + 2) = op_.upper[i];
      j.at(r2, r2 + 2) = op_.upper[i];
    }
  }
  return j;
}

std::vector<double> EllipticProblem::beta_derivative(const StateFields& s) const {
  check(s);
  std::vector<double> d(2 * grid_.n);
  for (int i = 0; i < grid_.n; ++i) {
    const double q = s.u1[i] * s.u2[i];
    d[2 * i] = p_.alpha * q;
    d[2 * i + 1] = p_.gamma * q;
  }
  return d;
}

std::vector<double> interleave(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> x(2 * a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    x[2 * i] = a[i];
    x[2 * i + 1] = b[i];
  }
  return x;
}

void deinterleave(const std::vector<double>& x, std::vector<double>& a, std::vector<double>& b) {
  const std::size_t n = x.size() / 2;
  a.resize(n);
  b.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = x[2 * i];
    b[i] = x[2 * i + 1];
  }
}

namespace {

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

NewtonResult newton_solve(const EllipticProblem& prob, StateFields start, const NewtonOptions& opt) {
  NewtonResult out;
  out.state = std::move(start);
  StateFields& s = out.state;
  const int n = prob.n();
  double res = prob.residual_norm(s);
  out.history.push_back(res);
  if (!std::isfinite(res)) throw SolverError("newton: non-finite residual at the start", res);
  for (int it = 0; it < opt.max_iter && res > opt.tol; ++it) {
    const BandedMatrix jac = prob.jacobian(s);
    BandedLU lu(jac);
    const FieldPair r = prob.residual(s);
    std::vector<double> dx = interleave(r.u1, r.u2);
    lu.solve(dx);
    for (int i = 0; i < n; ++i) {
      s.u1[i] -= dx[2 * i];
      s.u2[i] -= dx[2 * i + 1];
    }
    res = prob.residual_norm(s);
    out.history.push_back(res);
    out.iterations = it + 1;
    if (!std::isfinite(res)) throw SolverError("newton: residual became non-finite", res);
    const double scale = std::max(max_abs(s.u1), max_abs(s.u2));
    if (res > opt.tol && max_abs(dx) <= 1e-13 * std::max(1.0, scale) &&
        res <= prob.residual_floor(scale)) {
      out.at_floor = true;
      break;
    }
  }
  out.residual = res;
  if (res > opt.tol && !out.at_floor) {
    double smin = -1.0;
    try {
      smin = BandedLU(prob.jacobian(s)).smallest_singular_value();
    } catch (const SolverError&) {
      smin = 0.0;
    }
    throw SolverError("newton: no convergence after " + std::to_string(out.iterations) +
                          " iterations (residual " + std::to_string(res) +
                          ", smallest singular value " + std::to_string(smin) + ")",
                      res);
  }
  return out;
}

StabilityReport linearized_spectrum(const EllipticProblem& prob, const StateFields& s, int count) {
  const double res = prob.residual_norm(s);
  if (!(res <= 1e-9))
    throw ValidationError("linearized spectrum needs a solution (residual " + std::to_string(res) + ")");
  const BandedMatrix jac = prob.jacobian(s);
  const int m = jac.size();
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = std::max(0, i - 2); j <= std::min(m - 1, i + 2); ++j) dense(i, j) = jac.get(i, j);
  Eigen::EigenSolver<Eigen::MatrixXd> es(dense, false);
  if (es.info() != Eigen::Success) throw SolverError("linearized spectrum: eigen solver failed");
  std::vector<std::complex<double>> ev(es.eigenvalues().data(), es.eigenvalues().data() + m);
  std::sort(ev.begin(), ev.end(), [](const auto& x, const auto& y) {
    return x.real() < y.real() || (x.real() == y.real() && x.imag() < y.imag());
  });
  StabilityReport rep;
  const int k = std::clamp(count, 1, m);
  rep.eigenvalues.assign(ev.begin(), ev.begin() + k);
  rep.leading = ev.front();
  rep.unstable = !(rep.leading.real() > 0.0);
  return rep;
}

}  // namespace lvbif
