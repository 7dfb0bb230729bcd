#include "core/radial_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "core/banded_lu.hpp"
#include "core/errors.hpp"

namespace lvbif {

double unit_ball_measure(int dim) {
  const double d = dim;
  return std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

RadialGrid build_grid(int dim, int n) {
  if (dim < 2) throw ValidationError("grid dimension must be >= 2");
  if (n < 16) throw ValidationError("grid needs at least 16 nodes (got " + std::to_string(n) + ")");
  RadialGrid g;
  g.dim = dim;
  g.n = n;
  g.h = 1.0 / (n - 0.5);
  g.ball_measure = unit_ball_measure(dim);
  g.r.resize(n);
  g.rho.resize(n - 1);
  g.vol.resize(n);
  g.weights.resize(n);
  for (int i = 0; i < n; ++i) g.r[i] = (i + 0.5) * g.h;
  g.r[n - 1] = 1.0;
  for (int i = 0; i + 1 < n; ++i) g.rho[i] = std::pow((i + 1) * g.h, dim - 1);
  const double area = dim * g.ball_measure;
  for (int i = 0; i < n; ++i) {
    const double lo = i == 0 ? 0.0 : i * g.h;
    const double hi = i == n - 1 ? 1.0 : (i + 1) * g.h;
    g.vol[i] = (std::pow(hi, dim) - std::pow(lo, dim)) / dim;
    g.weights[i] = g.vol[i] * area;
  }
  return g;
}

double weighted_inner(const RadialGrid& g, std::span<const double> u, std::span<const double> v) {
  double s = 0.0;
  for (int i = 0; i < g.n; ++i) s += g.weights[i] * u[i] * v[i];
  return s;
}

double weighted_integral(const RadialGrid& g, std::span<const double> u) {
  double s = 0.0;
  for (int i = 0; i < g.n; ++i) s += g.weights[i] * u[i];
  return s;
}

DiscreteOperator assemble_neumann_laplacian(const RadialGrid& g) {
  DiscreteOperator op;
  op.n = g.n;
  op.h = g.h;
  op.rho = g.rho;
  op.vol = g.vol;
  op.diag.assign(g.n, 0.0);
  op.lower.resize(g.n - 1);
  op.upper.resize(g.n - 1);
  op.sym_off.resize(g.n - 1);
  for (int i = 0; i + 1 < g.n; ++i) {
    const double c = g.rho[i] / g.h;
    op.diag[i] += c / g.vol[i];
    op.diag[i + 1] += c / g.vol[i + 1];
    op.upper[i] = -c / g.vol[i];
    op.lower[i] = -c / g.vol[i + 1];
    op.sym_off[i] = -c / std::sqrt(g.vol[i] * g.vol[i + 1]);
  }
  return op;
}

void DiscreteOperator::apply(std::span<const double> u, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  for (int i = 0; i + 1 < n; ++i) {
    const double flux = rho[i] * (u[i + 1] - u[i]) / h;
    out[i] -= flux;
    out[i + 1] += flux;
  }
  for (int i = 0; i < n; ++i) out[i] /= vol[i];
}

std::vector<double> DiscreteOperator::apply(std::span<const double> u) const {
  std::vector<double> out(n);
  apply(u, out);
  return out;
}

int sturm_count(const DiscreteOperator& op, double x) {
  int count = 0;
  double d = 1.0;
  for (int i = 0; i < op.n; ++i) {
    const double e2 = i == 0 ? 0.0 : op.sym_off[i - 1] * op.sym_off[i - 1];
    d = (op.diag[i] - x) - (i == 0 ? 0.0 : e2 / d);
    if (d == 0.0) d = -1e-300;
    if (d < 0.0) ++count;
  }
  return count;
}

int count_sign_changes(std::span<const double> f, double rel) {
  double m = 0.0;
  for (double v : f) m = std::max(m, std::abs(v));
  const double thr = rel * m;
  int changes = 0, last = 0;
  for (double v : f) {
    if (std::abs(v) <= thr) continue;
    const int s = v > 0.0 ? 1 : -1;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

namespace {

double bisect_eigenvalue(const DiscreteOperator& op, int index, double lo, double hi) {
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sturm_count(op, mid) > index) hi = mid;
    else lo = mid;
  }
  return 0.5 * (lo + hi);
}

// Inverse iteration on the symmetric form; returns y with ||y||_2 = 1.
std::vector<double> inverse_iteration(const DiscreteOperator& op, double lambda, double scale) {
  const int n = op.n;
  BandedMatrix t(n, 1, 1);
  // A tiny offset keeps the shifted matrix nonsingular without spoiling convergence.
  const double shift = lambda + 1e-13 * scale;
  for (int i = 0; i < n; ++i) {
    t.at(i, i) = op.diag[i] - shift;
    if (i + 1 < n) {
      t.at(i, i + 1) = op.sym_off[i];
      t.at(i + 1, i) = op.sym_off[i];
    }
  }
  BandedLU lu(t);
  std::vector<double> y(n);
  for (int i = 0; i < n; ++i) y[i] = 1.0 + 0.5 * std::cos(0.7 + 1.9 * i);
  for (int it = 0; it < 4; ++it) {
    lu.solve(y);
    double s = 0.0;
    for (double v : y) s += v * v;
    s = std::sqrt(s);
    for (double& v : y) v /= s;
  }
  return y;
}

}  // namespace

std::vector<EigenPair> eigenpairs(const DiscreteOperator& op, const RadialGrid& g, int k) {
  if (k < 0) throw ValidationError("mode count must be >= 0");
  if (k >= op.n) throw ValidationError("mode count exceeds grid size");
  double gersh = 0.0;
  for (int i = 0; i < op.n; ++i) {
    double row = op.diag[i];
    if (i > 0) row += std::abs(op.sym_off[i - 1]);
    if (i + 1 < op.n) row += std::abs(op.sym_off[i]);
    gersh = std::max(gersh, row);
  }
  std::vector<EigenPair> out;
  out.reserve(k + 1);
  EigenPair zero;
  zero.j = 0;
  zero.f.assign(op.n, 1.0);
  out.push_back(zero);
  std::vector<double> kf(op.n);
  for (int j = 1; j <= k; ++j) {
    EigenPair ep;
    ep.j = j;
    ep.lambda = bisect_eigenvalue(op, j, -1e-9 * gersh, gersh * 1.01);
    std::vector<double> y = inverse_iteration(op, ep.lambda, gersh);
    ep.f.resize(op.n);
    for (int i = 0; i < op.n; ++i) ep.f[i] = y[i] / std::sqrt(g.vol[i]);
    double m = 0.0;
    for (double v : ep.f) m = std::max(m, std::abs(v));
    const double sgn = ep.f[0] > 0.0 ? 1.0 : -1.0;
    for (double& v : ep.f) v *= sgn / m;
    op.apply(ep.f, kf);
    double res = 0.0;
    for (int i = 0; i < op.n; ++i) res = std::max(res, std::abs(kf[i] - ep.lambda * ep.f[i]));
    ep.residual = res;
    if (!(res < 1e-7 * std::max(1.0, ep.lambda)))
      throw SolverError("eigenpair " + std::to_string(j) + " did not converge", res);
    if (count_sign_changes(ep.f) != j)
      throw SolverError("eigenfunction " + std::to_string(j) + " has the wrong number of sign changes",
                        res);
    out.push_back(std::move(ep));
  }
  return out;
}

double bessel_oracle(int dim, int j) {
  if (dim < 2) throw ValidationError("oracle dimension must be >= 2");
  if (j < 0) throw ValidationError("oracle index must be >= 0");
  if (j == 0) return 0.0;
  const double nu = dim / 2.0;
  auto fn = [nu](double x) { return std::cyl_bessel_j(nu, x); };
  const double step = 0.05;
  double x0 = 1e-3, f0 = fn(x0);
  int found = 0;
  for (int it = 0; it < 200000; ++it) {
    const double x1 = x0 + step, f1 = fn(x1);
    if ((f0 > 0.0) != (f1 > 0.0) || f1 == 0.0) {
      if (++found == j) {
        double lo = x0, hi = x1, flo = f0;
        for (int b = 0; b < 200; ++b) {
          const double mid = 0.5 * (lo + hi);
          if (mid <= lo || mid >= hi) break;
          const double fm = fn(mid);
          if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        const double root = 0.5 * (lo + hi);
        return root * root;
      }
    }
    x0 = x1;
    f0 = f1;
  }
  throw SolverError("bessel oracle: could not bracket root " + std::to_string(j));
}

std::vector<double> extrapolated_eigenvalues(int dim, int n, int k) {
  const RadialGrid gc = build_grid(dim, n), gf = build_grid(dim, 2 * n);
  const auto ec = eigenpairs(assemble_neumann_laplacian(gc), gc, k);
  const auto ef = eigenpairs(assemble_neumann_laplacian(gf), gf, k);
  const double hc2 = gc.h * gc.h, hf2 = gf.h * gf.h;
  std::vector<double> out(k + 1, 0.0);
  for (int j = 1; j <= k; ++j) out[j] = (ef[j].lambda * hc2 - ec[j].lambda * hf2) / (hc2 - hf2);
  return out;
}

}  // namespace lvbif
