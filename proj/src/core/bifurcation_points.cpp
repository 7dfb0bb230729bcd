#include "core/bifurcation_points.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "core/errors.hpp"
#include "core/linearization.hpp"

namespace lvbif {

int admissible_mode_count(const Params& p, std::span<const double> lambdas) {
  const double s = std::sqrt(p.mu * p.sigma);
  if (lambdas.empty() || lambdas.back() < s)
    throw ValidationError("spectrum too short: need an eigenvalue >= sqrt(mu*sigma) = " + std::to_string(s) +
                          "; request more modes");
  int k = 0;
  for (std::size_t j = 1; j < lambdas.size(); ++j)
    if (lambdas[j] < s) k = static_cast<int>(j);
  return k;
}

int admissible_mode_count(const Params& p, const std::vector<EigenPair>& spectrum) {
  std::vector<double> l;
  for (const auto& e : spectrum) l.push_back(e.lambda);
  return admissible_mode_count(p, l);
}

double solve_bifurcation_beta(const Params& p, double lambda_j) {
  const double sup = std::sqrt(p.mu * p.sigma);
  if (!(lambda_j > 0.0)) throw DomainError("bifurcation needs lambda_j > 0");
  if (!(lambda_j < sup))
    throw DomainError("no bifurcation point: lambda_j >= sqrt(mu*sigma) (supremum not attained)");
  auto g = [&](double beta) { return -delta1(p, beta) - lambda_j; };
  double lo = p.beta_min() * (1.0 + 1e-9);
  while (g(lo) > 0.0) {
    lo = p.beta_min() + 0.5 * (lo - p.beta_min());
    if (lo <= p.beta_min() * (1.0 + 1e-11)) throw SolverError("bifurcation beta: cannot bracket from below");
  }
  double hi = 2.0 * p.beta_min();
  for (int it = 0; g(hi) < 0.0; ++it) {
    if (it > 2000) throw SolverError("bifurcation beta: cannot bracket from above");
    hi *= 2.0;
  }
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) < 0.0) lo = mid;
    else hi = mid;
  }
  double x0 = lo, x1 = hi, g0 = g(lo), g1 = g(hi);
  for (int it = 0; it < 3 && g1 != g0; ++it) {
    const double x2 = x1 - g1 * (x1 - x0) / (g1 - g0);
    if (!(x2 > lo * (1 - 1e-12) && x2 < hi * (1 + 1e-12))) break;
    x0 = x1;
    g0 = g1;
    x1 = x2;
    g1 = g(x2);
  }
  return std::abs(g1) <= std::abs(g(0.5 * (lo + hi))) ? x1 : 0.5 * (lo + hi);
}

double kernel_slope(const Params& p, double beta_j, double lambda_j) {
  const ConstantState c = constant_state(p, beta_j);
  return -(lambda_j + p.sigma * c.b) / (beta_j * p.gamma * c.b);
}

FieldPair bifurcation_direction(const Params& p, double beta_j, const EigenPair& mode) {
  const double m = kernel_slope(p, beta_j, mode.lambda);
  FieldPair h{std::vector<double>(mode.f.size()), mode.f};
  for (std::size_t i = 0; i < mode.f.size(); ++i) h.u1[i] = m * mode.f[i];
  return h;
}

IndexJump index_jump_check(const Params& p, double beta_j, double lambda_j, double eps_rel,
                           std::span<const double> others) {
  double eps = eps_rel * beta_j;
  auto conflict = [&](double e) {
    if (beta_j - e <= p.beta_min() * (1.0 + 1e-12)) return true;
    for (double o : others)
      if (o != beta_j && std::abs(o - beta_j) <= e) return true;
    return false;
  };
  while (conflict(eps)) {
    eps *= 0.5;
    if (eps < 1e-10 * beta_j) throw DomainError("index jump: no admissible window around beta_j");
  }
  auto sgn = [](double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); };
  IndexJump out;
  out.eps = eps;
  out.left = sgn(index_spectrum(p, beta_j - eps, 1.0).delta2_l - lambda_j);
  out.right = sgn(index_spectrum(p, beta_j + eps, 1.0).delta2_l - lambda_j);
  return out;
}

TransversalityReport transversality_check(const Params& p, double beta_j, double lambda_j,
                                          std::span<const double> others) {
  const ConstantState c = constant_state(p, beta_j);
  const double m = kernel_slope(p, beta_j, lambda_j);
  const double b2 = beta_j * beta_j * p.alpha * p.gamma + p.mu * p.sigma;
  TransversalityReport t;
  t.step2_value = (b2 - 2.0 * beta_j * p.mu * p.gamma) * m - (b2 - 2.0 * beta_j * p.alpha * p.sigma);
  const double k = p.gamma * c.b / (p.alpha * c.a);
  t.pairing_value = -(p.alpha / p.gamma) * k * m + 1.0;
  t.nondeg_value = m * (p.mu * m + beta_j * p.alpha) * k * m + p.sigma + beta_j * p.gamma * m;
  t.nondeg_near_zero = std::abs(t.nondeg_value) < 1e-8;
  const IndexJump ij = index_jump_check(p, beta_j, lambda_j, 1e-4, others);
  t.index_left = ij.left;
  t.index_right = ij.right;
  t.index_eps = ij.eps;
  return t;
}

std::vector<BifurcationPoint> bifurcation_points(const Params& p, const std::vector<EigenPair>& spectrum) {
  const int k = admissible_mode_count(p, spectrum);
  std::vector<BifurcationPoint> out;
  std::vector<double> betas;
  for (int j = 1; j <= k; ++j) betas.push_back(solve_bifurcation_beta(p, spectrum[j].lambda));
  for (int j = 1; j <= k; ++j) {
    BifurcationPoint bp;
    bp.j = j;
    bp.lambda_j = spectrum[j].lambda;
    bp.beta_j = betas[j - 1];
    const ConstantState c = constant_state(p, bp.beta_j);
    bp.a = c.a;
    bp.b = c.b;
    bp.m_j = kernel_slope(p, bp.beta_j, bp.lambda_j);
    bp.h0 = bifurcation_direction(p, bp.beta_j, spectrum[j]);
    bp.diagnostics = transversality_check(p, bp.beta_j, bp.lambda_j, betas);
    out.push_back(std::move(bp));
  }
  return out;
}

KernelReport kernel_dimension(const EllipticProblem& prob, const BifurcationPoint& bp) {
  const int n = prob.n();
  const StateFields s = constant_fields(n, bp.a, bp.b, bp.beta_j);
  const BandedMatrix jac = prob.jacobian(s);
  const auto& vol = prob.grid().vol;
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int i = 0; i < 2 * n; ++i)
    for (int j = std::max(0, i - 2); j <= std::min(2 * n - 1, i + 2); ++j)
      dense(i, j) = jac.get(i, j) * std::sqrt(vol[i / 2] / vol[j / 2]);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(dense);
  const Eigen::VectorXd sv = svd.singularValues();
  KernelReport rep;
  rep.singular_values.assign(sv.data(), sv.data() + sv.size());
  for (double& x : rep.singular_values) x /= bp.lambda_j;
  std::sort(rep.singular_values.begin(), rep.singular_values.end());
  for (double x : rep.singular_values)
    if (x < 1e-6) ++rep.small_count;
  // Divide-and-conquer may return an exact zero; below eps * σ_max nothing is resolved anyway.
  const double floor = std::numeric_limits<double>::epsilon() * rep.singular_values.back();
  rep.gap_orders = std::log10(rep.singular_values[1] / std::max(rep.singular_values[0], floor));
  return rep;
}

}  // namespace lvbif
