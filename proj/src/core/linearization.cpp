#include "core/linearization.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace lvbif {

double Matrix2::max_abs() const {
  return std::max({std::abs(a11), std::abs(a12), std::abs(a21), std::abs(a22)});
}

Matrix2 operator*(const Matrix2& x, const Matrix2& y) {
  return {x.a11 * y.a11 + x.a12 * y.a21, x.a11 * y.a12 + x.a12 * y.a22,
          x.a21 * y.a11 + x.a22 * y.a21, x.a21 * y.a12 + x.a22 * y.a22};
}

double eigen_residual(const Matrix2& x, const Matrix2& v, double d1, double d2) {
  const Matrix2 xv = x * v;
  const Matrix2 vd{v.a11 * d1, v.a12 * d2, v.a21 * d1, v.a22 * d2};
  return std::max({std::abs(xv.a11 - vd.a11), std::abs(xv.a12 - vd.a12),
                   std::abs(xv.a21 - vd.a21), std::abs(xv.a22 - vd.a22)});
}

double eigvec_slope(const Matrix2& a, double d) {
  // Second row: a21 x + a22 = d.  First row: (a11 - d) x + a12 = 0.
  const double r2 = d - a.a22, r1 = a.a11 - d;
  if (std::abs(r2) >= std::abs(r1)) return r2 / a.a21;
  return -a.a12 / r1;
}

Matrix2 interaction_matrix(const Params& p, double beta) {
  const ConstantState c = constant_state(p, beta);
  return {p.mu * c.a, beta * p.alpha * c.a, beta * p.gamma * c.b, p.sigma * c.b};
}

Matrix2 adjoint_matrix(const Params& p, double beta) { return interaction_matrix(p, beta).transpose(); }

LinearizationSpectrum spectral_split(const Params& p, double beta) {
  const ConstantState c = constant_state(p, beta);
  LinearizationSpectrum s;
  s.beta = beta;
  s.a = c.a;
  s.b = c.b;
  const double ma = p.mu * c.a, sb = p.sigma * c.b;
  const double gap = ma - sb;
  const double root = std::sqrt(4.0 * beta * beta * p.alpha * p.gamma * c.a * c.b + gap * gap);
  s.delta2 = 0.5 * (ma + sb + root);
  const double det = c.a * c.b * (p.mu * p.sigma - beta * beta * p.alpha * p.gamma);
  s.delta1 = det / s.delta2;
  // δ1 - σb < 0 and -σb < 0 add without cancellation.
  s.m = (s.delta1 - sb) / (beta * p.gamma * c.b);
  // δ2-eigenvector slope: (δ2 - σb)/(βγb) = βαa/(δ2 - μa); pick the form free of cancellation.
  const double x2 = gap >= 0.0 ? 0.5 * (gap + root) / (beta * p.gamma * c.b)
                               : beta * p.alpha * c.a / (0.5 * (-gap + root));
  s.Q = {s.m, x2, 1.0, 1.0};
  // Eigenvectors of Aᵀ: scale the first entries by γb/(αa).
  const double k = p.gamma * c.b / (p.alpha * c.a);
  s.P = {k * s.m, k * x2, 1.0, 1.0};
  return s;
}

double delta1(const Params& p, double beta) { return spectral_split(p, beta).delta1; }

Matrix2 index_matrix(const Params& p, double beta, double lambda) {
  if (!(lambda >= 1.0)) throw DomainError("index spectrum requires lambda >= 1");
  const ConstantState c = constant_state(p, beta);
  const double l1 = lambda - 1.0;
  return {(-p.mu * l1 - p.mu * c.a) / lambda, -beta * p.alpha * c.a / lambda,
          -beta * p.gamma * c.b / lambda, (-p.sigma * l1 - p.sigma * c.b) / lambda};
}

IndexSpectrum index_spectrum(const Params& p, double beta, double lambda) {
  IndexSpectrum s;
  s.beta = beta;
  s.lambda = lambda;
  s.D = index_matrix(p, beta, lambda);
  // det D = μσ(λ - 1 - κ)/λ with κ = 1 - a - b = (βα-μ)(βγ-σ)/(β²αγ-μσ) ∈ (0,1).
  const double kappa = (beta * p.alpha - p.mu) * (beta * p.gamma - p.sigma) /
                       (beta * beta * p.alpha * p.gamma - p.mu * p.sigma);
  const double det = p.mu * p.sigma * ((lambda - 1.0) - kappa) / lambda;
  const double tr = s.D.trace();
  const double diff = s.D.a11 - s.D.a22;
  const double root = std::sqrt(diff * diff + 4.0 * s.D.a12 * s.D.a21);
  s.delta1_l = 0.5 * (tr - root);
  s.delta2_l = det / s.delta1_l;
  s.R = {eigvec_slope(s.D, s.delta1_l), eigvec_slope(s.D, s.delta2_l), 1.0, 1.0};
  return s;
}

}  // namespace lvbif
