#include "core/appendix_verifier.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <cmath>
#include <random>
#include <thread>

#include "core/bifurcation_points.hpp"
#include "core/errors.hpp"
#include "core/linearization.hpp"

namespace lvbif {

namespace {

inline void two_prod(double a, double b, double& p, double& e) {
  p = a * b;
  e = std::fma(a, b, -p);
}

inline void two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  const double bb = s - a;
  e = (a - (s - bb)) + (b - bb);
}

double horner_abs(const std::vector<double>& c, double x) {
  double s = 0.0;
  for (double v : c) s = s * std::abs(x) + std::abs(v);
  return s;
}

double rel(double x, double y, double scale) { return std::abs(x - y) / std::max(scale, 1e-300); }

double f_abs(const Params& p, double b) {
  const double t = b * (p.alpha + p.gamma) + (p.mu + p.sigma);
  return 4 * b * b * p.alpha * p.gamma * (b * p.alpha + p.mu) * (b * p.gamma + p.sigma) + p.mu * p.sigma * t * t;
}

double fprime_factored(const Params& p, double b) {
  const double x = b * p.alpha - p.mu, y = b * p.gamma - p.sigma;
  const double q = b * (p.alpha - p.gamma) - (p.mu - p.sigma);
  return 4 * p.alpha * p.gamma * (2 * b * x * y + b * b * p.alpha * y + b * b * p.gamma * x) +
         2 * p.mu * p.sigma * (p.alpha - p.gamma) * q;
}

double fprime_abs(const Params& p, double b) {
  const double x = b * p.alpha + p.mu, y = b * p.gamma + p.sigma;
  const double q = b * (p.alpha + p.gamma) + (p.mu + p.sigma);
  return 4 * p.alpha * p.gamma * (2 * b * x * y + b * b * p.alpha * y + b * b * p.gamma * x) +
         2 * p.mu * p.sigma * (p.alpha + p.gamma) * q;
}

double h_abs(const Params& p, double b) {
  return fprime_abs(p, b) * (b * b * p.alpha * p.gamma + p.mu * p.sigma) + 4 * b * p.alpha * p.gamma * f_abs(p, b);
}

double bracket(const Params& p, double b) {
  return (b * b * p.alpha * p.gamma + p.mu * p.sigma) * (p.alpha + p.gamma) -
         2 * b * p.alpha * p.gamma * (p.mu + p.sigma);
}

double bracket_abs(const Params& p, double b) {
  return (b * b * p.alpha * p.gamma + p.mu * p.sigma) * (p.alpha + p.gamma) +
         2 * b * p.alpha * p.gamma * (p.mu + p.sigma);
}

std::vector<double> bracket_coefficients(const Params& p) {
  return {p.alpha * p.gamma * (p.alpha + p.gamma), -2 * p.alpha * p.gamma * (p.mu + p.sigma),
          p.mu * p.sigma * (p.alpha + p.gamma)};
}

double H_abs(const Params& p, double b, double l) {
  const double q1 = b * b * p.alpha * p.gamma + p.mu * p.sigma + 2 * b * p.mu * p.gamma;
  const double q2 = b * b * p.alpha * p.gamma + p.mu * p.sigma + 2 * b * p.alpha * p.sigma;
  return q1 * (l * b * p.gamma + p.sigma * p.mu) + p.mu * b * p.gamma * q2;
}

double z_abs(const Params& p, double b, double l) {
  const double e = b * p.gamma + p.sigma + l;
  const double x = l * b * b * p.alpha * p.gamma + p.sigma * p.mu * e;
  return x * x * e + l * b * b * b * p.alpha * p.gamma * p.gamma * p.sigma * (b * p.alpha + p.mu) * (b * p.gamma + p.sigma);
}

}  // namespace

double compensated_horner(const std::vector<double>& coeffs, double x) {
  if (coeffs.empty()) return 0.0;
  double s = coeffs[0], c = 0.0;
  for (std::size_t k = 1; k < coeffs.size(); ++k) {
    double p, pe, se;
    two_prod(s, x, p, pe);
    two_sum(p, coeffs[k], s, se);
    c = c * x + (pe + se);
  }
  return s + c;
}

std::vector<double> f_coefficients(const Params& p) {
  const double a = p.alpha, g = p.gamma, m = p.mu, s = p.sigma;
  return {4 * a * a * g * g, -4 * a * g * (a * s + g * m), m * s * (a + g) * (a + g),
          -2 * m * s * (a - g) * (m - s), m * s * (m - s) * (m - s)};
}

std::vector<double> h_coefficients(const Params& p) {
  const double a = p.alpha, g = p.gamma, m = p.mu, s = p.sigma;
  const double d = m - s;
  return {4 * a * a * g * g * (a * s + g * m), -2 * a * g * m * s * (a * a + 10 * a * g + g * g),
          6 * a * g * m * s * (a + g) * (m + s),
          -2 * m * s * (2 * a * g * (d * d + m * s) + m * s * (a * a + g * g)),
          2 * m * m * s * s * (a - g) * d};
}

std::vector<double> H_coefficients(const Params& p, double l) {
  const double a = p.alpha, g = p.gamma, m = p.mu, s = p.sigma;
  return {-(l + m) * a * g * g, g * m * (2 * g * l + s * a), g * m * s * (m - l), -m * m * s * s};
}

std::vector<double> z_coefficients(const Params& p, double l) {
  const double a = p.alpha, g = p.gamma, m = p.mu, s = p.sigma;
  const double ls = l + s;
  return {l * a * a * g * g * g * (s - l),
          l * a * g * g * (l * a * ls - s * (s * a + 3 * g * m)),
          g * g * s * m * (l * a * (5 * s + 4 * l) - g * s * m),
          g * s * m * ls * (3 * g * s * m - 2 * l * a * ls),
          -3 * g * s * s * m * m * ls * ls,
          ls * ls * ls * s * s * m * m};
}

double f_factored(const Params& p, double b) {
  const double q = b * (p.alpha - p.gamma) - (p.mu - p.sigma);
  return 4 * b * b * p.alpha * p.gamma * (b * p.alpha - p.mu) * (b * p.gamma - p.sigma) + p.mu * p.sigma * q * q;
}

double h_factored(const Params& p, double b) {
  return fprime_factored(p, b) * (b * b * p.alpha * p.gamma - p.mu * p.sigma) - 4 * b * p.alpha * p.gamma * f_factored(p, b);
}

double g_factored(const Params& p, double b) {
  return h_factored(p, b) + 2 * std::sqrt(f_factored(p, b)) * std::sqrt(p.mu * p.sigma) * bracket(p, b);
}

double H_factored(const Params& p, double b, double l) {
  const double q1 = b * b * p.alpha * p.gamma + p.mu * p.sigma - 2 * b * p.mu * p.gamma;
  const double q2 = b * b * p.alpha * p.gamma + p.mu * p.sigma - 2 * b * p.alpha * p.sigma;
  return -q1 * (l * b * p.gamma + p.sigma * p.mu) - p.mu * b * p.gamma * q2;
}

double z_factored(const Params& p, double b, double l) {
  const double e = b * p.gamma - p.sigma - l;
  const double x = l * b * b * p.alpha * p.gamma + p.sigma * p.mu * e;
  return -x * x * e + l * b * b * b * p.alpha * p.gamma * p.gamma * p.sigma * (b * p.alpha - p.mu) * (b * p.gamma - p.sigma);
}

AppendixFunctions evaluate_appendix(const Params& p, double beta, std::optional<double> lambda) {
  if (!(beta >= p.beta_min())) throw DomainError("appendix functions require beta >= sigma/gamma");
  AppendixFunctions out;
  out.beta = beta;
  out.lambda = lambda;
  out.f = f_factored(p, beta);
  out.h = h_factored(p, beta);
  out.g = g_factored(p, beta);
  out.f_expanded = compensated_horner(f_coefficients(p), beta);
  out.h_expanded = compensated_horner(h_coefficients(p), beta);
  out.g_expanded = out.h_expanded + 2 * std::sqrt(out.f_expanded) * std::sqrt(p.mu * p.sigma) *
                                        compensated_horner(bracket_coefficients(p), beta);
  const double fa = std::max(f_abs(p, beta), horner_abs(f_coefficients(p), beta));
  const double ha = std::max(h_abs(p, beta), horner_abs(h_coefficients(p), beta));
  const double ga = ha + 2 * std::sqrt(fa) * std::sqrt(p.mu * p.sigma) * bracket_abs(p, beta);
  out.max_mismatch = std::max({rel(out.f, out.f_expanded, fa), rel(out.h, out.h_expanded, ha),
                               rel(out.g, out.g_expanded, ga)});
  if (lambda) {
    const double l = *lambda;
    out.H = H_factored(p, beta, l);
    out.z = z_factored(p, beta, l);
    out.H_expanded = compensated_horner(H_coefficients(p, l), beta);
    out.z_expanded = compensated_horner(z_coefficients(p, l), beta);
    const double Ha = std::max(H_abs(p, beta, l), horner_abs(H_coefficients(p, l), beta));
    const double za = std::max(z_abs(p, beta, l), horner_abs(z_coefficients(p, l), beta));
    out.max_mismatch = std::max({out.max_mismatch, rel(out.H, out.H_expanded, Ha), rel(out.z, out.z_expanded, za)});
  }
  if (!(out.max_mismatch <= 1e-10))
    throw InternalError("appendix functions: factored and expanded forms disagree (relative " +
                        std::to_string(out.max_mismatch) + ")");
  return out;
}

double minus_delta1_derivative(const Params& p, double beta) {
  const double d = beta * beta * p.alpha * p.gamma - p.mu * p.sigma;
  return std::sqrt(p.mu * p.sigma) * g_factored(p, beta) / (4 * d * d * std::sqrt(f_factored(p, beta)));
}

namespace {

// Stencil increments of δ2 in β reach the last bit of a double at large β and λ, so the
// finite differences below are evaluated in binary128.
using wide = __float128;

wide wsqrt(wide x) {
  if (!(x > 0)) return 0;
  wide y = std::sqrt(static_cast<double>(x));
  for (int i = 0; i < 3; ++i) y = 0.5 * (y + x / y);
  return y;
}

wide wabs(wide x) { return x < 0 ? -x : x; }

struct WideState {
  wide a, b;
};

WideState wide_state(const Params& p, wide beta) {
  const wide al = p.alpha, ga = p.gamma, mu = p.mu, sg = p.sigma;
  const wide det = beta * beta * al * ga - mu * sg;
  return {(beta * al - mu) * sg / det, (beta * ga - sg) * mu / det};
}

wide wide_delta1(const Params& p, wide beta) {
  const WideState c = wide_state(p, beta);
  const wide al = p.alpha, ga = p.gamma, mu = p.mu, sg = p.sigma;
  const wide ma = mu * c.a, sb = sg * c.b, gap = ma - sb;
  const wide d2 = 0.5 * (ma + sb + wsqrt(4 * beta * beta * al * ga * c.a * c.b + gap * gap));
  return c.a * c.b * (mu * sg - beta * beta * al * ga) / d2;
}

wide wide_delta2(const Params& p, wide beta, wide lambda) {
  const WideState c = wide_state(p, beta);
  const wide al = p.alpha, ga = p.gamma, mu = p.mu, sg = p.sigma;
  const wide l1 = lambda - 1;
  const wide a11 = (-mu * l1 - mu * c.a) / lambda, a12 = -beta * al * c.a / lambda;
  const wide a21 = -beta * ga * c.b / lambda, a22 = (-sg * l1 - sg * c.b) / lambda;
  const wide kappa = (beta * al - mu) * (beta * ga - sg) / (beta * beta * al * ga - mu * sg);
  const wide det = mu * sg * (l1 - kappa) / lambda;
  const wide diff = a11 - a22;
  const wide d1 = 0.5 * (a11 + a22 - wsqrt(diff * diff + 4 * a12 * a21));
  return det / d1;
}

}  // namespace

double d_delta2_d_lambda_fd(const Params& p, double beta, double lambda) {
  const wide b = beta, l = lambda, h = wide(1e-6) * l;
  if (l - h < 1)
    return static_cast<double>(
        (-3 * wide_delta2(p, b, l) + 4 * wide_delta2(p, b, l + h) - wide_delta2(p, b, l + 2 * h)) / (2 * h));
  return static_cast<double>((wide_delta2(p, b, l + h) - wide_delta2(p, b, l - h)) / (2 * h));
}

double d_delta2_d_beta_fd(const Params& p, double beta, double lambda) {
  const wide b = beta, l = lambda, h = wide(1e-6) * b;
  if (b - h <= wide(p.beta_min()) * (1 + wide(1e-11)))
    return static_cast<double>(
        (-3 * wide_delta2(p, b, l) + 4 * wide_delta2(p, b + h, l) - wide_delta2(p, b + 2 * h, l)) / (2 * h));
  return static_cast<double>((wide_delta2(p, b + h, l) - wide_delta2(p, b - h, l)) / (2 * h));
}

namespace {

struct Slopes {
  double num = 0.0, num_abs = 0.0, gap = 1.0;
};

Slopes delta2_slope(const Params& p, double beta, double lambda, bool wrt_beta) {
  const IndexSpectrum s = index_spectrum(p, beta, lambda);
  const ConstantState c = constant_state(p, beta);
  const double kappa = 1.0 - c.a - c.b;
  double tr_x, det_x;
  if (wrt_beta) {
    const double d = beta * beta * p.alpha * p.gamma - p.mu * p.sigma;
    const double da = -p.sigma * p.alpha * (beta * beta * p.alpha * p.gamma + p.mu * p.sigma - 2 * beta * p.gamma * p.mu) / (d * d);
    const double db = -p.mu * p.gamma * (beta * beta * p.alpha * p.gamma + p.mu * p.sigma - 2 * beta * p.alpha * p.sigma) / (d * d);
    tr_x = -(p.mu * da + p.sigma * db) / lambda;
    det_x = p.mu * p.sigma * (da + db) / lambda;
  } else {
    tr_x = -(p.mu * (1 - c.a) + p.sigma * (1 - c.b)) / (lambda * lambda);
    det_x = p.mu * p.sigma * (1 + kappa) / (lambda * lambda);
  }
  Slopes out;
  out.num = s.delta2_l * tr_x - det_x;
  out.num_abs = std::abs(s.delta2_l * tr_x) + std::abs(det_x);
  out.gap = s.delta2_l - s.delta1_l;
  return out;
}

}  // namespace

double d_delta2_d_lambda_exact(const Params& p, double beta, double lambda) {
  const Slopes s = delta2_slope(p, beta, lambda, false);
  return s.num / s.gap;
}

double d_delta2_d_beta_exact(const Params& p, double beta, double lambda) {
  const Slopes s = delta2_slope(p, beta, lambda, true);
  return s.num / s.gap;
}

void CheckTally::record(double margin, const Sample& s) {
  ++checked;
  if (!(margin > 0.0)) ++violations;
  if (margin < worst_margin || std::isnan(margin)) {
    worst_margin = margin;
    worst = s;
  }
}

void CheckTally::merge(const CheckTally& o) {
  checked += o.checked;
  violations += o.violations;
  if (o.worst_margin < worst_margin || std::isnan(o.worst_margin)) {
    worst_margin = o.worst_margin;
    worst = o.worst;
  }
}

MonoBetaReport verify_mono_beta(const Params& p, const std::vector<double>& beta_grid) {
  MonoBetaReport r;
  std::vector<double> grid = beta_grid;
  std::sort(grid.begin(), grid.end());
  {
    const double b0 = p.beta_min();
    const double h0 = h_factored(p, b0);
    r.h_endpoint.record(h0 >= 0.0 ? 1.0 + h0 / std::max(h_abs(p, b0), 1e-300) : h0 / h_abs(p, b0), {p, b0, 0.0});
  }
  wide prev = 0;
  bool have_prev = false;
  for (double b : grid) {
    const Sample smp{p, b, 0.0};
    const AppendixFunctions af = evaluate_appendix(p, b);
    r.f_positive.record(af.f / f_abs(p, b), smp);
    r.h_positive.record(af.h / h_abs(p, b), smp);
    r.g_positive.record(af.g / (h_abs(p, b) + 2 * std::sqrt(f_abs(p, b) * p.mu * p.sigma) * bracket_abs(p, b)), smp);
    const wide cur = -wide_delta1(p, b);
    if (have_prev) r.fd_increase.record(static_cast<double>((cur - prev) / wabs(cur)), smp);
    prev = cur;
    have_prev = true;
    const wide hstep = wide(1e-4) * (wide(b) - wide(p.beta_min()));
    if (wide(b) - hstep > wide(p.beta_min())) {
      const double fd = static_cast<double>((wide_delta1(p, b - hstep) - wide_delta1(p, b + hstep)) / (2 * hstep));
      const double cf = minus_delta1_derivative(p, b);
      r.derivative_identity.record(1e-6 - std::abs(fd - cf) / std::abs(cf), smp);
    }
  }
  return r;
}

EstMBetaReport verify_est_m_beta(const Params& p, double beta_j, double lambda_j) {
  EstMBetaReport r;
  const Sample smp{p, beta_j, lambda_j};
  const double m = kernel_slope(p, beta_j, lambda_j);
  const double b2 = beta_j * beta_j * p.alpha * p.gamma + p.mu * p.sigma;
  const double q1 = b2 - 2 * beta_j * p.mu * p.gamma, q2 = b2 - 2 * beta_j * p.alpha * p.sigma;
  const double step2 = q1 * m - q2;
  r.step2_negative.record(-step2 / (std::abs(q1 * m) + b2 + 2 * beta_j * p.alpha * p.sigma), smp);
  const AppendixFunctions af = evaluate_appendix(p, beta_j, lambda_j);
  r.H_negative.record(-af.H / H_abs(p, beta_j, lambda_j), smp);
  const double bound = -lambda_j / p.mu - p.sigma / (beta_j * p.gamma);
  r.m_bound.record((bound - m) / (std::abs(bound) + std::abs(m)), smp);
  r.quadratic_positive.record(q1 / (b2 + 2 * beta_j * p.mu * p.gamma), smp);
  return r;
}

MonoLambdaReport verify_mono_lambda(const Params& p, const std::vector<double>& beta_grid,
                                    const std::vector<double>& lambda_grid) {
  MonoLambdaReport r;
  for (double b : beta_grid) {
    const ConstantState c = constant_state(p, b);
    r.ab_sign.record(-(p.alpha * c.b - p.gamma * c.a) / (p.alpha * c.b + p.gamma * c.a), {p, b, 0.0});
    for (double l : lambda_grid) {
      const Sample smp{p, b, l};
      const IndexSpectrum s = index_spectrum(p, b, l);
      r.delta1_negative.record(-s.delta1_l / std::max(s.D.max_abs(), 1e-300), smp);
      const Slopes sl = delta2_slope(p, b, l, false);
      const Slopes sb = delta2_slope(p, b, l, true);
      const double fl = d_delta2_d_lambda_fd(p, b, l), fb = d_delta2_d_beta_fd(p, b, l);
      r.dlambda_negative.record(-fl / (sl.num_abs / sl.gap), smp);
      r.dbeta_positive.record(fb / (sb.num_abs / sb.gap), smp);
    }
  }
  return r;
}

ZSignReport verify_z_sign(const Params& p, const std::vector<double>& beta_grid) {
  ZSignReport r;
  std::vector<double> grid = beta_grid;
  std::sort(grid.begin(), grid.end());
  std::vector<double> zs;
  for (double b : grid) {
    const double l = -delta1(p, b);
    if (!(l > 0.0)) {
      zs.push_back(NAN);
      continue;
    }
    const ConstantState c = constant_state(p, b);
    const double m = kernel_slope(p, b, l);
    const double k = p.gamma * c.b / (p.alpha * c.a);
    const double nondeg = m * (p.mu * m + b * p.alpha) * k * m + p.sigma + b * p.gamma * m;
    const double z = z_factored(p, b, l);
    ++r.evaluated;
    if (std::abs(nondeg) < 1e-8) ++r.nondeg_near_zero;
    if (nondeg > 0) ++r.nondeg_positive;
    else if (nondeg < 0) ++r.nondeg_negative;
    if (z > 0) ++r.z_positive;
    else if (z < 0) ++r.z_negative;
    if (l * p.alpha * p.alpha * std::pow(p.gamma, 3) * (p.sigma - l) > 0) ++r.leading_positive;
    const double lhs = p.sigma + b * p.gamma * m, rhs = -l / c.b;
    r.worst_identity = std::max(r.worst_identity, std::abs(lhs - rhs) / (p.sigma + std::abs(b * p.gamma * m)));
    const double d = b * b * p.alpha * p.gamma - p.mu * p.sigma;
    const double via_z = -p.mu * z / (b * b * b * p.alpha * p.gamma * p.gamma * c.a * c.b * c.b * d * d);
    const double scale = std::abs(m * m * (p.mu * std::abs(m) + b * p.alpha) * k) + p.sigma + std::abs(b * p.gamma * m);
    r.worst_nondeg_z_identity = std::max(r.worst_nondeg_z_identity, std::abs(nondeg - via_z) / scale);
    zs.push_back(z);
  }
  if (!zs.empty() && zs.back() > 0) {
    std::size_t k = zs.size();
    while (k > 0 && zs[k - 1] > 0) --k;
    r.sign_stable_from = grid[k];
  }
  return r;
}

Sample draw_parameters(std::uint64_t seed, int d) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(d), 0x5eedu};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto logu = [&](double lo, double hi) { return lo * std::pow(hi / lo, u(rng)); };
  for (;;) {
    const double mu = logu(1e-2, 1e2);
    const double ratio_s = d % 4 == 0 ? 1.0 : logu(1.0, 1e2);
    const double gamma = logu(1e-2, 1e2);
    const double ratio_a = std::pow(1e2, 1.0 - u(rng));
    const double sigma = mu * ratio_s, alpha = gamma * ratio_a;
    if (alpha > gamma && sigma >= mu) return Sample{Params{mu, sigma, alpha, gamma, 2}, 0.0, 0.0};
  }
}

std::vector<double> draw_betas(std::uint64_t seed, int d, const Params& p, int count) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(d), 0xbe7au};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double lo = std::log1p(1e-6), hi = std::log(1e6);
  std::vector<double> b(count);
  for (double& x : b) {
    x = p.beta_min() * std::exp(lo + (hi - lo) * u(rng));
    if (!(x > p.beta_min() * (1.0 + 1e-7))) x = p.beta_min() * (1.0 + 1e-6);
  }
  std::sort(b.begin(), b.end());
  return b;
}

bool SweepReport::theorems_hold() const {
  for (const auto& t : theorem_checks)
    if (t.violations > 0 || t.checked == 0) return false;
  return true;
}

namespace {

struct DrawResult {
  MonoBetaReport mb;
  EstMBetaReport em;
  MonoLambdaReport ml;
  ZSignReport zs;
  double ratio = NAN;
  double mismatch = 0.0;
  long points = 0;
};

DrawResult run_draw(const SweepConfig& cfg, int d) {
  DrawResult out;
  const Params p = draw_parameters(cfg.seed, d).p;
  const std::vector<double> betas = draw_betas(cfg.seed, d, p, cfg.betas_per_draw);
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(d), 0x1a4bu};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> lambdas{1.0};
  for (int k = 1; k < cfg.lambdas_per_beta; ++k) lambdas.push_back(std::pow(1e4, u(rng)));
  out.points = static_cast<long>(betas.size());
  out.mb = verify_mono_beta(p, betas);
  out.ml = verify_mono_lambda(p, betas, lambdas);
  for (double b : betas) {
    const double l = -delta1(p, b);
    if (!(l > 0.0)) continue;
    const EstMBetaReport e = verify_est_m_beta(p, b, l);
    out.em.step2_negative.merge(e.step2_negative);
    out.em.H_negative.merge(e.H_negative);
    out.em.m_bound.merge(e.m_bound);
    out.em.quadratic_positive.merge(e.quadratic_positive);
    out.mismatch = std::max(out.mismatch, evaluate_appendix(p, b, l).max_mismatch);
  }
  out.zs = verify_z_sign(p, betas);
  if (!std::isnan(out.zs.sign_stable_from)) out.ratio = out.zs.sign_stable_from / p.beta_min();
  return out;
}

}  // namespace

SweepReport run_appendix_sweep(const SweepConfig& cfg) {
  if (cfg.draws < 1 || cfg.betas_per_draw < 2 || cfg.lambdas_per_beta < 1)
    throw ValidationError("sweep sizes must be positive");
  std::vector<DrawResult> results(cfg.draws);
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex fm;
  auto work = [&] {
    for (int d = next++; d < cfg.draws; d = next++) {
      try {
        results[d] = run_draw(cfg, d);
      } catch (...) {
        std::lock_guard<std::mutex> lk(fm);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int nw = std::max(1, cfg.workers);
  std::vector<std::thread> pool;
  for (int w = 1; w < nw; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  MonoBetaReport mb;
  EstMBetaReport em;
  MonoLambdaReport ml;
  SweepReport rep;
  for (const DrawResult& r : results) {
    rep.points += r.points;
    mb.g_positive.merge(r.mb.g_positive);
    mb.h_positive.merge(r.mb.h_positive);
    mb.h_endpoint.merge(r.mb.h_endpoint);
    mb.f_positive.merge(r.mb.f_positive);
    mb.fd_increase.merge(r.mb.fd_increase);
    mb.derivative_identity.merge(r.mb.derivative_identity);
    em.step2_negative.merge(r.em.step2_negative);
    em.H_negative.merge(r.em.H_negative);
    em.m_bound.merge(r.em.m_bound);
    em.quadratic_positive.merge(r.em.quadratic_positive);
    ml.delta1_negative.merge(r.ml.delta1_negative);
    ml.dlambda_negative.merge(r.ml.dlambda_negative);
    ml.dbeta_positive.merge(r.ml.dbeta_positive);
    ml.ab_sign.merge(r.ml.ab_sign);
    rep.nondeg_positive += r.zs.nondeg_positive;
    rep.nondeg_negative += r.zs.nondeg_negative;
    rep.nondeg_near_zero += r.zs.nondeg_near_zero;
    rep.z_positive += r.zs.z_positive;
    rep.z_negative += r.zs.z_negative;
    rep.worst_nondeg_z_identity = std::max(rep.worst_nondeg_z_identity, r.zs.worst_nondeg_z_identity);
    rep.worst_sigma_identity = std::max(rep.worst_sigma_identity, r.zs.worst_identity);
    rep.worst_dual_mismatch = std::max(rep.worst_dual_mismatch, r.mismatch);
    if (!std::isnan(r.ratio)) rep.sign_stable_ratios.push_back(r.ratio);
  }
  rep.theorem_checks = {mb.g_positive,        mb.h_positive,       mb.h_endpoint,        mb.f_positive,
                        mb.fd_increase,       em.H_negative,       em.step2_negative,    em.m_bound,
                        em.quadratic_positive, ml.delta1_negative, ml.dlambda_negative, ml.dbeta_positive,
                        ml.ab_sign};
  rep.consistency_checks = {mb.derivative_identity};
  return rep;
}

}  // namespace lvbif
