#include "core/model_params.hpp"

#include <cmath>
#include <string>

#include "core/errors.hpp"

namespace lvbif {

Params validate_params(double mu, double sigma, double alpha, double gamma, int dim) {
  auto finite = [](double x) { return std::isfinite(x); };
  if (!finite(mu) || !finite(sigma) || !finite(alpha) || !finite(gamma))
    throw ValidationError("parameters must be finite numbers");
  if (!(mu > 0.0)) throw ValidationError("mu > 0 violated (mu = " + std::to_string(mu) + ")");
  if (!(sigma >= mu))
    throw ValidationError("sigma >= mu violated (sigma = " + std::to_string(sigma) +
                          ", mu = " + std::to_string(mu) + ")");
  if (!(gamma > 0.0))
    throw ValidationError("gamma > 0 violated (gamma = " + std::to_string(gamma) + ")");
  if (!(alpha > gamma))
    throw ValidationError("alpha > gamma violated (alpha = " + std::to_string(alpha) +
                          ", gamma = " + std::to_string(gamma) + ")");
  if (dim < 2) throw ValidationError("dim >= 2 violated (dim = " + std::to_string(dim) + ")");
  return Params{mu, sigma, alpha, gamma, dim};
}

ConstantState constant_state(const Params& p, double beta) {
  const double lo = p.beta_min();
  if (!(beta > lo * (1.0 + 1e-12)))
    throw DomainError("constant state requires beta > sigma/gamma = " + std::to_string(lo));
  const double det = beta * beta * p.alpha * p.gamma - p.mu * p.sigma;
  return ConstantState{(beta * p.alpha - p.mu) * p.sigma / det,
                       (beta * p.gamma - p.sigma) * p.mu / det, beta};
}

std::pair<double, double> reaction(const Params& p, double beta, double u1, double u2) {
  return {p.mu * u1 * (1.0 - u1) - beta * p.alpha * u1 * u2,
          p.sigma * u2 * (1.0 - u2) - beta * p.gamma * u1 * u2};
}

std::array<std::pair<double, double>, 3> trivial_states(const Params&) {
  return {{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}};
}

namespace {

std::pair<double, double> locked_coefficients(const Params& p, double beta) {
  if (p.sigma != p.mu) throw DomainError("locked solutions are defined for sigma == mu only");
  if (!(beta > p.mu / p.gamma)) throw DomainError("locked solutions require beta > mu/gamma");
  const double det = beta * beta * p.alpha * p.gamma - p.mu * p.mu;
  return {(beta * p.alpha - p.mu) / det, (beta * p.gamma - p.mu) / det};
}

}  // namespace

FieldPair locked_pair(const Params& p, double beta, std::span<const double> w) {
  const auto [c1, c2] = locked_coefficients(p, beta);
  FieldPair out{std::vector<double>(w.size()), std::vector<double>(w.size())};
  for (std::size_t i = 0; i < w.size(); ++i) {
    out.u1[i] = c1 * w[i];
    out.u2[i] = c2 * w[i];
  }
  return out;
}

std::pair<double, double> locked_pair(const Params& p, double beta, double w) {
  const auto [c1, c2] = locked_coefficients(p, beta);
  return {c1 * w, c2 * w};
}

double limit_reaction_eval(const LimitReaction& lr, double s) { return lr(s); }

}  // namespace lvbif
