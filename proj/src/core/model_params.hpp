#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

namespace lvbif {

// Model constants of the competition system
//   -Δu1 = μ u1(1-u1) - βα u1 u2,  -Δu2 = σ u2(1-u2) - βγ u1 u2  on the unit ball in R^dim.
// Admissible: α > γ > 0, σ ≥ μ > 0, dim ≥ 2. Only validate_params() produces a checked value.
struct Params {
  double mu = 0.0;
  double sigma = 0.0;
  double alpha = 0.0;
  double gamma = 0.0;
  int dim = 2;

  // Left end of the coexistence range, β > σ/γ.
  double beta_min() const { return sigma / gamma; }
  bool equal_rates() const { return sigma == mu; }
};

/// Returns the parameters iff every admissibility inequality holds; otherwise throws
/// ValidationError naming the first violated inequality.
Params validate_params(double mu, double sigma, double alpha, double gamma, int dim);

struct ConstantState {
  double a = 0.0;
  double b = 0.0;
  double beta = 0.0;
};

/// The unique positive constant solution
///   (a, b) = ((βα-μ)σ, (βγ-σ)μ) / (β²αγ - μσ).
/// Throws DomainError unless β > σ/γ (relative margin 1e-12).
ConstantState constant_state(const Params& p, double beta);

// Right-hand sides μu1(1-u1) - βαu1u2 and σu2(1-u2) - βγu1u2.
std::pair<double, double> reaction(const Params& p, double beta, double u1, double u2);

// (0,0), (1,0), (0,1).
std::array<std::pair<double, double>, 3> trivial_states(const Params& p);

struct FieldPair {
  std::vector<double> u1;
  std::vector<double> u2;
};

/// Locked pair for equal growth rates (σ = μ):
///   w1 = (βα-μ)/(β²αγ-μ²) w,  w2 = (βγ-μ)/(β²αγ-μ²) w.
/// Throws DomainError if σ ≠ μ or β ≤ μ/γ.
FieldPair locked_pair(const Params& p, double beta, std::span<const double> w);
std::pair<double, double> locked_pair(const Params& p, double beta, double w);

// f(s) = μ s (1 - s/γ) for s ≥ 0 and μ s (1 + s/α) for s ≤ 0.
class LimitReaction {
public:
  explicit LimitReaction(const Params& p) : mu_(p.mu), gamma_(p.gamma), alpha_(p.alpha) {}
  LimitReaction(double mu, double gamma, double alpha) : mu_(mu), gamma_(gamma), alpha_(alpha) {}

  double operator()(double s) const {
    return s >= 0.0 ? mu_ * s * (1.0 - s / gamma_) : mu_ * s * (1.0 + s / alpha_);
  }
  // One-sided values match at 0, so f'(0) = μ.
  double derivative(double s) const {
    return s >= 0.0 ? mu_ * (1.0 - 2.0 * s / gamma_) : mu_ * (1.0 + 2.0 * s / alpha_);
  }

  double mu() const { return mu_; }
  double gamma() const { return gamma_; }
  double alpha() const { return alpha_; }

private:
  double mu_, gamma_, alpha_;
};

double limit_reaction_eval(const LimitReaction& lr, double s);

}  // namespace lvbif
