#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core/model_params.hpp"

namespace lvbif {

// Compensated Horner evaluation; coefficients from the highest degree down.
double compensated_horner(const std::vector<double>& coeffs, double x);

struct AppendixFunctions {
  double beta = 0.0;
  std::optional<double> lambda;
  double f = 0.0, h = 0.0, g = 0.0, H = NAN, z = NAN;
  double f_expanded = 0.0, h_expanded = 0.0, g_expanded = 0.0, H_expanded = NAN, z_expanded = NAN;
  double max_mismatch = 0.0;  // relative to the absolute-value evaluation of each factored form
};

// Expanded coefficients (highest degree first).
std::vector<double> f_coefficients(const Params& p);
std::vector<double> h_coefficients(const Params& p);
std::vector<double> H_coefficients(const Params& p, double lambda);
std::vector<double> z_coefficients(const Params& p, double lambda);

double f_factored(const Params& p, double beta);
double h_factored(const Params& p, double beta);
double g_factored(const Params& p, double beta);
double H_factored(const Params& p, double beta, double lambda);
double z_factored(const Params& p, double beta, double lambda);

/// Both evaluations of every function; H and z only when λ is given.
/// Throws DomainError unless β ≥ σ/γ and InternalError if the two evaluations disagree by more
/// than 1e-10 relative.
AppendixFunctions evaluate_appendix(const Params& p, double beta, std::optional<double> lambda = std::nullopt);

// Closed form of d(-δ1)/dβ = √(μσ) g / (4 (β²αγ-μσ)² √f).
double minus_delta1_derivative(const Params& p, double beta);

// ∂δ2(β,λ)/∂λ and ∂δ2(β,λ)/∂β: central differences (one-sided second order at λ = 1).
double d_delta2_d_lambda_fd(const Params& p, double beta, double lambda);
double d_delta2_d_beta_fd(const Params& p, double beta, double lambda);
// The same derivatives by implicit differentiation of the characteristic polynomial.
double d_delta2_d_lambda_exact(const Params& p, double beta, double lambda);
double d_delta2_d_beta_exact(const Params& p, double beta, double lambda);

struct Sample {
  Params p;
  double beta = 0.0;
  double lambda = 0.0;
};

struct CheckTally {
  std::string name;
  bool theorem_grade = true;
  long checked = 0;
  long violations = 0;
  double worst_margin = INFINITY;  // smallest normalized margin seen; negative means violated
  Sample worst;

  CheckTally() = default;
  CheckTally(std::string n, bool theorem = true) : name(std::move(n)), theorem_grade(theorem) {}
  void record(double margin, const Sample& s);
  void merge(const CheckTally& o);
};

struct MonoBetaReport {
  CheckTally g_positive{"g > 0"};
  CheckTally h_positive{"h > 0 (interior)"};
  CheckTally h_endpoint{"h(sigma/gamma) >= 0"};
  CheckTally f_positive{"f > 0"};
  CheckTally fd_increase{"-delta1 increasing (finite differences)"};
  CheckTally derivative_identity{"d(-delta1)/dbeta closed form", false};
};

/// g, h > 0 and monotone -δ1 on a sorted β grid inside (σ/γ, ∞).
MonoBetaReport verify_mono_beta(const Params& p, const std::vector<double>& beta_grid);

struct EstMBetaReport {
  CheckTally step2_negative{"step2 < 0"};
  CheckTally H_negative{"H < 0"};
  CheckTally m_bound{"m < -lambda/mu - sigma/(beta gamma)"};
  CheckTally quadratic_positive{"beta^2 alpha gamma + mu sigma - 2 beta mu gamma > 0"};
};

EstMBetaReport verify_est_m_beta(const Params& p, double beta_j, double lambda_j);

struct MonoLambdaReport {
  CheckTally delta1_negative{"delta1(beta,lambda) < 0"};
  CheckTally dlambda_negative{"d delta2/d lambda < 0"};
  CheckTally dbeta_positive{"d delta2/d beta > 0"};
  CheckTally ab_sign{"alpha b - gamma a < 0"};
};

MonoLambdaReport verify_mono_lambda(const Params& p, const std::vector<double>& beta_grid,
                                    const std::vector<double>& lambda_grid);

struct ZSignReport {
  long evaluated = 0;
  long nondeg_positive = 0;
  long nondeg_negative = 0;
  long nondeg_near_zero = 0;
  long z_positive = 0;
  long z_negative = 0;
  long leading_positive = 0;  // λα²γ³(σ-λ) > 0
  double worst_identity = 0.0;       // σ + βγm = -λ/b, relative
  double worst_nondeg_z_identity = 0.0;  // nondeg = -μ z / (β³αγ²ab²D²), relative
  double sign_stable_from = NAN;     // smallest sampled β beyond which z > 0 at every later sample
};

/// Non-degeneracy scalar and z at each (β, λ = -δ1(β)); reported, never asserted.
ZSignReport verify_z_sign(const Params& p, const std::vector<double>& beta_grid);

struct SweepConfig {
  std::uint64_t seed = 20240607;
  int draws = 1000;
  int betas_per_draw = 100;
  int lambdas_per_beta = 4;
  int workers = 1;
};

struct SweepReport {
  long points = 0;
  std::vector<CheckTally> theorem_checks;
  std::vector<CheckTally> consistency_checks;
  long nondeg_positive = 0, nondeg_negative = 0, nondeg_near_zero = 0;
  long z_positive = 0, z_negative = 0;
  double worst_nondeg_z_identity = 0.0;
  double worst_sigma_identity = 0.0;
  double worst_dual_mismatch = 0.0;
  std::vector<double> sign_stable_ratios;  // β*/(σ/γ) per draw where z eventually stays positive
  bool theorems_hold() const;
};

// Parameter draw d of the sweep; deterministic in (seed, d).
Sample draw_parameters(std::uint64_t seed, int d);
std::vector<double> draw_betas(std::uint64_t seed, int d, const Params& p, int count);

SweepReport run_appendix_sweep(const SweepConfig& cfg);

}  // namespace lvbif
