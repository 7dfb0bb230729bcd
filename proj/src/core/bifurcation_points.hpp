#pragma once

#include <span>
#include <vector>

#include "core/elliptic_solver.hpp"
#include "core/model_params.hpp"
#include "core/radial_spectrum.hpp"

namespace lvbif {

struct IndexJump {
  int left = 0;   // sign of δ2(β_j - ε, 1) - λ_j
  int right = 0;  // sign of δ2(β_j + ε, 1) - λ_j
  double eps = 0.0;
};

struct TransversalityReport {
  double step2_value = 0.0;
  double pairing_value = 0.0;
  double nondeg_value = 0.0;
  bool nondeg_near_zero = false;  // |nondeg_value| < 1e-8
  int index_left = 0;
  int index_right = 0;
  double index_eps = 0.0;
};

struct BifurcationPoint {
  int j = 0;
  double beta_j = 0.0;
  double lambda_j = 0.0;
  double m_j = 0.0;
  double a = 0.0, b = 0.0;
  FieldPair h0;  // f_j (m_j, 1)
  TransversalityReport diagnostics;
};

/// The k with λ_k < √(μσ) ≤ λ_{k+1}; `lambdas` holds λ_0, λ_1, ... ascending.
/// Throws ValidationError if the last entry is still below √(μσ).
int admissible_mode_count(const Params& p, std::span<const double> lambdas);
int admissible_mode_count(const Params& p, const std::vector<EigenPair>& spectrum);

/// Unique root of -δ1(β) = λ on (σ/γ, ∞): bracket doubling, 80 bisections, 3 secant steps.
/// Throws DomainError if λ ≤ 0 or λ ≥ √(μσ).
double solve_bifurcation_beta(const Params& p, double lambda_j);

// m(β_j) = -(λ_j + σb)/(β_jγb).
double kernel_slope(const Params& p, double beta_j, double lambda_j);
FieldPair bifurcation_direction(const Params& p, double beta_j, const EigenPair& mode);

/// Signs of δ2(β_j ± ε, 1) - λ_j with ε = eps_rel β_j, halved while the window touches σ/γ or any
/// β in `others`. Throws DomainError if ε would drop below 1e-10 β_j.
IndexJump index_jump_check(const Params& p, double beta_j, double lambda_j, double eps_rel = 1e-4,
                           std::span<const double> others = {});

TransversalityReport transversality_check(const Params& p, double beta_j, double lambda_j,
                                          std::span<const double> others = {});

/// All admissible bifurcation points for the given spectrum, ordered by j.
std::vector<BifurcationPoint> bifurcation_points(const Params& p, const std::vector<EigenPair>& spectrum);

struct KernelReport {
  std::vector<double> singular_values;  // ascending, scaled by 1/λ_j
  int small_count = 0;                  // below 1e-6
  double gap_orders = 0.0;              // log10(second smallest / max(smallest, eps * largest))
};

/// Singular values of the weight-symmetrized discrete linearization at the constant state,
/// S L(β_j) S⁻¹ with S = diag(√vol), scaled by 1/λ_j.
KernelReport kernel_dimension(const EllipticProblem& prob, const BifurcationPoint& bp);

}  // namespace lvbif
