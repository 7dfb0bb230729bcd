#pragma once

#include <vector>

#include "core/branch_continuation.hpp"
#include "core/model_params.hpp"
#include "core/radial_spectrum.hpp"

namespace lvbif {

struct LimitProfile {
  int j = 0;
  std::vector<double> w;
  std::vector<double> roots;
  double residual = 0.0;
  int iterations = 0;
  double seed_scale = 0.0;  // ε actually used
  int orientation = 1;      // sign of w at the center
};

// f(s) written as μ s (1 - max(s,0)/γ - max(-s,0)/α); a second coding of the piecewise reaction.
double limit_reaction_alt(double mu, double gamma, double alpha, double s);

// -Δ_r w - f(w) nodewise.
std::vector<double> limit_residual(const Params& p, const DiscreteOperator& op, const std::vector<double>& w);
std::vector<double> limit_residual_alt(const Params& p, const DiscreteOperator& op, const std::vector<double>& w);

/// Newton solve of -Δ_r w = f(w) from ±ε f_j, ε = seed_scale (default 0.1 min(γ, α)).
/// f is not odd, so the profiles with w(0) > 0 and w(0) < 0 are distinct; orientation picks one.
/// Retries with 2ε and ε/2 when the result lands in the wrong nodal class or orientation.
/// Throws DomainError unless σ = μ and μ > λ_j; SolverError when all attempts fail.
LimitProfile solve_limit_equation(const Params& p, const RadialGrid& g, const EigenPair& mode, int orientation = 1,
                                  double seed_scale = 0.0);

// Orientation of the profile approached by the branch leaving origin in `direction`:
// near the switch γu1 - αu2 moves by t(γm_j - α) f_j, and f_j(0) > 0.
int branch_orientation(const BifurcationPoint& origin, const Params& p, int direction);

/// ||(γu1 - αu2) - w||_inf. Throws ValidationError on a grid mismatch.
double segregation_distance(const Params& p, const RadialGrid& g, const BranchPoint& bp, const LimitProfile& lp);

// Roots of v_β/β = w_β - (μ/β)u1 + (μ/β)u2 compared with the roots of w, in grid cells.
double scaled_root_distance(const Params& p, const RadialGrid& g, const BranchPoint& bp, const LimitProfile& lp);

}  // namespace lvbif
