#pragma once

#include <complex>
#include <vector>

#include "core/banded_lu.hpp"
#include "core/model_params.hpp"
#include "core/radial_spectrum.hpp"

namespace lvbif {

struct StateFields {
  std::vector<double> u1;
  std::vector<double> u2;
  double beta = 0.0;
};

StateFields constant_fields(int n, double u1, double u2, double beta);

// Discrete problem on one grid: -Δ_r from assemble_neumann_laplacian plus the reaction terms.
class EllipticProblem {
public:
  EllipticProblem(const Params& p, RadialGrid grid);

  const Params& params() const { return p_; }
  const RadialGrid& grid() const { return grid_; }
  const DiscreteOperator& laplacian() const { return op_; }
  int n() const { return grid_.n; }

  /// (-Δu1 - μu1(1-u1) + βαu1u2, -Δu2 - σu2(1-u2) + βγu1u2) nodewise.
  /// Throws ValidationError if the field lengths do not match the grid.
  FieldPair residual(const StateFields& s) const;
  // Same quantity assembled row by row from the stencil matrix and an expanded reaction polynomial.
  FieldPair residual_rowwise(const StateFields& s) const;
  // Per-row sum of absolute values of all terms entering the residual; the roundoff scale.
  FieldPair residual_scale(const StateFields& s) const;
  double residual_norm(const StateFields& s) const;

  // Interleaved unknowns (u1_i at 2i, u2_i at 2i+1), bandwidth 2.
  BandedMatrix jacobian(const StateFields& s) const;
  // ∂F/∂β = (αu1u2, γu1u2), interleaved.
  std::vector<double> beta_derivative(const StateFields& s) const;

  // Roundoff floor of the max-norm residual for fields of size `scale`.
  double residual_floor(double scale) const;

private:
  void check(const StateFields& s) const;

  Params p_;
  RadialGrid grid_;
  DiscreteOperator op_;
  double kmax_ = 0.0;
};

std::vector<double> interleave(const std::vector<double>& a, const std::vector<double>& b);
void deinterleave(const std::vector<double>& x, std::vector<double>& a, std::vector<double>& b);

struct NewtonOptions {
  double tol = 1e-11;
  int max_iter = 40;
};

struct NewtonResult {
  StateFields state;
  int iterations = 0;
  std::vector<double> history;  // residual max-norm before each step and after the last
  bool at_floor = false;        // stopped by the roundoff floor instead of tol
  double residual = 0.0;
};

/// Newton iteration with the banded Jacobian. Stops when the residual is below tol, or when
/// the update stalls at roundoff while the residual sits at the discretization's floor.
/// Throws SolverError (carrying the residual) on divergence or max_iter, and reports the
/// smallest singular value when the Jacobian is numerically singular.
NewtonResult newton_solve(const EllipticProblem& prob, StateFields start, const NewtonOptions& opt = {});

struct StabilityReport {
  std::vector<std::complex<double>> eigenvalues;  // ascending real part
  std::complex<double> leading;
  // Stable means positive real part of the leading eigenvalue; anything else is unstable.
  bool unstable = false;
};

/// Eigenvalues of the discretized linearization with the smallest real parts (dense solve).
/// Throws ValidationError if the state is not a solution (residual > 1e-9).
StabilityReport linearized_spectrum(const EllipticProblem& prob, const StateFields& s, int count);

}  // namespace lvbif
