#pragma once

#include <string>
#include <vector>

#include "core/bifurcation_points.hpp"
#include "core/elliptic_solver.hpp"
#include "core/nodal.hpp"

namespace lvbif {

struct BranchPoint {
  double s = 0.0;  // signed accumulated arclength
  StateFields state;
  NodalDiagnostic nodal;
  double residual = 0.0;
  double constraint_residual = 0.0;
  double sup_u1 = 0.0, sup_u2 = 0.0;
  double min_u1 = 0.0, min_u2 = 0.0;
  double h1_u1 = 0.0, h1_u2 = 0.0;  // H¹ seminorms
  double overlap = 0.0;             // ∫ u1² u2
  int newton_iterations = 0;

  bool strictly_inside() const { return min_u1 > 0.0 && min_u2 > 0.0 && sup_u1 < 1.0 && sup_u2 < 1.0; }
};

enum class Termination { BetaCeiling, StepFailure, LoopDetected, PointBudget, NodalChange };
std::string to_string(Termination t);

struct BranchConfig {
  double beta_max = 0.0;      // absolute; 0 means 1e3 * beta_j
  int max_points = 500;       // per direction, switch point included
  double amplitude = 1e-2;    // switch amplitude relative to min(a/|m|, b)
  double ds_min = 1e-12;
  double grow = 1.3;
  int fast_iterations = 3;    // grow the step when the corrector needs at most this many
  int max_corrector = 12;
  double newton_tol = 1e-11;
  bool enforce_nodal = true;  // abort on a nodal change (only meaningful for σ = μ)
};

struct Branch {
  int j = 0;
  int direction = 1;
  BifurcationPoint origin;
  std::vector<BranchPoint> points;
  Termination termination = Termination::StepFailure;
  std::string note;
  double switch_amplitude = 0.0;  // coefficient of h0 actually used
};

/// Point measurements (norms, overlap, nodal diagnostic of v = (βγ-μ)u1 - (βα-μ)u2).
BranchPoint measure_point(const EllipticProblem& prob, const StateFields& s, double arclength);

// ⟨u1,v1⟩_W + ⟨u2,v2⟩_W + |B_1| β β'.
double arclength_inner(const EllipticProblem& prob, const StateFields& x, const StateFields& y);

// ||u - c(β)||_W with c the constant state at the same β.
double distance_to_stem(const EllipticProblem& prob, const StateFields& s);

/// First point off the constant stem: solves F = 0 together with ⟨u, h0⟩_W = t ⟨h0, h0⟩_W,
/// β free, starting from c(β_j) + t h0, where t = direction * amplitude * min(a/|m|, b).
/// Doubles the amplitude (up to 3 times) when the corrector falls back onto the stem.
/// Throws SolverError when every attempt fails.
BranchPoint branch_switch(const EllipticProblem& prob, const BifurcationPoint& origin, double amplitude,
                          int direction, double* used_coefficient = nullptr);

/// Pseudo-arclength continuation from the switch point in one direction.
Branch continue_branch(const EllipticProblem& prob, const BifurcationPoint& origin, int direction,
                       const BranchConfig& cfg = {});

struct OverlapSample {
  double beta = 0.0;
  double overlap = 0.0;
};
std::vector<OverlapSample> overlap_decay(const Branch& branch);

}  // namespace lvbif
