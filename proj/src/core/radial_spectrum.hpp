#pragma once

#include <span>
#include <vector>

namespace lvbif {

// Staggered cell-centred grid on [0,1]: r_i = (i + 1/2) h with h = 1/(n - 1/2), so the
// last node sits on the boundary r = 1. Cell i spans [r_i - h/2, r_i + h/2] clipped to [0,1].
struct RadialGrid {
  int dim = 2;
  int n = 0;
  double h = 0.0;
  std::vector<double> r;
  std::vector<double> rho;      // r^{dim-1} at the n-1 interior faces
  std::vector<double> vol;      // ∫ r^{dim-1} dr over each cell
  std::vector<double> weights;  // cell measure in R^dim; sums to |B_1|
  double ball_measure = 0.0;
};

double unit_ball_measure(int dim);

/// Throws ValidationError unless n >= 16 and dim >= 2.
RadialGrid build_grid(int dim, int n);

double weighted_inner(const RadialGrid& g, std::span<const double> u, std::span<const double> v);
double weighted_integral(const RadialGrid& g, std::span<const double> u);

// Finite-volume form of -(r^{N-1} u')' / r^{N-1} with zero flux at r = 0 and r = 1.
// Rows: K_ii = (rho_{i-1/2} + rho_{i+1/2}) / (h vol_i), K_{i,i±1} = -rho / (h vol_i).
struct DiscreteOperator {
  int n = 0;
  double h = 0.0;
  std::vector<double> rho;
  std::vector<double> vol;
  std::vector<double> diag;
  std::vector<double> lower;  // K_{i+1,i}
  std::vector<double> upper;  // K_{i,i+1}
  std::vector<double> sym_off;  // off-diagonal of S K S^{-1}, S = diag(sqrt(vol))

  // Flux differences, so constants map to exact zeros.
  void apply(std::span<const double> u, std::span<double> out) const;
  std::vector<double> apply(std::span<const double> u) const;
};

DiscreteOperator assemble_neumann_laplacian(const RadialGrid& g);

struct EigenPair {
  int j = 0;
  double lambda = 0.0;
  std::vector<double> f;  // max |f| = 1, f at the first node > 0
  double residual = 0.0;  // ||K f - lambda f||_inf
};

/// First k+1 eigenpairs (λ_0 = 0 with f_0 ≡ 1 included). Throws SolverError if inverse iteration
/// stalls or an eigenfunction does not have exactly j sign changes.
std::vector<EigenPair> eigenpairs(const DiscreteOperator& op, const RadialGrid& g, int k);

// Number of eigenvalues of the symmetric tridiagonal form below x.
int sturm_count(const DiscreteOperator& op, double x);

// Strict sign changes, ignoring entries with |f| <= rel * max|f|.
int count_sign_changes(std::span<const double> f, double rel = 1e-8);

/// λ_j of the continuous problem: square of the j-th positive zero of J_{dim/2}.
/// Throws SolverError if a root cannot be bracketed.
double bessel_oracle(int dim, int j);

/// Richardson extrapolation of λ_1..λ_k from grids n and 2n, assuming an h² leading error.
std::vector<double> extrapolated_eigenvalues(int dim, int n, int k);

}  // namespace lvbif
