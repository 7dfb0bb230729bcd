#pragma once

#include "core/model_params.hpp"

namespace lvbif {

struct Matrix2 {
  double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

  Matrix2 transpose() const { return {a11, a21, a12, a22}; }
  double trace() const { return a11 + a22; }
  double max_abs() const;
};

Matrix2 operator*(const Matrix2& x, const Matrix2& y);

// max |X V - V diag(d1, d2)|, entrywise.
double eigen_residual(const Matrix2& x, const Matrix2& v, double d1, double d2);

// Slope x of an eigenvector (x, 1) of `a` for eigenvalue d, using whichever row is better conditioned.
double eigvec_slope(const Matrix2& a, double d);

/// A(β) = [[μa, βαa], [βγb, σb]] at the constant state. Throws DomainError unless β > σ/γ.
Matrix2 interaction_matrix(const Params& p, double beta);
/// M(β) = A(β)ᵀ, the matrix of the adjoint linearization.
Matrix2 adjoint_matrix(const Params& p, double beta);

struct LinearizationSpectrum {
  double beta = 0.0;
  double a = 0.0, b = 0.0;
  double delta1 = 0.0, delta2 = 0.0;
  double m = 0.0;  // A (m, 1)ᵀ = δ1 (m, 1)ᵀ
  Matrix2 Q;       // columns: δ1- and δ2-eigenvectors of A, second entries 1
  Matrix2 P;       // same for M
};

/// δ2 = (tr + √disc)/2 and δ1 = det/δ2, with disc = 4β²αγab + (μa-σb)²; never subtracts the radical.
LinearizationSpectrum spectral_split(const Params& p, double beta);
double delta1(const Params& p, double beta);

struct IndexSpectrum {
  double beta = 0.0;
  double lambda = 1.0;
  double delta1_l = 0.0, delta2_l = 0.0;
  Matrix2 D;
  Matrix2 R;  // columns: δ1(β,λ)- and δ2(β,λ)-eigenvectors of D, second entries 1
};

/// D(β,λ) = (1/λ)[[-μλ+βαb, -βαa], [-βγb, -σλ+βγa]], with the diagonal rewritten through
/// βαb = μ(1-a) and βγa = σ(1-b) so that D(β,1) = -A(β) holds exactly.
/// Throws DomainError unless β > σ/γ and λ ≥ 1.
Matrix2 index_matrix(const Params& p, double beta, double lambda);
IndexSpectrum index_spectrum(const Params& p, double beta, double lambda);

}  // namespace lvbif
