#pragma once

#include <span>
#include <vector>

namespace lvbif {

// Square band matrix with kl sub- and ku super-diagonals, row-major band storage.
class BandedMatrix {
public:
  BandedMatrix(int n, int kl, int ku);

  int size() const { return n_; }
  int lower() const { return kl_; }
  int upper() const { return ku_; }

  // Entries outside the band read as zero; writing one is a programming error.
  double get(int i, int j) const;
  double& at(int i, int j) { return data_[static_cast<std::size_t>(i) * width_ + (j - i + kl_)]; }
  bool in_band(int i, int j) const { return j - i <= ku_ && i - j <= kl_; }

  void multiply(std::span<const double> x, std::span<double> y) const;
  void multiply_transpose(std::span<const double> x, std::span<double> y) const;
  double max_abs() const;

private:
  int n_, kl_, ku_, width_;
  std::vector<double> data_;
};

// Gaussian elimination with partial pivoting (fill-in widens U to kl+ku super-diagonals).
class BandedLU {
public:
  explicit BandedLU(const BandedMatrix& a);

  int size() const { return n_; }
  void solve(std::span<double> b) const;
  void solve_transpose(std::span<double> b) const;
  double min_abs_pivot() const;

  // Estimate of the smallest singular value by inverse iteration on AᵀA.
  double smallest_singular_value(int iterations = 8) const;

private:
  double& lu(int i, int j) { return data_[static_cast<std::size_t>(i) * width_ + (j - i + kl_)]; }
  double lu(int i, int j) const { return data_[static_cast<std::size_t>(i) * width_ + (j - i + kl_)]; }

  int n_, kl_, ku_, width_;
  std::vector<double> data_;
  std::vector<int> piv_;
};

}  // namespace lvbif
