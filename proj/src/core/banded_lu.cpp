#include "core/banded_lu.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace lvbif {

BandedMatrix::BandedMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), width_(kl + ku + 1),
      data_(static_cast<std::size_t>(n) * (kl + ku + 1), 0.0) {}

double BandedMatrix::get(int i, int j) const {
  if (!in_band(i, j)) return 0.0;
  return data_[static_cast<std::size_t>(i) * width_ + (j - i + kl_)];
}

void BandedMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  for (int i = 0; i < n_; ++i) {
    double s = 0.0;
    const int j0 = std::max(0, i - kl_), j1 = std::min(n_ - 1, i + ku_);
    for (int j = j0; j <= j1; ++j) s += data_[static_cast<std::size_t>(i) * width_ + (j - i + kl_)] * x[j];
    y[i] = s;
  }
}

void BandedMatrix::multiply_transpose(std::span<const double> x, std::span<double> y) const {
  std::fill(y.begin(), y.end(), 0.0);
  for (int i = 0; i < n_; ++i) {
    const int j0 = std::max(0, i - kl_), j1 = std::min(n_ - 1, i + ku_);
    for (int j = j0; j <= j1; ++j) y[j] += data_[static_cast<std::size_t>(i) * width_ + (j - i + kl_)] * x[i];
  }
}

double BandedMatrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

BandedLU::BandedLU(const BandedMatrix& a)
    : n_(a.size()), kl_(a.lower()), ku_(a.upper()), width_(2 * a.lower() + a.upper() + 1),
      data_(static_cast<std::size_t>(a.size()) * (2 * a.lower() + a.upper() + 1), 0.0),
      piv_(a.size()) {
  for (int i = 0; i < n_; ++i) {
    const int j0 = std::max(0, i - kl_), j1 = std::min(n_ - 1, i + ku_);
    for (int j = j0; j <= j1; ++j) lu(i, j) = a.get(i, j);
  }
  const int uw = kl_ + ku_;
  for (int k = 0; k < n_; ++k) {
    const int last = std::min(n_ - 1, k + kl_);
    int p = k;
    double best = std::abs(lu(k, k));
    for (int i = k + 1; i <= last; ++i) {
      if (std::abs(lu(i, k)) > best) {
        best = std::abs(lu(i, k));
        p = i;
      }
    }
    piv_[k] = p;
    if (best == 0.0) throw SolverError("banded LU: exactly singular matrix", 0.0);
    const int cmax = std::min(n_ - 1, k + uw);
    if (p != k)
      for (int c = k; c <= cmax; ++c) std::swap(lu(k, c), lu(p, c));
    const double inv = 1.0 / lu(k, k);
    for (int i = k + 1; i <= last; ++i) {
      const double l = lu(i, k) * inv;
      lu(i, k) = l;
      if (l == 0.0) continue;
      for (int c = k + 1; c <= cmax; ++c) lu(i, c) -= l * lu(k, c);
    }
  }
}

void BandedLU::solve(std::span<double> b) const {
  for (int k = 0; k < n_; ++k) {
    if (piv_[k] != k) std::swap(b[k], b[piv_[k]]);
    const int last = std::min(n_ - 1, k + kl_);
    for (int i = k + 1; i <= last; ++i) b[i] -= lu(i, k) * b[k];
  }
  const int uw = kl_ + ku_;
  for (int k = n_ - 1; k >= 0; --k) {
    double s = b[k];
    const int cmax = std::min(n_ - 1, k + uw);
    for (int c = k + 1; c <= cmax; ++c) s -= lu(k, c) * b[c];
    b[k] = s / lu(k, k);
  }
}

void BandedLU::solve_transpose(std::span<double> b) const {
  const int uw = kl_ + ku_;
  for (int k = 0; k < n_; ++k) {
    double s = b[k];
    for (int c = std::max(0, k - uw); c < k; ++c) s -= lu(c, k) * b[c];
    b[k] = s / lu(k, k);
  }
  for (int k = n_ - 1; k >= 0; --k) {
    const int last = std::min(n_ - 1, k + kl_);
    double s = b[k];
    for (int i = k + 1; i <= last; ++i) s -= lu(i, k) * b[i];
    b[k] = s;
    if (piv_[k] != k) std::swap(b[k], b[piv_[k]]);
  }
}

double BandedLU::min_abs_pivot() const {
  double m = INFINITY;
  for (int k = 0; k < n_; ++k) m = std::min(m, std::abs(lu(k, k)));
  return m;
}

double BandedLU::smallest_singular_value(int iterations) const {
  std::vector<double> x(n_);
  for (int i = 0; i < n_; ++i) x[i] = 1.0 + 0.37 * std::sin(1.0 + 2.3 * i);
  double growth = 0.0;
  for (int it = 0; it < iterations; ++it) {
    double nx = 0.0;
    for (double v : x) nx += v * v;
    nx = std::sqrt(nx);
    for (double& v : x) v /= nx;
    solve_transpose(x);
    solve(x);
    double ny = 0.0;
    for (double v : x) ny += v * v;
    growth = std::sqrt(ny);
  }
  return growth > 0.0 ? 1.0 / std::sqrt(growth) : INFINITY;
}

}  // namespace lvbif
