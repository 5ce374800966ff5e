#pragma once
// Real banded matrices with LU factorisation and partial pivoting.
//
// Storage follows the LAPACK band layout: entry (r, c) lives at
// ab[(kl + ku + r - c) * n + c] and the top kl rows of the array are
// reserved for pivoting fill-in, so a matrix with kl subdiagonals and
// ku superdiagonals occupies (2*kl + ku + 1) x n values.

#include <complex>
#include <vector>

namespace mcnv {

struct Banded {
  int n = 0;
  int kl = 0;
  int ku = 0;
  std::vector<double> ab;

  Banded() = default;
  Banded(int n_, int kl_, int ku_)
      : n(n_), kl(kl_), ku(ku_), ab(size_t(2 * kl_ + ku_ + 1) * n_, 0.0) {}

  // In-band accessor; r - c must lie in [-(ku + kl), kl].
  double& at(int r, int c) { return ab[size_t(kl + ku + r - c) * n + c]; }
  double at(int r, int c) const { return ab[size_t(kl + ku + r - c) * n + c]; }
  bool stores(int r, int c) const {
    int d = r - c;
    return d <= kl && d >= -(ku + kl);
  }

  // y = A x, reading only the declared band (fill rows ignored).
  void apply(const double* x, double* y) const;
  void apply(const std::complex<double>* x, std::complex<double>* y) const;
};

struct BandedLU {
  Banded lu;
  std::vector<int> piv;

  // Factors a copy of a; throws on a zero pivot column.
  explicit BandedLU(const Banded& a);
  void solve(double* b) const;
  void solve(std::complex<double>* b) const;
};

}  // namespace mcnv
