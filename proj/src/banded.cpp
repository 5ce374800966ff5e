#include "mcnv/banded.hpp"

#include <algorithm>
#include <cmath>

#include "mcnv/check.hpp"

namespace mcnv {

void Banded::apply(const double* x, double* y) const {
  for (int r = 0; r < n; ++r) {
    double s = 0.0;
    int c0 = std::max(0, r - kl);
    int c1 = std::min(n - 1, r + ku);
    for (int c = c0; c <= c1; ++c) s += at(r, c) * x[c];
    y[r] = s;
  }
}

void Banded::apply(const std::complex<double>* x, std::complex<double>* y) const {
  for (int r = 0; r < n; ++r) {
    std::complex<double> s = 0.0;
    int c0 = std::max(0, r - kl);
    int c1 = std::min(n - 1, r + ku);
    for (int c = c0; c <= c1; ++c) s += at(r, c) * x[c];
    y[r] = s;
  }
}

BandedLU::BandedLU(const Banded& a) : lu(a.n, a.kl, a.kl + a.ku), piv(size_t(a.n), 0) {
  // Widen the stored band so fill-in from row swaps has a home: the
  // factored matrix is treated as having ku' = kl + ku superdiagonals.
  const int n = a.n;
  const int kl = a.kl;
  for (int r = 0; r < n; ++r) {
    int c0 = std::max(0, r - a.kl);
    int c1 = std::min(n - 1, r + a.ku);
    for (int c = c0; c <= c1; ++c) lu.at(r, c) = a.at(r, c);
  }
  const int kw = lu.ku;  // widened superdiagonal count
  for (int j = 0; j < n; ++j) {
    int rmax = std::min(n - 1, j + kl);
    int p = j;
    double best = std::fabs(lu.at(j, j));
    for (int r = j + 1; r <= rmax; ++r) {
      double v = std::fabs(lu.at(r, j));
      if (v > best) {
        best = v;
        p = r;
      }
    }
    require(best > 0.0, "banded LU: zero pivot column");
    piv[size_t(j)] = p;
    int cmax = std::min(n - 1, j + kw);
    if (p != j)
      for (int c = j; c <= cmax; ++c) std::swap(lu.at(j, c), lu.at(p, c));
    for (int r = j + 1; r <= rmax; ++r) {
      double m = lu.at(r, j) / lu.at(j, j);
      lu.at(r, j) = m;
      for (int c = j + 1; c <= cmax; ++c) lu.at(r, c) -= m * lu.at(j, c);
    }
  }
}

namespace {
template <class T>
void solve_impl(const Banded& lu, const std::vector<int>& piv, int kl, T* b) {
  const int n = lu.n;
  for (int j = 0; j < n; ++j) {
    int p = piv[size_t(j)];
    if (p != j) std::swap(b[j], b[p]);
    int rmax = std::min(n - 1, j + kl);
    for (int r = j + 1; r <= rmax; ++r) b[r] -= lu.at(r, j) * b[j];
  }
  for (int r = n - 1; r >= 0; --r) {
    int cmax = std::min(n - 1, r + lu.ku);
    T s = b[r];
    for (int c = r + 1; c <= cmax; ++c) s -= lu.at(r, c) * b[c];
    b[r] = s / lu.at(r, r);
  }
}
}  // namespace

void BandedLU::solve(double* b) const { solve_impl(lu, piv, lu.kl, b); }
void BandedLU::solve(std::complex<double>* b) const { solve_impl(lu, piv, lu.kl, b); }

}  // namespace mcnv
