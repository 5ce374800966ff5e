#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "mcnv/banded.hpp"

using namespace mcnv;
using cplx = std::complex<double>;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Dense Gaussian elimination with partial pivoting, written longhand so
// the banded solver is checked against an independent algorithm.
template <typename T>
std::vector<T> dense_solve(std::vector<std::vector<T>> a, std::vector<T> b) {
  int n = int(b.size());
  for (int c = 0; c < n; ++c) {
    int p = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    std::swap(a[c], a[p]);
    std::swap(b[c], b[p]);
    for (int r = c + 1; r < n; ++r) {
      T m = a[r][c] / a[c][c];
      for (int q = c; q < n; ++q) a[r][q] -= m * a[c][q];
      b[r] -= m * b[c];
    }
  }
  for (int r = n - 1; r >= 0; --r) {
    T s = b[r];
    for (int q = r + 1; q < n; ++q) s -= a[r][q] * b[q];
    b[r] = s / a[r][r];
  }
  return b;
}

Banded random_band(int n, int kl, int ku, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Banded a(n, kl, ku);
  for (int r = 0; r < n; ++r)
    for (int c = std::max(0, r - kl); c <= std::min(n - 1, r + ku); ++c)
      a.at(r, c) = dist(rng) + (r == c ? 4.0 : 0.0);
  return a;
}

std::vector<std::vector<double>> densify(const Banded& a) {
  std::vector<std::vector<double>> d(size_t(a.n), std::vector<double>(size_t(a.n), 0.0));
  for (int r = 0; r < a.n; ++r)
    for (int c = std::max(0, r - a.kl); c <= std::min(a.n - 1, r + a.ku); ++c)
      d[size_t(r)][size_t(c)] = a.at(r, c);
  return d;
}

}  // namespace

TEST_CASE("apply matches dense multiplication") {
  Banded a = random_band(12, 2, 3, 17u);
  auto d = densify(a);
  std::vector<double> x(12), want(12, 0.0), got(12);
  for (int q = 0; q < 12; ++q) x[size_t(q)] = std::sin(1.0 + q);
  for (int r = 0; r < 12; ++r)
    for (int c = 0; c < 12; ++c) want[size_t(r)] += d[size_t(r)][size_t(c)] * x[size_t(c)];
  a.apply(x.data(), got.data());
  for (int q = 0; q < 12; ++q) CHECK(got[size_t(q)] == doctest::Approx(want[size_t(q)]).epsilon(1e-13));
}

TEST_CASE("real solve agrees with dense elimination") {
  for (unsigned seed : {1u, 2u, 3u}) {
    Banded a = random_band(15, 2, 2, seed);
    std::vector<double> b(15);
    std::mt19937 rng(seed + 100);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (double& q : b) q = dist(rng);

    std::vector<double> want = dense_solve(densify(a), b);
    BandedLU lu(a);
    std::vector<double> got = b;
    lu.solve(got.data());
    for (int q = 0; q < 15; ++q)
      CHECK(got[size_t(q)] == doctest::Approx(want[size_t(q)]).epsilon(1e-11));
  }
}

TEST_CASE("complex solve agrees with dense elimination") {
  Banded a = random_band(14, 1, 3, 9u);
  auto d = densify(a);
  std::vector<std::vector<cplx>> dc(14, std::vector<cplx>(14));
  for (int r = 0; r < 14; ++r)
    for (int c = 0; c < 14; ++c) dc[size_t(r)][size_t(c)] = d[size_t(r)][size_t(c)];
  std::vector<cplx> b(14);
  for (int q = 0; q < 14; ++q) b[size_t(q)] = cplx(std::cos(0.3 * q), std::sin(0.7 * q));

  std::vector<cplx> want = dense_solve(dc, b);
  BandedLU lu(a);
  std::vector<cplx> got = b;
  lu.solve(got.data());
  for (int q = 0; q < 14; ++q) CHECK(std::abs(got[size_t(q)] - want[size_t(q)]) < 1e-11);
}

TEST_CASE("pivoting handles a zero diagonal entry") {
  // Diagonally weak matrix that plain elimination without pivoting
  // would break on: a(0,0) = 0 forces a row swap at the first column.
  Banded a(4, 1, 1);
  a.at(0, 0) = 0.0;
  a.at(0, 1) = 2.0;
  a.at(1, 0) = 1.0;
  a.at(1, 1) = 1.0;
  a.at(1, 2) = 1.0;
  a.at(2, 1) = 3.0;
  a.at(2, 2) = 1.0;
  a.at(2, 3) = -1.0;
  a.at(3, 2) = 1.0;
  a.at(3, 3) = 2.0;
  std::vector<double> b = {2.0, 3.0, 3.0, 3.0};
  std::vector<double> want = dense_solve(densify(a), b);
  BandedLU lu(a);
  lu.solve(b.data());
  for (int q = 0; q < 4; ++q) CHECK(b[size_t(q)] == doctest::Approx(want[size_t(q)]).epsilon(1e-12));
}

TEST_CASE("singular matrix is rejected") {
  Banded a(3, 1, 1);
  a.at(0, 0) = 1.0;
  a.at(0, 1) = 2.0;
  a.at(1, 0) = 2.0;
  a.at(1, 1) = 4.0;  // rows 0 and 1 proportional, column 2 all zero after elimination
  CHECK_THROWS(BandedLU(a));
}

TEST_CASE("tridiagonal Helmholtz solve reproduces a discrete eigenvector") {
  // On the interior of a uniform grid with zero walls, sin(pi y_j) is an
  // exact eigenvector of the centred second difference with eigenvalue
  // mu = (2 - 2 cos(pi h)) / h^2, so (gamma + mu) sin(pi y) must come
  // back unchanged through the solve.
  int ny = 33;
  double h = 1.0 / (ny - 1);
  double gamma = 2.5;
  double mu = (2.0 - 2.0 * std::cos(kPi * h)) / (h * h);
  int n = ny - 2;
  Banded a(n, 1, 1);
  for (int r = 0; r < n; ++r) {
    a.at(r, r) = gamma + 2.0 / (h * h);
    if (r > 0) a.at(r, r - 1) = -1.0 / (h * h);
    if (r + 1 < n) a.at(r, r + 1) = -1.0 / (h * h);
  }
  std::vector<double> b(static_cast<size_t>(n));
  for (int r = 0; r < n; ++r) b[size_t(r)] = (gamma + mu) * std::sin(kPi * (r + 1) * h);
  BandedLU lu(a);
  lu.solve(b.data());
  for (int r = 0; r < n; ++r)
    CHECK(b[size_t(r)] == doctest::Approx(std::sin(kPi * (r + 1) * h)).epsilon(1e-12));
}
