#include "mcnv/oracles.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "mcnv/check.hpp"

namespace mcnv {

namespace {

using cplx = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

constexpr double kPi = 3.14159265358979323846;

bool axial(const Grid& g, int m) { return m == 0 || m == g.nx / 2; }

double signed_k(const Grid& g, int m) {
  if (m == g.nx / 2) return 0.0;
  int mt = (m <= g.nx / 2) ? m : m - g.nx;
  return 2.0 * kPi * mt / g.length;
}

// Forward DFT of one field, written out longhand.
std::vector<std::vector<cplx>> dft_columns(const ScalarField& f) {
  const Grid& g = f.grid;
  std::vector<std::vector<cplx>> out(size_t(g.nx), std::vector<cplx>(size_t(g.ny)));
  for (int m = 0; m < g.nx; ++m)
    for (int i = 0; i < g.nx; ++i) {
      double a = -2.0 * kPi * double(size_t(i) * m % size_t(g.nx)) / g.nx;
      cplx t(std::cos(a), std::sin(a));
      for (int j = 0; j < g.ny; ++j) out[size_t(m)][size_t(j)] += t * f.at(i, j);
    }
  return out;
}

ScalarField idft_columns(const Grid& g, const std::vector<std::vector<cplx>>& cols) {
  ScalarField f(g);
  for (int i = 0; i < g.nx; ++i)
    for (int m = 0; m < g.nx; ++m) {
      double a = 2.0 * kPi * double(size_t(i) * m % size_t(g.nx)) / g.nx;
      cplx t(std::cos(a), std::sin(a));
      for (int j = 0; j < g.ny; ++j)
        f.at(i, j) += (t * cols[size_t(m)][size_t(j)]).real() / g.nx;
    }
  return f;
}

// Dense -(D2 - k^2) on interior nodes, walls clamped.
MatrixXd dense_negL2(int ny, double hy, double k2) {
  int ni = ny - 2;
  double hh = hy * hy;
  MatrixXd a = MatrixXd::Zero(ni, ni);
  for (int r = 0; r < ni; ++r) {
    a(r, r) = 2.0 / hh + k2;
    if (r > 0) a(r, r - 1) = -1.0 / hh;
    if (r + 1 < ni) a(r, r + 1) = -1.0 / hh;
  }
  return a;
}

// Dense (D2 - k^2)^2 assembled the classical way: D4 with reflected
// ghosts next to the walls, minus 2 k^2 D2, plus k^4.
MatrixXd dense_l2sq(int ny, double hy, double k2) {
  int ni = ny - 2;
  double h4 = hy * hy * hy * hy;
  double hh = hy * hy;
  MatrixXd a = MatrixXd::Zero(ni, ni);
  for (int r = 0; r < ni; ++r) {
    auto add = [&](int c, double v) {
      if (c >= 0 && c < ni) a(r, c) += v;
    };
    add(r - 2, 1.0 / h4);
    add(r - 1, -4.0 / h4);
    add(r, 6.0 / h4);
    add(r + 1, -4.0 / h4);
    add(r + 2, 1.0 / h4);
    if (r == 0) add(0, 1.0 / h4);            // psi(-1) = psi(1)
    if (r == ni - 1) add(ni - 1, 1.0 / h4);  // psi(ny) = psi(ny-2)
    add(r - 1, -2.0 * k2 / hh);
    add(r, 4.0 * k2 / hh);
    add(r + 1, -2.0 * k2 / hh);
    add(r, k2 * k2);
  }
  return a;
}

MatrixXd dense_negD2(int ny, double hy) { return dense_negL2(ny, hy, 0.0); }

}  // namespace

VectorField oracle_stokes_solve(const VectorField& f, double gamma) {
  const Grid& g = f.grid();
  const int n = g.ny;
  const int ni = n - 2;
  const double hy = g.hy();
  require_arg(size_t(g.nx) * ni <= 2048, "oracle_stokes_solve: grid too large for dense algebra");

  auto f1 = dft_columns(f.x);
  auto f2 = dft_columns(f.y);

  // one monolithic system over every mode's interior unknowns
  const int total = g.nx * ni;
  MatrixXcd big = MatrixXcd::Zero(total, total);
  VectorXcd rhs = VectorXcd::Zero(total);
  for (int m = 0; m < g.nx; ++m) {
    int base = m * ni;
    if (axial(g, m)) {
      MatrixXd block = dense_negD2(n, hy);
      block.diagonal().array() += gamma;
      big.block(base, base, ni, ni) = block.cast<cplx>();
      for (int j = 1; j + 1 < n; ++j) rhs(base + j - 1) = f1[size_t(m)][size_t(j)];
    } else {
      double k = signed_k(g, m);
      MatrixXd block = gamma * dense_negL2(n, hy, k * k) + dense_l2sq(n, hy, k * k);
      big.block(base, base, ni, ni) = block.cast<cplx>();
      for (int j = 1; j + 1 < n; ++j)
        rhs(base + j - 1) = cplx(0.0, k) * f2[size_t(m)][size_t(j)] -
                            (f1[size_t(m)][size_t(j + 1)] - f1[size_t(m)][size_t(j - 1)]) /
                                (2.0 * hy);
    }
  }
  VectorXcd sol = big.partialPivLu().solve(rhs);

  std::vector<std::vector<cplx>> u1(size_t(g.nx), std::vector<cplx>(size_t(n)));
  std::vector<std::vector<cplx>> u2(size_t(g.nx), std::vector<cplx>(size_t(n)));
  for (int m = 0; m < g.nx; ++m) {
    int base = m * ni;
    if (axial(g, m)) {
      for (int j = 1; j + 1 < n; ++j) u1[size_t(m)][size_t(j)] = sol(base + j - 1);
    } else {
      double k = signed_k(g, m);
      for (int j = 1; j + 1 < n; ++j) {
        cplx up = (j + 1 < n - 1) ? sol(base + j) : cplx(0.0);
        cplx dn = (j - 1 > 0) ? sol(base + j - 2) : cplx(0.0);
        u1[size_t(m)][size_t(j)] = (up - dn) / (2.0 * hy);
        u2[size_t(m)][size_t(j)] = cplx(0.0, -k) * sol(base + j - 1);
      }
    }
  }
  VectorField u;
  u.x = idft_columns(g, u1);
  u.y = idft_columns(g, u2);
  return u;
}

VectorField oracle_semigroup(const VectorField& u0, double tau) {
  const Grid& g = u0.grid();
  const int n = g.ny;
  const int ni = n - 2;
  const double hy = g.hy();
  require_arg(g.ny <= 33, "oracle_semigroup: ny too large for dense matrix exponentials");

  auto c1 = dft_columns(u0.x);
  auto c2 = dft_columns(u0.y);
  std::vector<std::vector<cplx>> u1(size_t(g.nx), std::vector<cplx>(size_t(n)));
  std::vector<std::vector<cplx>> u2(size_t(g.nx), std::vector<cplx>(size_t(n)));

  for (int m = 0; m < g.nx; ++m) {
    if (axial(g, m)) {
      MatrixXd e = (-tau * dense_negD2(n, hy)).exp();
      VectorXcd v(ni);
      for (int j = 1; j + 1 < n; ++j) v(j - 1) = c1[size_t(m)][size_t(j)];
      VectorXcd w = e.cast<cplx>() * v;
      for (int j = 1; j + 1 < n; ++j) u1[size_t(m)][size_t(j)] = w(j - 1);
    } else {
      double k = signed_k(g, m);
      MatrixXd negL2 = dense_negL2(n, hy, k * k);
      MatrixXd mk = negL2.partialPivLu().solve(dense_l2sq(n, hy, k * k));
      MatrixXd e = (-tau * mk).exp();
      VectorXcd psi(ni);
      for (int j = 1; j + 1 < n; ++j)
        psi(j - 1) = cplx(0.0, 1.0 / k) * c2[size_t(m)][size_t(j)];
      VectorXcd w = e.cast<cplx>() * psi;
      for (int j = 1; j + 1 < n; ++j) {
        cplx up = (j + 1 < n - 1) ? w(j) : cplx(0.0);
        cplx dn = (j - 1 > 0) ? w(j - 2) : cplx(0.0);
        u1[size_t(m)][size_t(j)] = (up - dn) / (2.0 * hy);
        u2[size_t(m)][size_t(j)] = cplx(0.0, -k) * w(j - 1);
      }
    }
  }
  VectorField u;
  u.x = idft_columns(g, u1);
  u.y = idft_columns(g, u2);
  return u;
}

double oracle_slowest_decay(const Grid& g) {
  const int n = g.ny;
  const double hy = g.hy();
  require_arg(g.ny <= 65, "oracle_slowest_decay: ny too large for dense eigensolves");
  double best = std::numeric_limits<double>::infinity();
  // axial family: eigenvalues of -D2 with clamped walls
  {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(dense_negD2(n, hy));
    best = std::min(best, es.eigenvalues().minCoeff());
  }
  // wave families: L2^2 psi = lambda (-L2) psi, both sides symmetric
  for (int mk = 1; mk < g.nx / 2; ++mk) {
    double k = 2.0 * kPi * mk / g.length;
    Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> es(dense_l2sq(n, hy, k * k),
                                                          dense_negL2(n, hy, k * k));
    best = std::min(best, es.eigenvalues().minCoeff());
  }
  return best;
}

}  // namespace mcnv
