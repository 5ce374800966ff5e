#include "mcnv/ops.hpp"

#include <cmath>

#include "mcnv/check.hpp"

namespace mcnv {

ScalarField dy(const ScalarField& f, Wall wall) {
  const Grid& g = f.grid;
  ScalarField r(g);
  const double h2 = 2.0 * g.hy();
  const int n = g.ny;
  for (int i = 0; i < g.nx; ++i) {
    const double* c = &f.v[size_t(i) * n];
    double* d = &r.v[size_t(i) * n];
    for (int j = 1; j + 1 < n; ++j) d[j] = (c[j + 1] - c[j - 1]) / h2;
    if (wall == Wall::Reflect) {
      d[0] = 0.0;
      d[n - 1] = 0.0;
    } else {
      d[0] = (-3.0 * c[0] + 4.0 * c[1] - c[2]) / h2;
      d[n - 1] = (3.0 * c[n - 1] - 4.0 * c[n - 2] + c[n - 3]) / h2;
    }
  }
  return r;
}

ScalarField d2y(const ScalarField& f, Wall wall) {
  const Grid& g = f.grid;
  ScalarField r(g);
  const double hh = g.hy() * g.hy();
  const int n = g.ny;
  for (int i = 0; i < g.nx; ++i) {
    const double* c = &f.v[size_t(i) * n];
    double* d = &r.v[size_t(i) * n];
    for (int j = 1; j + 1 < n; ++j) d[j] = (c[j + 1] - 2.0 * c[j] + c[j - 1]) / hh;
    if (wall == Wall::Reflect) {
      d[0] = (2.0 * c[1] - 2.0 * c[0]) / hh;
      d[n - 1] = (2.0 * c[n - 2] - 2.0 * c[n - 1]) / hh;
    } else {
      d[0] = (2.0 * c[0] - 5.0 * c[1] + 4.0 * c[2] - c[3]) / hh;
      d[n - 1] = (2.0 * c[n - 1] - 5.0 * c[n - 2] + 4.0 * c[n - 3] - c[n - 4]) / hh;
    }
  }
  return r;
}

ScalarField laplacian(const ScalarField& f, Wall wall) {
  const Grid& g = f.grid;
  SpectralField s = to_modes(f);
  for (int m = 0; m < g.nx; ++m) {
    double k = wavenumber(g, m);
    double kk = -k * k;
    std::complex<double>* col = &s.v[size_t(m) * g.ny];
    for (int j = 0; j < g.ny; ++j) col[j] *= kk;
  }
  ScalarField fxx = from_modes(s);
  return add(fxx, d2y(f, wall));
}

VectorField laplacian(const VectorField& f, Wall wall) {
  VectorField r;
  r.x = laplacian(f.x, wall);
  r.y = laplacian(f.y, wall);
  return r;
}

ScalarField divergence(const VectorField& f) {
  return add(dx(f.x), dy(f.y, Wall::Reflect));
}

ScalarField curl2d(const VectorField& f) {
  return sub(dx(f.y), dy(f.x, Wall::OneSided));
}

VectorField grad(const ScalarField& f) {
  VectorField r;
  r.x = dx(f);
  r.y = dy(f, Wall::OneSided);
  return r;
}

VectorField velocity_from_streamfunction(const ScalarField& psi) {
  const Grid& g = psi.grid;
  double amp = 0.0;
  double wallmax = 0.0;
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 0; j < g.ny; ++j) amp = std::max(amp, std::fabs(psi.at(i, j)));
    wallmax = std::max({wallmax, std::fabs(psi.at(i, 0)), std::fabs(psi.at(i, g.ny - 1))});
  }
  require_arg(wallmax <= 1e-12 * std::max(amp, 1.0),
              "velocity_from_streamfunction: psi must vanish on the walls");
  // Snap the (numerically zero) wall rows to exact zeros so the
  // resulting velocity vanishes on the walls bit for bit.
  ScalarField clamped = psi;
  for (int i = 0; i < g.nx; ++i) {
    clamped.at(i, 0) = 0.0;
    clamped.at(i, g.ny - 1) = 0.0;
  }
  VectorField u;
  u.x = dy(clamped, Wall::Reflect);
  u.y = scale(dx(clamped), -1.0);
  return u;
}

}  // namespace mcnv
