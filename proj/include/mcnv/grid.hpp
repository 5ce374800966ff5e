#pragma once
// Uniform channel grid and nodal field containers.
//
// The domain is [0, L) x [0, 1]: periodic in x with Nx columns spaced
// hx = L/Nx, wall-bounded in y with Ny rows including both walls,
// hy = 1/(Ny - 1). Fields store values row-major over (i, j) with
// index i*Ny + j, so a y-column at fixed x is contiguous.

#include <vector>

namespace mcnv {

struct Grid {
  int nx = 0;
  int ny = 0;
  double length = 0.0;

  double hx() const { return length / nx; }
  double hy() const { return 1.0 / (ny - 1); }
  double x(int i) const { return i * hx(); }
  // y(ny-1) evaluates to exactly 1.0 for every ny.
  double y(int j) const { return double(j) / double(ny - 1); }
  int cells() const { return nx * ny; }
  bool same(const Grid& o) const {
    return nx == o.nx && ny == o.ny && length == o.length;
  }
};

// Validates nx even and >= 4, ny >= 5, length > 0.
Grid make_grid(int nx, int ny, double length);

struct ScalarField {
  Grid grid;
  std::vector<double> v;

  ScalarField() = default;
  explicit ScalarField(const Grid& g) : grid(g), v(size_t(g.cells()), 0.0) {}

  double& at(int i, int j) { return v[size_t(i) * grid.ny + j]; }
  double at(int i, int j) const { return v[size_t(i) * grid.ny + j]; }
};

struct VectorField {
  ScalarField x;  // horizontal component
  ScalarField y;  // vertical component

  VectorField() = default;
  explicit VectorField(const Grid& g) : x(g), y(g) {}
  const Grid& grid() const { return x.grid; }
};

// Elementwise helpers; operands must share a grid.
ScalarField add(const ScalarField& a, const ScalarField& b);
ScalarField sub(const ScalarField& a, const ScalarField& b);
ScalarField scale(const ScalarField& a, double s);
VectorField add(const VectorField& a, const VectorField& b);
VectorField sub(const VectorField& a, const VectorField& b);
VectorField scale(const VectorField& a, double s);

bool all_finite(const ScalarField& f);
bool all_finite(const VectorField& f);

}  // namespace mcnv
