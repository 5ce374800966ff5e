#include "mcnv/grid.hpp"

#include <cmath>

#include "mcnv/check.hpp"

namespace mcnv {

Grid make_grid(int nx, int ny, double length) {
  require_arg(nx >= 4, "grid: nx must be >= 4");
  require_arg(nx % 2 == 0, "grid: nx must be even");
  require_arg(ny >= 5, "grid: ny must be >= 5");
  require_arg(length > 0.0, "grid: length must be positive");
  return Grid{nx, ny, length};
}

namespace {
void check_same(const Grid& a, const Grid& b) {
  require(a.same(b), "field arithmetic: grids differ");
}
}  // namespace

ScalarField add(const ScalarField& a, const ScalarField& b) {
  check_same(a.grid, b.grid);
  ScalarField r(a.grid);
  for (size_t n = 0; n < r.v.size(); ++n) r.v[n] = a.v[n] + b.v[n];
  return r;
}

ScalarField sub(const ScalarField& a, const ScalarField& b) {
  check_same(a.grid, b.grid);
  ScalarField r(a.grid);
  for (size_t n = 0; n < r.v.size(); ++n) r.v[n] = a.v[n] - b.v[n];
  return r;
}

ScalarField scale(const ScalarField& a, double s) {
  ScalarField r(a.grid);
  for (size_t n = 0; n < r.v.size(); ++n) r.v[n] = s * a.v[n];
  return r;
}

VectorField add(const VectorField& a, const VectorField& b) {
  VectorField r;
  r.x = add(a.x, b.x);
  r.y = add(a.y, b.y);
  return r;
}

VectorField sub(const VectorField& a, const VectorField& b) {
  VectorField r;
  r.x = sub(a.x, b.x);
  r.y = sub(a.y, b.y);
  return r;
}

VectorField scale(const VectorField& a, double s) {
  VectorField r;
  r.x = scale(a.x, s);
  r.y = scale(a.y, s);
  return r;
}

bool all_finite(const ScalarField& f) {
  for (double x : f.v)
    if (!std::isfinite(x)) return false;
  return true;
}

bool all_finite(const VectorField& f) { return all_finite(f.x) && all_finite(f.y); }

}  // namespace mcnv
