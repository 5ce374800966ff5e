#pragma once
// Finite-difference derivatives in y and the vector calculus built from
// them plus the spectral x-derivative.
//
// Wall handling comes in two flavours:
//   OneSided : second-order one-sided stencils at j = 0 and j = Ny-1,
//              e.g. f'(y0) ~ (-3 f0 + 4 f1 - f2) / (2 hy). The default
//              for generic fields.
//   Reflect  : even-reflection ghosts f(-1) = f(1), f(Ny) = f(Ny-2), so
//              centred stencils apply at the walls and first derivatives
//              vanish there. Used for streamfunctions clamped to the
//              walls and for the vertical component inside divergence,
//              where the no-penetration condition makes the reflection
//              exact.
//
// divergence() uses Reflect on the vertical component; with that choice
// divergence(velocity_from_streamfunction(psi)) cancels identically at
// every node, walls included, because the x- and y-stencils act on
// disjoint indices.

#include "mcnv/grid.hpp"
#include "mcnv/spectral.hpp"

namespace mcnv {

enum class Wall { OneSided, Reflect };

ScalarField dy(const ScalarField& f, Wall wall = Wall::OneSided);
ScalarField d2y(const ScalarField& f, Wall wall = Wall::OneSided);

// dxx + dyy, with dxx the composition dx(dx(.)) in mode space (so the
// Nyquist mode drops out, matching the first-derivative convention).
ScalarField laplacian(const ScalarField& f, Wall wall = Wall::OneSided);
VectorField laplacian(const VectorField& f, Wall wall = Wall::OneSided);

ScalarField divergence(const VectorField& f);
ScalarField curl2d(const VectorField& f);
VectorField grad(const ScalarField& f);

// u = (dy psi, -dx psi) with Reflect ghosts, so u vanishes on the walls
// whenever psi does. Rejects psi with nonzero wall rows.
VectorField velocity_from_streamfunction(const ScalarField& psi);

}  // namespace mcnv
