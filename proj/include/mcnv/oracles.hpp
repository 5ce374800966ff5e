#pragma once
// Dense brute-force reference solutions for small grids.
//
// These re-derive the discrete operators from scratch (their own DFT,
// their own dense stencil matrices) and solve with dense LU,
// eigendecompositions, and a scaling-and-squaring matrix exponential,
// so they share no solver code with the banded production path. They
// exist to pin that path down in tests and in the `verify` subcommand,
// and they refuse grids large enough to make dense algebra silly.

#include "mcnv/grid.hpp"

namespace mcnv {

// Monolithic dense solve of gamma u + A u = P f over all x-modes.
VectorField oracle_stokes_solve(const VectorField& f, double gamma);

// e^{-tau A} u0 through dense matrix exponentials per mode.
VectorField oracle_semigroup(const VectorField& u0, double tau);

// Smallest eigenvalue of A from dense per-mode pencils.
double oracle_slowest_decay(const Grid& g);

}  // namespace mcnv
