#pragma once
// Discrete Fourier transform along the periodic x direction.
//
// Mode m of an Nx-point line carries the signed wavenumber
// k_m = 2*pi*mt/L with mt = m for m < Nx/2 and mt = m - Nx for m > Nx/2.
// The Nyquist mode m = Nx/2 has no well-defined first derivative on the
// grid and is zeroed whenever a single x-derivative is taken; solvers
// treat it like an x-invariant mode. The transform is a plain O(Nx^2)
// summation with precomputed twiddles so every run sums in the same
// order regardless of threading.

#include <complex>
#include <vector>

#include "mcnv/grid.hpp"

namespace mcnv {

// Mode coefficients, laid out like the nodal fields: index m*Ny + j.
struct SpectralField {
  Grid grid;
  std::vector<std::complex<double>> v;

  SpectralField() = default;
  explicit SpectralField(const Grid& g) : grid(g), v(size_t(g.cells())) {}

  std::complex<double>& at(int m, int j) { return v[size_t(m) * grid.ny + j]; }
  std::complex<double> at(int m, int j) const { return v[size_t(m) * grid.ny + j]; }
};

// Signed wavenumber of mode m; the Nyquist mode reports 0 so that code
// multiplying by i*k implements the zeroing convention automatically.
double wavenumber(const Grid& g, int m);

// Nonzero |k| used inside implicit diffusion operators, where the
// Nyquist mode keeps its natural k = 2*pi*(Nx/2)/L.
double diffusion_wavenumber(const Grid& g, int m);

SpectralField to_modes(const ScalarField& f);
ScalarField from_modes(const SpectralField& s);

// d/dx via mode multiplication by i*k (Nyquist zeroed).
ScalarField dx(const ScalarField& f);

}  // namespace mcnv
