#include "mcnv/spectral.hpp"

#include <cmath>

#include "mcnv/check.hpp"

namespace mcnv {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

// Twiddle table w[p] = exp(-2*pi*i*p/n) for p in [0, n).
std::vector<std::complex<double>> twiddles(int n) {
  std::vector<std::complex<double>> w(static_cast<size_t>(n));
  for (int p = 0; p < n; ++p) {
    double a = -kTwoPi * p / n;
    w[size_t(p)] = {std::cos(a), std::sin(a)};
  }
  return w;
}
}  // namespace

double wavenumber(const Grid& g, int m) {
  if (m == g.nx / 2) return 0.0;
  int mt = (m <= g.nx / 2) ? m : m - g.nx;
  return kTwoPi * mt / g.length;
}

double diffusion_wavenumber(const Grid& g, int m) {
  int mt = (m <= g.nx / 2) ? m : m - g.nx;
  return kTwoPi * mt / g.length;
}

SpectralField to_modes(const ScalarField& f) {
  const Grid& g = f.grid;
  SpectralField s(g);
  auto w = twiddles(g.nx);
  for (int m = 0; m < g.nx; ++m) {
    for (int i = 0; i < g.nx; ++i) {
      std::complex<double> t = w[size_t((size_t(i) * m) % g.nx)];
      const double* src = &f.v[size_t(i) * g.ny];
      std::complex<double>* dst = &s.v[size_t(m) * g.ny];
      for (int j = 0; j < g.ny; ++j) dst[j] += t * src[j];
    }
  }
  return s;
}

ScalarField from_modes(const SpectralField& s) {
  const Grid& g = s.grid;
  ScalarField f(g);
  auto w = twiddles(g.nx);
  double inv = 1.0 / g.nx;
  for (int i = 0; i < g.nx; ++i) {
    double* dst = &f.v[size_t(i) * g.ny];
    for (int m = 0; m < g.nx; ++m) {
      // Inverse transform uses the conjugate twiddle.
      std::complex<double> t = std::conj(w[size_t((size_t(i) * m) % g.nx)]);
      const std::complex<double>* src = &s.v[size_t(m) * g.ny];
      for (int j = 0; j < g.ny; ++j) dst[j] += t.real() * src[j].real() - t.imag() * src[j].imag();
    }
    for (int j = 0; j < g.ny; ++j) dst[j] *= inv;
  }
  return f;
}

ScalarField dx(const ScalarField& f) {
  const Grid& g = f.grid;
  SpectralField s = to_modes(f);
  for (int m = 0; m < g.nx; ++m) {
    double k = wavenumber(g, m);
    std::complex<double>* col = &s.v[size_t(m) * g.ny];
    for (int j = 0; j < g.ny; ++j) {
      std::complex<double> z = col[j];
      col[j] = {-k * z.imag(), k * z.real()};
    }
  }
  return from_modes(s);
}

}  // namespace mcnv
