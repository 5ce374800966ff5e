#pragma once
// Stokes-operator toolbox on the periodic channel.
//
// Everything decouples per x-mode. For a wave mode with wavenumber k
// the velocity is represented by a streamfunction clamped to the walls
// (psi = psi' = 0, the latter via reflection ghosts), and the
// generalized Stokes problem
//     gamma u - lap u + grad p = f,  div u = 0,  u = 0 on walls
// reduces to the banded 1D solve
//     (gamma (-L2) + L2^2) psi = curl f,   L2 = D2 - k^2.
// The axial modes (m = 0 and the Nyquist column, which the spectral
// derivative treats as x-invariant) reduce to a Dirichlet Helmholtz
// problem for the horizontal component; their vertical part is fixed to
// zero by incompressibility.
//
// leray_project solves, per wave mode, the exact composite operator
// div(grad phi) built from the same discrete derivatives, with
// one-sided Neumann rows at the walls. That choice makes the projection
// idempotent and annihilate discrete gradients to solver precision, not
// just to truncation order.

#include <memory>

#include "mcnv/banded.hpp"
#include "mcnv/grid.hpp"
#include "mcnv/spectral.hpp"

namespace mcnv {

// Interior-row pieces of the per-mode operators, on the Ny-2 interior
// unknowns: negL2 = -(D2 - k^2), l2sq = (D2 - k^2)^2 with the wall
// clamp and reflection ghosts folded in.
struct ModeOperators {
  Banded negL2;
  Banded l2sq;
};

ModeOperators build_mode_operators(int ny, double hy, double k2);

// Factorisations cached per (grid, gamma).
struct StokesWorkspace {
  Grid grid;
  double gamma = 0.0;

  std::vector<ModeOperators> mode_ops;   // index mkey = 1 .. nx/2 - 1
  std::vector<Banded> momentum_op;       // gamma*negL2 + l2sq
  std::vector<std::unique_ptr<BandedLU>> momentum;
  Banded axial_op;                       // gamma*I - D2, interior rows
  std::unique_ptr<BandedLU> axial;
  std::vector<std::unique_ptr<BandedLU>> projection;  // Leray, per mkey

  StokesWorkspace(const Grid& g, double gamma);
};

// Solves gamma u + A u = P f and returns the divergence-free velocity.
// Checks the per-mode residual against the curl of the forcing and
// refines once if needed; throws if the relative residual stays above
// 1e-8.
VectorField solve_generalized_stokes(const VectorField& f, double gamma,
                                     StokesWorkspace& ws);

// P f = f - grad phi. Gradient parts vanish to solver precision, the
// projected field has exactly zero vertical component on the walls and
// zero discrete divergence on interior rows, and P(P f) = P f.
VectorField leray_project(const VectorField& f, StokesWorkspace& ws);

// A u = P(-lap u) for divergence-free u vanishing on the walls.
VectorField stokes_apply(const VectorField& u, StokesWorkspace& ws);

// e^{-tau A} u0 by Crank-Nicolson substeps of length <= substep_cap.
// Decays to an exact zero once the norm falls below 1e-14 of the
// initial norm.
VectorField semigroup_apply(const VectorField& u0, double tau, double substep_cap,
                            StokesWorkspace& ws);

// Incremental form: holds the mode-space state and advances it by a
// fixed tau increment per call, reusing one set of CN factorisations.
class SemigroupStepper {
 public:
  SemigroupStepper(const Grid& g, const VectorField& v0, double dtau_step,
                   double substep_cap);
  void advance();
  VectorField value() const;
  double norm_l2() const;
  bool dead() const { return dead_; }

 private:
  void substep();

  Grid grid_;
  int nsub_ = 1;
  double norm0_ = 0.0;
  bool dead_ = false;
  SpectralField state_;  // psi on wave modes, u1 on axial modes
  std::vector<std::unique_ptr<BandedLU>> cn_solve_;
  std::vector<Banded> cn_apply_;
  std::unique_ptr<BandedLU> cn_axial_solve_;
  Banded cn_axial_apply_;
};

// Smallest decay rate lambda_1 of A via inverse power iteration,
// solving with gamma = 0 until the Rayleigh estimate settles to rtol.
// Throws if it fails to converge within max_iterations.
double estimate_slowest_decay(const Grid& g, int max_iterations = 200,
                              double rtol = 1e-9);

}  // namespace mcnv
