#include "mcnv/stokes.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "mcnv/check.hpp"
#include "mcnv/norms.hpp"
#include "mcnv/ops.hpp"

namespace mcnv {

namespace {

using cplx = std::complex<double>;

bool axial(const Grid& g, int m) { return m == 0 || m == g.nx / 2; }
int mode_key(const Grid& g, int m) { return std::min(m, g.nx - m); }

// gamma*I - D2 on the interior rows, walls clamped to zero.
Banded axial_helmholtz(int ny, double hy, double gamma) {
  int ni = ny - 2;
  double hh = hy * hy;
  Banded a(ni, 1, 1);
  for (int r = 0; r < ni; ++r) {
    a.at(r, r) = gamma + 2.0 / hh;
    if (r > 0) a.at(r, r - 1) = -1.0 / hh;
    if (r + 1 < ni) a.at(r, r + 1) = -1.0 / hh;
  }
  return a;
}

// Composite Leray operator for one wave mode: interior rows carry
// -k^2 + d/dy(divergence flavour) of d/dy(gradient flavour), boundary
// rows carry the one-sided Neumann condition.
Banded projection_matrix(int ny, double hy, double k2) {
  Banded a(ny, 2, 2);
  const double h2 = 2.0 * hy;
  const double h4 = 4.0 * hy * hy;
  a.at(0, 0) = -3.0 / h2;
  a.at(0, 1) = 4.0 / h2;
  a.at(0, 2) = -1.0 / h2;
  a.at(ny - 1, ny - 1) = 3.0 / h2;
  a.at(ny - 1, ny - 2) = -4.0 / h2;
  a.at(ny - 1, ny - 3) = 1.0 / h2;
  for (int j = 1; j + 1 < ny; ++j) a.at(j, j) = -k2;
  a.at(1, 0) += 3.0 / h4;
  a.at(1, 1) += -5.0 / h4;
  a.at(1, 2) += 1.0 / h4;
  a.at(1, 3) += 1.0 / h4;
  for (int j = 2; j + 2 < ny; ++j) {
    a.at(j, j - 2) += 1.0 / h4;
    a.at(j, j) += -2.0 / h4;
    a.at(j, j + 2) += 1.0 / h4;
  }
  a.at(ny - 2, ny - 1) += 3.0 / h4;
  a.at(ny - 2, ny - 2) += -5.0 / h4;
  a.at(ny - 2, ny - 3) += 1.0 / h4;
  a.at(ny - 2, ny - 4) += 1.0 / h4;
  return a;
}

// Relative residual of op*x = b in the Euclidean norm; refines once
// through the factorisation if the first solve is off.
void check_and_refine(const Banded& op, const BandedLU& lu, const cplx* b, cplx* x,
                      const char* what) {
  int n = op.n;
  std::vector<cplx> r(static_cast<size_t>(n));
  double nb = 0.0;
  for (int q = 0; q < n; ++q) nb += std::norm(b[q]);
  nb = std::sqrt(nb);
  if (nb == 0.0) return;
  auto residual = [&]() {
    op.apply(x, r.data());
    double s = 0.0;
    for (int q = 0; q < n; ++q) {
      r[q] = b[q] - r[q];
      s += std::norm(r[q]);
    }
    return std::sqrt(s) / nb;
  };
  double rel = residual();
  if (rel > 1e-10) {
    lu.solve(r.data());
    for (int q = 0; q < n; ++q) x[q] += r[q];
    rel = residual();
  }
  require(rel <= 1e-8, std::string(what) + ": per-mode residual above 1e-8");
}

// L2 norm of the velocity held in mode space (psi on wave modes, u1 on
// axial modes) via the Parseval identity for the x-transform.
double modes_velocity_norm(const Grid& g, const SpectralField& s) {
  const int n = g.ny;
  const double hy = g.hy();
  double total = 0.0;
  for (int m = 0; m < g.nx; ++m) {
    const cplx* col = &s.v[size_t(m) * n];
    double acc = 0.0;
    if (axial(g, m)) {
      for (int j = 1; j + 1 < n; ++j) acc += hy * std::norm(col[j]);
    } else {
      double k = diffusion_wavenumber(g, m);
      for (int j = 1; j + 1 < n; ++j) {
        cplx up = (j + 1 < n - 1) ? col[j + 1] : cplx(0.0);
        cplx dn = (j - 1 > 0) ? col[j - 1] : cplx(0.0);
        cplx u1 = (up - dn) / (2.0 * hy);
        acc += hy * (std::norm(u1) + k * k * std::norm(col[j]));
      }
    }
    total += acc;
  }
  return std::sqrt(total * g.hx() / g.nx);
}

void require_wall_free(const VectorField& u, const char* what) {
  const Grid& g = u.grid();
  double amp = std::max(1.0, norm(u, NormKind::Linf));
  double w = 0.0;
  for (int i = 0; i < g.nx; ++i) {
    w = std::max({w, std::fabs(u.x.at(i, 0)), std::fabs(u.x.at(i, g.ny - 1)),
                  std::fabs(u.y.at(i, 0)), std::fabs(u.y.at(i, g.ny - 1))});
  }
  require(w <= 1e-10 * amp, std::string(what) + ": velocity must vanish on the walls");
}

}  // namespace

ModeOperators build_mode_operators(int ny, double hy, double k2) {
  int ni = ny - 2;
  double hh = hy * hy;
  ModeOperators ops{Banded(ni, 1, 1), Banded(ni, 2, 2)};
  for (int r = 0; r < ni; ++r) {
    ops.negL2.at(r, r) = 2.0 / hh + k2;
    if (r > 0) ops.negL2.at(r, r - 1) = -1.0 / hh;
    if (r + 1 < ni) ops.negL2.at(r, r + 1) = -1.0 / hh;
  }
  // L2^2 assembled column by column through the two-stage composition:
  // omega = (D2 - k^2) psi at every node (reflection ghosts at walls),
  // then (D2 - k^2) omega on interior rows.
  for (int a0 = 0; a0 < ni; ++a0) {
    int j0 = a0 + 1;
    // stage 1 for psi = unit at j0: omega is nonzero at j0-1, j0, j0+1
    double w[3];  // omega at j0-1, j0, j0+1
    w[1] = -2.0 / hh - k2;
    w[0] = (j0 - 1 == 0) ? 2.0 / hh : 1.0 / hh;
    w[2] = (j0 + 1 == ny - 1) ? 2.0 / hh : 1.0 / hh;
    auto omega = [&](int j) -> double {
      if (j < j0 - 1 || j > j0 + 1) return 0.0;
      return w[j - (j0 - 1)];
    };
    for (int j = std::max(1, j0 - 2); j <= std::min(ny - 2, j0 + 2); ++j) {
      double val = (omega(j + 1) - 2.0 * omega(j) + omega(j - 1)) / hh - k2 * omega(j);
      ops.l2sq.at(j - 1, a0) += val;
    }
  }
  return ops;
}

StokesWorkspace::StokesWorkspace(const Grid& g, double gamma_) : grid(g), gamma(gamma_) {
  require_arg(gamma >= 0.0, "stokes workspace: gamma must be nonnegative");
  const int half = g.nx / 2;
  const double hy = g.hy();
  mode_ops.resize(size_t(half));
  momentum_op.resize(size_t(half));
  momentum.resize(size_t(half));
  projection.resize(size_t(half));
  for (int mk = 1; mk < half; ++mk) {
    double k = diffusion_wavenumber(g, mk);
    double k2 = k * k;
    mode_ops[size_t(mk)] = build_mode_operators(g.ny, hy, k2);
    const ModeOperators& ops = mode_ops[size_t(mk)];
    Banded sys = ops.l2sq;
    for (int r = 0; r < sys.n; ++r) {
      int c0 = std::max(0, r - 1);
      int c1 = std::min(sys.n - 1, r + 1);
      for (int c = c0; c <= c1; ++c) sys.at(r, c) += gamma * ops.negL2.at(r, c);
    }
    momentum_op[size_t(mk)] = sys;
    momentum[size_t(mk)] = std::make_unique<BandedLU>(sys);
    projection[size_t(mk)] = std::make_unique<BandedLU>(projection_matrix(g.ny, hy, k2));
  }
  axial_op = axial_helmholtz(g.ny, hy, gamma);
  axial = std::make_unique<BandedLU>(axial_op);
}

VectorField solve_generalized_stokes(const VectorField& f, double gamma,
                                     StokesWorkspace& ws) {
  const Grid& g = f.grid();
  require(g.same(ws.grid), "solve_generalized_stokes: workspace grid mismatch");
  require(gamma == ws.gamma, "solve_generalized_stokes: workspace gamma mismatch");
  const int n = g.ny;
  const int ni = n - 2;
  const double hy = g.hy();

  SpectralField f1 = to_modes(f.x);
  SpectralField f2 = to_modes(f.y);
  SpectralField u1(g), u2(g);
  std::vector<cplx> rhs(static_cast<size_t>(ni)), sol(static_cast<size_t>(ni));

  for (int m = 0; m < g.nx; ++m) {
    const cplx* c1 = &f1.v[size_t(m) * n];
    const cplx* c2 = &f2.v[size_t(m) * n];
    cplx* o1 = &u1.v[size_t(m) * n];
    cplx* o2 = &u2.v[size_t(m) * n];
    if (axial(g, m)) {
      for (int j = 1; j + 1 < n; ++j) rhs[size_t(j - 1)] = c1[j];
      sol = rhs;
      ws.axial->solve(sol.data());
      check_and_refine(ws.axial_op, *ws.axial, rhs.data(), sol.data(),
                       "generalized Stokes (axial)");
      for (int j = 1; j + 1 < n; ++j) o1[j] = sol[size_t(j - 1)];
      continue;
    }
    int mk = mode_key(g, m);
    double k = wavenumber(g, m);
    // curl of the forcing on interior rows
    for (int j = 1; j + 1 < n; ++j)
      rhs[size_t(j - 1)] = cplx(0.0, k) * c2[j] - (c1[j + 1] - c1[j - 1]) / (2.0 * hy);
    sol = rhs;
    ws.momentum[size_t(mk)]->solve(sol.data());
    check_and_refine(ws.momentum_op[size_t(mk)], *ws.momentum[size_t(mk)], rhs.data(),
                     sol.data(), "generalized Stokes");
    // u1 = dy psi (reflection ghosts), u2 = -ik psi, psi = 0 on walls
    for (int j = 1; j + 1 < n; ++j) {
      cplx up = (j + 1 < n - 1) ? sol[size_t(j)] : cplx(0.0);
      cplx dn = (j - 1 > 0) ? sol[size_t(j - 2)] : cplx(0.0);
      o1[j] = (up - dn) / (2.0 * hy);
      o2[j] = cplx(0.0, -k) * sol[size_t(j - 1)];
    }
  }
  VectorField u;
  u.x = from_modes(u1);
  u.y = from_modes(u2);
  return u;
}

VectorField leray_project(const VectorField& f, StokesWorkspace& ws) {
  const Grid& g = f.grid();
  require(g.same(ws.grid), "leray_project: workspace grid mismatch");
  const int n = g.ny;
  const double hy = g.hy();

  SpectralField f1 = to_modes(f.x);
  SpectralField f2 = to_modes(f.y);
  std::vector<cplx> rhs(static_cast<size_t>(n)), phi(static_cast<size_t>(n));

  for (int m = 0; m < g.nx; ++m) {
    cplx* c1 = &f1.v[size_t(m) * n];
    cplx* c2 = &f2.v[size_t(m) * n];
    if (axial(g, m)) {
      // The x-mean (and Nyquist) part of a divergence-free field with
      // impermeable walls has no vertical component at all.
      for (int j = 0; j < n; ++j) c2[j] = 0.0;
      continue;
    }
    int mk = mode_key(g, m);
    double k = wavenumber(g, m);
    rhs[0] = c2[0];
    rhs[size_t(n - 1)] = c2[n - 1];
    for (int j = 1; j + 1 < n; ++j)
      rhs[size_t(j)] = cplx(0.0, k) * c1[j] + (c2[j + 1] - c2[j - 1]) / (2.0 * hy);
    phi = rhs;
    ws.projection[size_t(mk)]->solve(phi.data());
    // subtract grad phi with the same stencils used to build the system
    for (int j = 0; j < n; ++j) c1[j] -= cplx(0.0, k) * phi[j];
    for (int j = 1; j + 1 < n; ++j) c2[j] -= (phi[size_t(j + 1)] - phi[size_t(j - 1)]) / (2.0 * hy);
    // The Neumann rows equate the one-sided derivative of phi to the
    // wall values of f2, so the walls come out as exact zeros.
    c2[0] = 0.0;
    c2[size_t(n - 1)] = 0.0;
  }
  VectorField p;
  p.x = from_modes(f1);
  p.y = from_modes(f2);
  return p;
}

VectorField stokes_apply(const VectorField& u, StokesWorkspace& ws) {
  const Grid& g = u.grid();
  require(g.same(ws.grid), "stokes_apply: workspace grid mismatch");
  require_wall_free(u, "stokes_apply");
  const int n = g.ny;
  const int ni = n - 2;
  const double hy = g.hy();

  SpectralField u1 = to_modes(u.x);
  SpectralField u2 = to_modes(u.y);
  SpectralField w1(g), w2(g);
  Banded negd2 = axial_helmholtz(n, hy, 0.0);
  std::vector<std::unique_ptr<BandedLU>> vort(size_t(g.nx / 2));
  std::vector<cplx> a(static_cast<size_t>(ni)), b(static_cast<size_t>(ni));

  for (int m = 0; m < g.nx; ++m) {
    const cplx* c1 = &u1.v[size_t(m) * n];
    const cplx* c2 = &u2.v[size_t(m) * n];
    cplx* o1 = &w1.v[size_t(m) * n];
    cplx* o2 = &w2.v[size_t(m) * n];
    if (axial(g, m)) {
      for (int j = 1; j + 1 < n; ++j) a[size_t(j - 1)] = c1[j];
      negd2.apply(a.data(), b.data());
      for (int j = 1; j + 1 < n; ++j) o1[j] = b[size_t(j - 1)];
      continue;
    }
    // chi = (-L2)^{-1} L2^2 psi is the streamfunction of A u, the same
    // composition the gamma = 0 solve inverts, so one is the exact
    // discrete inverse of the other.
    int mk = mode_key(g, m);
    double k = wavenumber(g, m);
    for (int j = 1; j + 1 < n; ++j) a[size_t(j - 1)] = cplx(0.0, 1.0 / k) * c2[j];
    ws.mode_ops[size_t(mk)].l2sq.apply(a.data(), b.data());
    if (!vort[size_t(mk)])
      vort[size_t(mk)] = std::make_unique<BandedLU>(ws.mode_ops[size_t(mk)].negL2);
    vort[size_t(mk)]->solve(b.data());
    for (int j = 1; j + 1 < n; ++j) {
      cplx up = (j + 1 <= ni) ? b[size_t(j)] : cplx(0.0);
      cplx dn = (j - 1 >= 1) ? b[size_t(j - 2)] : cplx(0.0);
      o1[j] = (up - dn) / (2.0 * hy);
      o2[j] = cplx(0.0, -k) * b[size_t(j - 1)];
    }
  }
  VectorField w;
  w.x = from_modes(w1);
  w.y = from_modes(w2);
  return w;
}

SemigroupStepper::SemigroupStepper(const Grid& g, const VectorField& v0,
                                   double dtau_step, double substep_cap)
    : grid_(g), state_(g) {
  require_arg(dtau_step > 0.0, "semigroup: tau increment must be positive");
  require_arg(substep_cap > 0.0, "semigroup: substep cap must be positive");
  require(g.same(v0.grid()), "semigroup: grid mismatch");
  require_wall_free(v0, "semigroup");
  nsub_ = std::max(1, int(std::ceil(dtau_step / substep_cap - 1e-12)));
  double dtau = dtau_step / nsub_;

  const int half = g.nx / 2;
  const int ni = g.ny - 2;
  const double hy = g.hy();
  cn_solve_.resize(size_t(half));
  cn_apply_.resize(size_t(half));
  for (int mk = 1; mk < half; ++mk) {
    double k = diffusion_wavenumber(g, mk);
    ModeOperators ops = build_mode_operators(g.ny, hy, k * k);
    // plus/minus = negL2 +- (dtau/2) l2sq over the pentadiagonal band
    Banded plus = ops.l2sq;
    Banded minus = ops.l2sq;
    for (size_t q = 0; q < plus.ab.size(); ++q) {
      plus.ab[q] = 0.5 * dtau * ops.l2sq.ab[q];
      minus.ab[q] = -0.5 * dtau * ops.l2sq.ab[q];
    }
    for (int r = 0; r < ni; ++r) {
      int c0 = std::max(0, r - 1);
      int c1 = std::min(ni - 1, r + 1);
      for (int c = c0; c <= c1; ++c) {
        plus.at(r, c) += ops.negL2.at(r, c);
        minus.at(r, c) += ops.negL2.at(r, c);
      }
    }
    cn_apply_[size_t(mk)] = minus;
    cn_solve_[size_t(mk)] = std::make_unique<BandedLU>(plus);
  }
  // axial heat semigroup: (I + dtau/2 (-D2)) u+ = (I - dtau/2 (-D2)) u-
  Banded negd2 = axial_helmholtz(g.ny, hy, 0.0);
  Banded aplus(ni, 1, 1), aminus(ni, 1, 1);
  for (int r = 0; r < ni; ++r) {
    int c0 = std::max(0, r - 1);
    int c1 = std::min(ni - 1, r + 1);
    for (int c = c0; c <= c1; ++c) {
      double d = 0.5 * dtau * negd2.at(r, c);
      aplus.at(r, c) = (r == c ? 1.0 : 0.0) + d;
      aminus.at(r, c) = (r == c ? 1.0 : 0.0) - d;
    }
  }
  cn_axial_apply_ = aminus;
  cn_axial_solve_ = std::make_unique<BandedLU>(aplus);

  // mode-space state: psi on wave modes, u1 on axial modes
  SpectralField u1m = to_modes(v0.x);
  SpectralField u2m = to_modes(v0.y);
  const int n = g.ny;
  for (int m = 0; m < g.nx; ++m) {
    cplx* dst = &state_.v[size_t(m) * n];
    if (axial(g, m)) {
      const cplx* src = &u1m.v[size_t(m) * n];
      for (int j = 1; j + 1 < n; ++j) dst[j] = src[j];
    } else {
      double k = wavenumber(g, m);
      const cplx* src = &u2m.v[size_t(m) * n];
      for (int j = 1; j + 1 < n; ++j) dst[j] = cplx(0.0, 1.0 / k) * src[j];
    }
  }
  norm0_ = modes_velocity_norm(grid_, state_);
  if (norm0_ == 0.0) dead_ = true;
}

void SemigroupStepper::substep() {
  const int n = grid_.ny;
  const int ni = n - 2;
  std::vector<cplx> buf(static_cast<size_t>(ni)), out(static_cast<size_t>(ni));
  for (int m = 0; m < grid_.nx; ++m) {
    cplx* col = &state_.v[size_t(m) * n];
    for (int j = 1; j + 1 < n; ++j) buf[size_t(j - 1)] = col[j];
    if (axial(grid_, m)) {
      cn_axial_apply_.apply(buf.data(), out.data());
      cn_axial_solve_->solve(out.data());
    } else {
      int mk = mode_key(grid_, m);
      cn_apply_[size_t(mk)].apply(buf.data(), out.data());
      cn_solve_[size_t(mk)]->solve(out.data());
    }
    for (int j = 1; j + 1 < n; ++j) col[j] = out[size_t(j - 1)];
  }
}

void SemigroupStepper::advance() {
  if (dead_) return;
  for (int s = 0; s < nsub_; ++s) {
    substep();
    if (modes_velocity_norm(grid_, state_) <= 1e-14 * norm0_) {
      std::fill(state_.v.begin(), state_.v.end(), cplx(0.0));
      dead_ = true;
      return;
    }
  }
}

VectorField SemigroupStepper::value() const {
  const Grid& g = grid_;
  const int n = g.ny;
  VectorField u(g);
  if (dead_) return u;
  SpectralField u1(g), u2(g);
  for (int m = 0; m < g.nx; ++m) {
    const cplx* col = &state_.v[size_t(m) * n];
    cplx* o1 = &u1.v[size_t(m) * n];
    cplx* o2 = &u2.v[size_t(m) * n];
    if (axial(g, m)) {
      for (int j = 1; j + 1 < n; ++j) o1[j] = col[j];
    } else {
      double k = wavenumber(g, m);
      for (int j = 1; j + 1 < n; ++j) {
        cplx up = (j + 1 < n - 1) ? col[j + 1] : cplx(0.0);
        cplx dn = (j - 1 > 0) ? col[j - 1] : cplx(0.0);
        o1[j] = (up - dn) / (2.0 * g.hy());
        o2[j] = cplx(0.0, -k) * col[j];
      }
    }
  }
  u.x = from_modes(u1);
  u.y = from_modes(u2);
  return u;
}

double SemigroupStepper::norm_l2() const {
  if (dead_) return 0.0;
  return modes_velocity_norm(grid_, state_);
}

VectorField semigroup_apply(const VectorField& u0, double tau, double substep_cap,
                            StokesWorkspace& ws) {
  require(u0.grid().same(ws.grid), "semigroup_apply: workspace grid mismatch");
  require_arg(tau >= 0.0, "semigroup_apply: tau must be nonnegative");
  if (tau == 0.0) return u0;
  SemigroupStepper step(u0.grid(), u0, tau, substep_cap);
  step.advance();
  return step.value();
}

double estimate_slowest_decay(const Grid& g, int max_iterations, double rtol) {
  StokesWorkspace ws(g, 0.0);
  // seed with both a wave-mode roll and an axial profile so the slowest
  // mode is present whichever family it lives in
  ScalarField psi(g);
  constexpr double pi = 3.14159265358979323846;
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      double sy = std::sin(pi * g.y(j));
      psi.at(i, j) = std::sin(2.0 * pi * g.x(i) / g.length) * sy * sy;
    }
  VectorField u = velocity_from_streamfunction(psi);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) u.x.at(i, j) += std::sin(pi * g.y(j));

  double lambda = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    VectorField w = solve_generalized_stokes(u, 0.0, ws);
    double nu = norm(u, NormKind::L2);
    double nw = norm(w, NormKind::L2);
    require(nw > 0.0, "estimate_slowest_decay: iteration collapsed to zero");
    double next = nu / nw;
    u = scale(w, 1.0 / nw);
    if (it > 0 && std::fabs(next - lambda) <= rtol * next) return next;
    lambda = next;
  }
  require(false, "estimate_slowest_decay: no convergence within iteration budget");
  return 0.0;
}

}  // namespace mcnv
