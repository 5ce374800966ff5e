#include "mcnv/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>

#include "mcnv/norms.hpp"
#include "mcnv/ops.hpp"
#include "mcnv/oracles.hpp"
#include "mcnv/stokes.hpp"

namespace mcnv {

namespace {

constexpr double kPi = 3.14159265358979323846;

ScalarField fill(const Grid& g, const std::function<double(double, double)>& f) {
  ScalarField out(g);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) out.at(i, j) = f(g.x(i), g.y(j));
  return out;
}

// Clamped convection roll and the forcing that makes it the exact
// continuum solution of the generalized Stokes problem with zero
// pressure; same construction the solver tests pin themselves to.
struct RollCase {
  double w;

  explicit RollCase(double length) : w(2.0 * kPi / length) {}

  double u1(double x, double y) const {
    return kPi * std::sin(w * x) * std::sin(2.0 * kPi * y);
  }
  double u2(double x, double y) const {
    double s = std::sin(kPi * y);
    return -w * std::cos(w * x) * s * s;
  }
  double f1(double x, double y, double gamma) const {
    return (gamma + w * w + 4.0 * kPi * kPi) * u1(x, y);
  }
  double f2(double x, double y, double gamma) const {
    return (gamma + w * w) * u2(x, y) +
           2.0 * kPi * kPi * w * std::cos(w * x) * std::cos(2.0 * kPi * y);
  }
};

VectorField roll_velocity(const Grid& g) {
  RollCase c(g.length);
  VectorField u(g);
  u.x = fill(g, [&](double x, double y) { return c.u1(x, y); });
  u.y = fill(g, [&](double x, double y) { return c.u2(x, y); });
  return u;
}

VectorField roll_forcing(const Grid& g, double gamma) {
  RollCase c(g.length);
  VectorField f(g);
  f.x = fill(g, [&](double x, double y) { return c.f1(x, y, gamma); });
  f.y = fill(g, [&](double x, double y) { return c.f2(x, y, gamma); });
  return f;
}

VectorField smooth_forcing(const Grid& g) {
  double w = 2.0 * kPi / g.length;
  VectorField f(g);
  f.x = fill(g, [&](double x, double y) {
    return std::sin(w * x) * y * (1.0 - y) * std::exp(y) + 0.2 * std::cos(2.0 * w * x) +
           0.3 * (1.0 + y);
  });
  f.y = fill(g, [&](double x, double y) {
    return std::cos(w * x) * std::sin(kPi * y) + 0.1 + 0.2 * std::sin(kPi * y);
  });
  return f;
}

VectorField streamfunction_velocity(const Grid& g, int mode) {
  ScalarField psi = fill(g, [&](double x, double y) {
    double s = std::sin(kPi * y);
    return std::sin(2.0 * kPi * mode * x / g.length) * s * s;
  });
  return velocity_from_streamfunction(psi);
}

std::string format(const char* fmt, ...) {
  char buf[256];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

}  // namespace

CheckResult check_stokes_refinement() {
  CheckResult r;
  r.name = "stokes manufactured-solution refinement";
  double lo = 10.0, hi = 0.0;
  for (double gamma : {0.0, 50.0}) {
    double prev = 0.0;
    const int ladder[] = {17, 33, 65, 129};
    for (std::size_t q = 0; q < std::size(ladder); ++q) {
      Grid g = make_grid(16, ladder[q], 2.0);
      StokesWorkspace ws(g, gamma);
      VectorField got = solve_generalized_stokes(roll_forcing(g, gamma), gamma, ws);
      double err = norm(sub(got, roll_velocity(g)), NormKind::L2);
      if (q > 0) {
        double rate = std::log2(prev / err);
        lo = std::min(lo, rate);
        hi = std::max(hi, rate);
      }
      prev = err;
    }
  }
  r.passed = lo >= 1.8 && hi <= 2.2;
  r.detail = format("L2 rates %.3f .. %.3f over Ny 17..129 (target 2.0 +/- 0.2)", lo, hi);
  return r;
}

CheckResult check_stokes_oracle() {
  CheckResult r;
  r.name = "stokes solve vs dense oracle";
  Grid g = make_grid(16, 17, 2.0);
  VectorField f = smooth_forcing(g);
  double worst = 0.0;
  for (double gamma : {0.0, 3.7}) {
    StokesWorkspace ws(g, gamma);
    VectorField got = solve_generalized_stokes(f, gamma, ws);
    worst = std::max(worst, norm(sub(got, oracle_stokes_solve(f, gamma)), NormKind::Linf));
  }
  r.passed = worst <= 1e-9;
  r.detail = format("Linf disagreement %.3e at 16x17 (tolerance 1e-9)", worst);
  return r;
}

CheckResult check_semigroup_decay() {
  CheckResult r;
  r.name = "semigroup decay bound";
  Grid g = make_grid(32, 33, 2.0);
  double lam = estimate_slowest_decay(g);
  StokesWorkspace ws(g, 0.0);
  VectorField u0 = streamfunction_velocity(g, 1);
  const double norm0 = norm(u0, NormKind::L2);

  bool ok = lam >= 9.0 && lam <= 12.0;
  double prev = norm0;
  double margin = 1e300;
  for (double tau : {0.1, 0.5, 1.0}) {
    double n = norm(semigroup_apply(u0, tau, 1e-3, ws), NormKind::L2);
    ok = ok && n <= prev;
    double bound = norm0 * std::exp(-(lam - 0.5) * tau);
    ok = ok && n <= bound;
    if (n > 0.0) margin = std::min(margin, bound / n);
    prev = n;
  }
  r.passed = ok;
  r.detail = format("lambda1 %.4f in [9,12]; decay under e^{-(lambda1-0.5) tau} "
                    "with margin >= %.2f",
                    lam, margin);
  return r;
}

CheckResult check_semigroup_oracle() {
  CheckResult r;
  r.name = "semigroup vs matrix exponential";
  Grid g = make_grid(16, 17, 2.0);
  StokesWorkspace ws(g, 0.0);
  VectorField u0 = add(streamfunction_velocity(g, 1),
                       scale(streamfunction_velocity(g, 2), 0.5));
  const double tau = 0.5;
  VectorField got = semigroup_apply(u0, tau, 1e-3, ws);
  double rel = norm(sub(got, oracle_semigroup(u0, tau)), NormKind::L2) /
               norm(u0, NormKind::L2);
  r.passed = rel <= 1e-5;
  r.detail = format("relative L2 disagreement %.3e at 16x17, tau 0.5 "
                    "(tolerance 1e-5)",
                    rel);
  return r;
}

CheckResult check_conduction_fixed_point(const ModelParams& base) {
  CheckResult r;
  r.name = "conduction fixed point, all models";
  const auto start = std::chrono::steady_clock::now();

  double drift = 0.0;
  for (Model m : {Model::Full, Model::Limit, Model::Effective}) {
    ModelParams p = base;
    p.model = m;
    p.ic.preset = "conduction";
    p.t_final = 500.0 * p.dt;
    Trajectory tr = run_model(p, 100);
    const Grid g = make_grid(p.nx, p.ny, p.length);
    ScalarField ref = fill(g, [](double, double y) { return 1.0 - y; });
    for (const FlowState& s : tr.states) {
      drift = std::max(drift, norm(s.u, NormKind::Linf));
      drift = std::max(drift, norm(s.b, NormKind::Linf));
      drift = std::max(drift, norm(sub(s.theta, ref), NormKind::Linf));
    }
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.passed = drift <= 1e-10;
  r.detail = format("largest nodal drift %.3e over 500 steps x 3 models "
                    "(tolerance 1e-10), %.1f s",
                    drift, seconds);
  return r;
}

CheckResult check_maximum_principle(const ModelParams& base) {
  CheckResult r;
  r.name = "temperature maximum principle";
  ModelParams p = base;
  p.ic.preset = "perturbed";
  p.t_final = std::min(p.t_final, 0.2);
  Trajectory tr = run_model(p, 10);

  double lo = 1e300, hi = -1e300;
  for (const FlowState& s : tr.states) {
    for (double v : s.theta.v) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  r.passed = lo >= -1e-8 && hi <= 1.0 + 1e-8;
  r.detail = format("theta range [%.3e, %.10f] over the run (walls pin 0 and 1)", lo, hi);
  return r;
}

std::vector<CheckResult> run_verification(const ModelParams& base) {
  return {check_stokes_refinement(),      check_stokes_oracle(),
          check_semigroup_decay(),        check_semigroup_oracle(),
          check_conduction_fixed_point(base), check_maximum_principle(base)};
}

}  // namespace mcnv
