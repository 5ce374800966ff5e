#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <functional>
#include <vector>

#include "mcnv/grid.hpp"
#include "mcnv/norms.hpp"
#include "mcnv/ops.hpp"
#include "mcnv/oracles.hpp"
#include "mcnv/stokes.hpp"

using namespace mcnv;

namespace {

constexpr double kPi = 3.14159265358979323846;

ScalarField fill(const Grid& g, const std::function<double(double, double)>& f) {
  ScalarField out(g);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) out.at(i, j) = f(g.x(i), g.y(j));
  return out;
}

double rel_l2(const VectorField& a, const VectorField& b) {
  return norm(sub(a, b), NormKind::L2) / norm(b, NormKind::L2);
}

// Clamped roll streamfunction and the generalized Stokes forcing that
// makes it the exact continuum solution with zero pressure.
struct RollCase {
  double w;

  explicit RollCase(double length) : w(2.0 * kPi / length) {}

  double u1(double x, double y) const { return kPi * std::sin(w * x) * std::sin(2.0 * kPi * y); }
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

VectorField smooth_test_forcing(const Grid& g) {
  double w = 2.0 * kPi / g.length;
  VectorField f(g);
  f.x = fill(g, [&](double x, double y) {
    return std::sin(w * x) * y * (1.0 - y) * std::exp(y) + 0.2 * std::cos(2.0 * w * x) + 0.3 * (1.0 + y);
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

}  // namespace

TEST_CASE("generalized Stokes solve converges at second order in y") {
  for (double gamma : {0.0, 50.0}) {
    std::vector<double> errs;
    for (int ny : {17, 33, 65, 129}) {
      Grid g = make_grid(16, ny, 2.0);
      StokesWorkspace ws(g, gamma);
      VectorField got = solve_generalized_stokes(roll_forcing(g, gamma), gamma, ws);
      errs.push_back(norm(sub(got, roll_velocity(g)), NormKind::L2));
    }
    for (size_t q = 1; q < errs.size(); ++q) {
      double rate = std::log2(errs[q - 1] / errs[q]);
      CHECK(rate == doctest::Approx(2.0).epsilon(0.1));
    }
  }
}

TEST_CASE("generalized Stokes matches the dense oracle") {
  Grid g = make_grid(16, 17, 2.0);
  VectorField f = smooth_test_forcing(g);
  for (double gamma : {0.0, 3.7}) {
    StokesWorkspace ws(g, gamma);
    VectorField got = solve_generalized_stokes(f, gamma, ws);
    VectorField want = oracle_stokes_solve(f, gamma);
    CHECK(norm(sub(got, want), NormKind::Linf) < 1e-9);
  }
}

TEST_CASE("solver rejects mismatched workspace") {
  Grid g = make_grid(16, 17, 2.0);
  Grid g2 = make_grid(16, 33, 2.0);
  StokesWorkspace ws(g, 1.0);
  VectorField f(g2);
  CHECK_THROWS(solve_generalized_stokes(f, 1.0, ws));
  VectorField f1(g);
  CHECK_THROWS(solve_generalized_stokes(f1, 2.0, ws));
}

TEST_CASE("projection leaves divergence-free fields fixed") {
  Grid g = make_grid(32, 33, 2.0);
  StokesWorkspace ws(g, 0.0);
  VectorField u = streamfunction_velocity(g, 1);
  VectorField p = leray_project(u, ws);
  CHECK(rel_l2(p, u) < 1e-10);
}

TEST_CASE("projection annihilates gradients") {
  Grid g = make_grid(32, 33, 2.0);
  StokesWorkspace ws(g, 0.0);
  double w = 2.0 * kPi / g.length;
  ScalarField phi = fill(g, [&](double x, double y) {
    return std::sin(w * x) * std::exp(y) + 0.4 * std::cos(2.0 * w * x) * y * y;
  });
  VectorField gp = grad(phi);
  VectorField p = leray_project(gp, ws);
  CHECK(norm(p, NormKind::L2) < 1e-8 * norm(gp, NormKind::L2));
}

TEST_CASE("projection output: divergence, walls, idempotence") {
  Grid g = make_grid(32, 33, 2.0);
  StokesWorkspace ws(g, 0.0);
  VectorField f = smooth_test_forcing(g);
  VectorField p = leray_project(f, ws);

  ScalarField div = divergence(p);
  double scale = std::max(1.0, norm(p, NormKind::Linf));
  for (int i = 0; i < g.nx; ++i)
    for (int j = 1; j < g.ny - 1; ++j) CHECK(std::abs(div.at(i, j)) < 1e-10 * scale);

  for (int i = 0; i < g.nx; ++i) {
    CHECK(p.y.at(i, 0) == 0.0);
    CHECK(p.y.at(i, g.ny - 1) == 0.0);
  }

  VectorField pp = leray_project(p, ws);
  CHECK(norm(sub(pp, p), NormKind::L2) < 1e-10 * norm(p, NormKind::L2));

  // Axial vertical content is removed entirely.
  for (int j = 0; j < g.ny; ++j) {
    double mean = 0.0;
    for (int i = 0; i < g.nx; ++i) mean += p.y.at(i, j);
    CHECK(std::abs(mean / g.nx) < 1e-13 * scale);
  }
}

TEST_CASE("stokes_apply undoes the solve at any gamma") {
  // u_g = (g + A)^{-1} Pf, so A u_g + g u_g is the same field for every
  // gamma; matching across two gammas pins the operator to the solver.
  Grid g = make_grid(16, 33, 2.0);
  StokesWorkspace ws0(g, 0.0);
  StokesWorkspace ws1(g, 7.3);
  VectorField f = smooth_test_forcing(g);
  VectorField u0 = solve_generalized_stokes(f, 0.0, ws0);
  VectorField u1 = solve_generalized_stokes(f, 7.3, ws1);
  VectorField lhs = stokes_apply(u0, ws0);
  VectorField rhs = add(stokes_apply(u1, ws1), scale(u1, 7.3));
  CHECK(norm(sub(lhs, rhs), NormKind::L2) < 1e-9 * norm(lhs, NormKind::L2));
}

TEST_CASE("semigroup starts at the initial state and contracts") {
  Grid g = make_grid(16, 33, 2.0);
  VectorField u0 = streamfunction_velocity(g, 1);
  SemigroupStepper s(g, u0, 0.01, 0.01);
  CHECK(s.norm_l2() == doctest::Approx(norm(u0, NormKind::L2)).epsilon(1e-11));
  CHECK(rel_l2(s.value(), u0) < 1e-12);

  double prev = s.norm_l2();
  for (int q = 0; q < 20; ++q) {
    s.advance();
    double cur = s.norm_l2();
    CHECK(cur <= prev * (1.0 + 1e-14));
    prev = cur;
  }
}

TEST_CASE("semigroup composes over the cap grid") {
  Grid g = make_grid(16, 33, 2.0);
  StokesWorkspace ws(g, 0.0);
  VectorField u0 = streamfunction_velocity(g, 1);
  VectorField once = semigroup_apply(u0, 0.05, 0.01, ws);
  VectorField twice = semigroup_apply(semigroup_apply(u0, 0.02, 0.01, ws), 0.03, 0.01, ws);
  CHECK(norm(sub(once, twice), NormKind::L2) < 1e-12 * norm(u0, NormKind::L2));
}

TEST_CASE("semigroup decay is bounded by the slowest rate") {
  Grid g = make_grid(16, 33, 2.0);
  StokesWorkspace ws(g, 0.0);
  double lam = estimate_slowest_decay(g);
  VectorField u0 = streamfunction_velocity(g, 1);
  double tau = 0.1;
  VectorField ut = semigroup_apply(u0, tau, 1e-3, ws);
  CHECK(norm(ut, NormKind::L2) <=
        norm(u0, NormKind::L2) * std::exp(-(lam - 0.5) * tau));
}

TEST_CASE("semigroup matches the matrix exponential oracle") {
  Grid g = make_grid(16, 17, 2.0);
  StokesWorkspace ws(g, 0.0);
  VectorField u0 = streamfunction_velocity(g, 1);
  u0 = add(u0, scale(streamfunction_velocity(g, 2), 0.5));
  double tau = 0.5;
  VectorField got = semigroup_apply(u0, tau, 1e-3, ws);
  VectorField want = oracle_semigroup(u0, tau);
  CHECK(norm(sub(got, want), NormKind::L2) < 1e-5 * norm(u0, NormKind::L2));
}

TEST_CASE("semigroup decays to an exact zero") {
  // Substeps must resolve the stiff end of the spectrum: with a large
  // cap the trapezoidal factor tends to -1 there and decay stalls.
  Grid g = make_grid(16, 17, 2.0);
  StokesWorkspace ws(g, 0.0);
  VectorField u0 = streamfunction_velocity(g, 1);
  VectorField dead = semigroup_apply(u0, 4.0, 0.01, ws);
  for (double q : dead.x.v) CHECK(q == 0.0);
  for (double q : dead.y.v) CHECK(q == 0.0);
}

TEST_CASE("slowest decay rate sits in the heat band and matches the oracle") {
  Grid g = make_grid(32, 33, 2.0);
  double lam = estimate_slowest_decay(g);
  CHECK(lam > 9.0);
  CHECK(lam < 12.0);
  CHECK(lam == doctest::Approx(oracle_slowest_decay(g)).epsilon(1e-6));

  Grid fine = make_grid(32, 65, 2.0);
  double lam_fine = estimate_slowest_decay(fine);
  CHECK(std::abs(lam_fine - lam) / lam < 0.01);
}
