#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "mcnv/dynamics.hpp"
#include "mcnv/norms.hpp"
#include "mcnv/ops.hpp"
#include "mcnv/stokes.hpp"

using namespace mcnv;

namespace {

ModelParams base_params() {
  ModelParams p;
  p.model = Model::Full;
  p.epsilon = 0.1;
  p.nx = 32;
  p.ny = 33;
  p.length = 2.0;
  p.dt = 1e-3;
  p.t_final = 0.1;
  return p;
}

double state_distance(const FlowState& a, const FlowState& b) {
  return norm(sub(a.u, b.u), NormKind::L2) + norm(sub(a.b, b.b), NormKind::L2) +
         norm(sub(a.theta, b.theta), NormKind::L2);
}

}  // namespace

TEST_CASE("parameter validation") {
  ModelParams p = base_params();
  CHECK_NOTHROW(validate(p));

  ModelParams q = p;
  q.epsilon = 0.0;
  CHECK_THROWS(validate(q));
  q = p;
  q.epsilon = 1.5;
  CHECK_THROWS(validate(q));
  q = p;
  q.t_final = 0.1005;  // not a step multiple
  CHECK_THROWS(validate(q));
  q = p;
  q.ic.amp_theta = 0.6;
  CHECK_THROWS(validate(q));
  q = p;
  q.ic.mode = q.nx / 2;  // Nyquist roll has no x-derivative on the grid
  CHECK_THROWS(validate(q));
  q = p;
  q.ic.preset = "vortex";
  CHECK_THROWS(validate(q));
  q = p;
  q.rayleigh = -1.0;
  CHECK_THROWS(validate(q));
}

TEST_CASE("model names round-trip") {
  for (Model m : {Model::Full, Model::Limit, Model::Effective})
    CHECK(model_from_string(to_string(m)) == m);
  CHECK_THROWS(model_from_string("steady"));
}

TEST_CASE("conduction start is motionless with the linear profile") {
  ModelParams p = base_params();
  p.ic.preset = "conduction";
  FlowState s = build_initial(p);
  const Grid& g = s.u.grid();
  CHECK(norm(s.u, NormKind::Linf) == 0.0);
  CHECK(norm(s.b, NormKind::Linf) == 0.0);
  for (int i = 0; i < g.nx; ++i) {
    CHECK(s.theta.at(i, 0) == 1.0);
    CHECK(s.theta.at(i, g.ny - 1) == 0.0);
    for (int j = 0; j < g.ny; ++j) CHECK(s.theta.at(i, j) == 1.0 - g.y(j));
  }
}

TEST_CASE("perturbed start is solenoidal with clean walls") {
  ModelParams p = base_params();
  FlowState s = build_initial(p);
  const Grid& g = s.u.grid();

  CHECK(norm(divergence(s.u), NormKind::Linf) < 1e-13);
  CHECK(norm(divergence(s.b), NormKind::Linf) < 1e-13);
  for (int i = 0; i < g.nx; ++i) {
    CHECK(s.u.x.at(i, 0) == 0.0);
    CHECK(s.u.y.at(i, g.ny - 1) == 0.0);
    CHECK(s.b.x.at(i, 0) == 0.0);
    CHECK(s.b.y.at(i, g.ny - 1) == 0.0);
    CHECK(s.theta.at(i, 0) == 1.0);
    CHECK(s.theta.at(i, g.ny - 1) == 0.0);
  }
  CHECK(norm(s.u, NormKind::Linf) > 0.01);
  CHECK(norm(s.theta, NormKind::Linf) <= 1.0 + 1e-12);
}

TEST_CASE("conduction is a fixed point of every model") {
  for (Model m : {Model::Full, Model::Limit, Model::Effective}) {
    ModelParams p = base_params();
    p.model = m;
    p.ic.preset = "conduction";
    p.t_final = 0.1;
    Trajectory tr = run_model(p, 100);
    const FlowState& last = tr.states.back();
    CHECK(norm(last.u, NormKind::L2) < 1e-12);
    CHECK(norm(last.b, NormKind::L2) < 1e-12);
    CHECK(state_distance(last, tr.states.front()) < 1e-12);
  }
}

TEST_CASE("perturbed run keeps temperature bounds and solenoidal velocity") {
  ModelParams p = base_params();
  p.t_final = 0.1;
  Trajectory tr = run_model(p, 25);
  for (const FlowState& s : tr.states) {
    CHECK(norm(s.theta, NormKind::Linf) <= 1.0 + 1e-8);
    double uscale = std::max(1.0, norm(s.u, NormKind::Linf));
    CHECK(norm(divergence(s.u), NormKind::Linf) <= 1e-11 * uscale);
  }
}

TEST_CASE("snapshot cadence covers start and horizon") {
  ModelParams p = base_params();
  p.t_final = 0.1;  // 100 steps
  Trajectory tr = run_model(p, 7);
  CHECK(tr.times.front() == 0.0);
  CHECK(tr.times.back() == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(tr.times.size() == tr.states.size());
  // 0, 7 dt, ..., 98 dt, plus the forced final state
  CHECK(int(tr.times.size()) == 16);
  for (size_t q = 1; q < tr.times.size(); ++q) CHECK(tr.times[q] > tr.times[q - 1]);
}

TEST_CASE("full model converges at first order in dt") {
  ModelParams p = base_params();
  p.t_final = 0.04;
  p.dt = 2.5e-4;
  FlowState ref = run_model(p, step_count(p)).states.back();

  std::vector<double> errs;
  for (double dt : {4e-3, 2e-3, 1e-3}) {
    p.dt = dt;
    FlowState got = run_model(p, step_count(p)).states.back();
    errs.push_back(state_distance(got, ref));
  }
  for (size_t q = 1; q < errs.size(); ++q) {
    double rate = std::log2(errs[q - 1] / errs[q]);
    CHECK(rate > 0.7);
    CHECK(rate < 1.3);
  }
}

TEST_CASE("limit model ignores epsilon bit for bit") {
  ModelParams p = base_params();
  p.model = Model::Limit;
  p.t_final = 0.05;
  p.epsilon = 0.1;
  Trajectory a = run_model(p, step_count(p));
  p.epsilon = 0.0371;
  Trajectory b = run_model(p, step_count(p));
  CHECK(a.states.back().u.x.v == b.states.back().u.x.v);
  CHECK(a.states.back().b.y.v == b.states.back().b.y.v);
  CHECK(a.states.back().theta.v == b.states.back().theta.v);
}

TEST_CASE("full model approaches the limit model as epsilon shrinks") {
  ModelParams p = base_params();
  p.t_final = 0.1;
  p.epsilon = 1e-5;
  FlowState full = run_model(p, step_count(p)).states.back();
  p.model = Model::Limit;
  FlowState lim = run_model(p, step_count(p)).states.back();
  CHECK(norm(sub(full.b, lim.b), NormKind::L2) < 1e-3);
  CHECK(norm(sub(full.theta, lim.theta), NormKind::L2) < 1e-3);
  CHECK(norm(sub(full.u, lim.u), NormKind::L2) < 1e-3);
}

TEST_CASE("effective model starts at the primitive state and relaxes to slaved flow") {
  ModelParams p = base_params();
  p.model = Model::Effective;
  p.epsilon = 0.005;
  p.t_final = 0.2;
  FlowState ic = build_initial(p);
  Trajectory tr = run_model(p, step_count(p));

  CHECK(norm(sub(tr.states.front().u, ic.u), NormKind::L2) < 1e-12);

  // By t = 0.2 the layer has decayed through forty decay times, so the
  // stored velocity is exactly the slaved one.
  const FlowState& last = tr.states.back();
  StokesWorkspace ws(ic.u.grid(), 0.0);
  VectorField slaved = slaved_velocity(last.b, last.theta, p, ws);
  CHECK(norm(sub(last.u, slaved), NormKind::L2) < 1e-12);
}

TEST_CASE("limit and effective velocities stay slaved along the run") {
  ModelParams p = base_params();
  p.model = Model::Limit;
  p.t_final = 0.02;
  Trajectory tr = run_model(p, 10);
  StokesWorkspace ws(tr.states[0].u.grid(), 0.0);
  for (const FlowState& s : tr.states) {
    VectorField slaved = slaved_velocity(s.b, s.theta, p, ws);
    CHECK(norm(sub(s.u, slaved), NormKind::L2) < 1e-12);
  }
}
