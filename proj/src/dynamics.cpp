#include "mcnv/dynamics.hpp"

#include <cmath>
#include <functional>

#include "mcnv/check.hpp"
#include "mcnv/norms.hpp"
#include "mcnv/ops.hpp"
#include "mcnv/spectral.hpp"

namespace mcnv {

namespace {

constexpr double kPi = 3.14159265358979323846;

ScalarField advect(const VectorField& v, const ScalarField& f) {
  ScalarField fx = dx(f);
  ScalarField fy = dy(f);
  ScalarField out(f.grid);
  for (size_t q = 0; q < out.v.size(); ++q)
    out.v[q] = v.x.v[q] * fx.v[q] + v.y.v[q] * fy.v[q];
  return out;
}

VectorField advect(const VectorField& v, const VectorField& f) {
  VectorField out;
  out.x = advect(v, f.x);
  out.y = advect(v, f.y);
  return out;
}

ScalarField roll_profile(const Grid& g, double amp, int mode,
                         const std::function<double(double)>& shape) {
  ScalarField f(g);
  double w = 2.0 * kPi * mode / g.length;
  for (int i = 0; i < g.nx; ++i)
    for (int j = 1; j < g.ny - 1; ++j)
      f.at(i, j) = amp * std::sin(w * g.x(i)) * shape(g.y(j));
  return f;  // wall rows stay exactly zero
}

}  // namespace

Model model_from_string(const std::string& s) {
  if (s == "full") return Model::Full;
  if (s == "limit") return Model::Limit;
  if (s == "effective") return Model::Effective;
  require_arg(false, "unknown model '" + s + "', expected full, limit or effective");
  return Model::Full;
}

std::string to_string(Model m) {
  switch (m) {
    case Model::Full: return "full";
    case Model::Limit: return "limit";
    case Model::Effective: return "effective";
  }
  return "full";
}

void validate(const ModelParams& p) {
  make_grid(p.nx, p.ny, p.length);
  require_arg(p.epsilon > 0.0 && p.epsilon <= 1.0, "epsilon must lie in (0, 1]");
  require_arg(p.rayleigh > 0.0, "rayleigh must be positive");
  require_arg(p.chandrasekhar > 0.0, "chandrasekhar must be positive");
  require_arg(p.prandtl_m > 0.0, "prandtl_m must be positive");
  require_arg(p.dt > 0.0, "dt must be positive");
  require_arg(p.t_final >= p.dt, "t_final must cover at least one step");
  double steps = p.t_final / p.dt;
  require_arg(std::fabs(steps - std::llround(steps)) <= 1e-9 * std::max(1.0, steps),
              "t_final must be an integer multiple of dt");
  require_arg(p.substep_cap > 0.0, "substep_cap must be positive");
  require_arg(p.ic.preset == "conduction" || p.ic.preset == "perturbed",
              "ic preset must be conduction or perturbed");
  require_arg(p.ic.amp_psi >= 0.0 && p.ic.amp_b >= 0.0 && p.ic.amp_theta >= 0.0,
              "ic amplitudes must be nonnegative");
  require_arg(p.ic.amp_theta <= 0.5, "ic amp_theta above 0.5 leaves the conduction range");
  require_arg(p.ic.mode >= 1 && p.ic.mode < p.nx / 2,
              "ic mode must be resolvable on the grid");
}

int step_count(const ModelParams& p) { return int(std::llround(p.t_final / p.dt)); }

FlowState build_initial(const ModelParams& p) {
  validate(p);
  Grid g = make_grid(p.nx, p.ny, p.length);
  FlowState s;
  s.u = VectorField(g);
  s.b = VectorField(g);
  s.theta = ScalarField(g);
  s.t = 0.0;
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) s.theta.at(i, j) = 1.0 - g.y(j);
  if (p.ic.preset == "conduction") return s;

  auto clamped = [](double y) {
    double q = std::sin(kPi * y);
    return q * q;
  };
  s.u = velocity_from_streamfunction(roll_profile(g, p.ic.amp_psi, p.ic.mode, clamped));
  s.b = velocity_from_streamfunction(roll_profile(g, p.ic.amp_b, p.ic.mode, clamped));
  ScalarField bump = roll_profile(g, p.ic.amp_theta, p.ic.mode,
                                  [](double y) { return std::sin(kPi * y); });
  s.theta = add(s.theta, bump);
  return s;
}

VectorField coupling_force(const VectorField& b, const ScalarField& theta,
                           const ModelParams& p) {
  double pmq = p.prandtl_m * p.chandrasekhar;
  VectorField lorentz = advect(b, b);
  VectorField f;
  f.x = add(lorentz.x, dy(b.x));
  f.y = add(lorentz.y, dy(b.y));
  f.x = scale(f.x, pmq);
  f.y = add(scale(f.y, pmq), scale(theta, p.rayleigh));
  return f;
}

VectorField slaved_velocity(const VectorField& b, const ScalarField& theta,
                            const ModelParams& p, StokesWorkspace& ws) {
  return solve_generalized_stokes(coupling_force(b, theta, p), 0.0, ws);
}

DiffusionSolver::DiffusionSolver(const Grid& g, double alpha)
    : grid_(g), alpha_(alpha) {
  require_arg(alpha > 0.0, "diffusion solver: mass coefficient must be positive");
  const int ni = g.ny - 2;
  const double h = g.hy();
  lu_.resize(size_t(g.nx / 2) + 1);
  for (int mk = 0; mk <= g.nx / 2; ++mk) {
    double kd = diffusion_wavenumber(g, mk);
    Banded a(ni, 1, 1);
    for (int r = 0; r < ni; ++r) {
      a.at(r, r) = alpha + kd * kd + 2.0 / (h * h);
      if (r > 0) a.at(r, r - 1) = -1.0 / (h * h);
      if (r + 1 < ni) a.at(r, r + 1) = -1.0 / (h * h);
    }
    lu_[size_t(mk)] = std::make_unique<BandedLU>(a);
  }
}

ScalarField DiffusionSolver::solve(const ScalarField& rhs) const {
  const Grid& g = grid_;
  require(g.same(rhs.grid), "diffusion solver: grid mismatch");
  const int n = g.ny;
  SpectralField m = to_modes(rhs);
  std::vector<std::complex<double>> buf(size_t(n - 2));
  for (int mm = 0; mm < g.nx; ++mm) {
    std::complex<double>* col = &m.v[size_t(mm) * n];
    for (int j = 1; j + 1 < n; ++j) buf[size_t(j - 1)] = col[j];
    int mk = std::min(mm, g.nx - mm);
    lu_[size_t(mk)]->solve(buf.data());
    col[0] = 0.0;
    for (int j = 1; j + 1 < n; ++j) col[j] = buf[size_t(j - 1)];
    col[n - 1] = 0.0;
  }
  return from_modes(m);
}

Simulation::Simulation(const ModelParams& p) : params_(p) {
  validate(p);
  Grid g = make_grid(p.nx, p.ny, p.length);
  state_ = build_initial(p);
  profile_ = ScalarField(g);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) profile_.at(i, j) = 1.0 - g.y(j);
  theta_lo_ = 0.0;
  theta_hi_ = 1.0;
  for (double q : state_.theta.v) {
    theta_lo_ = std::min(theta_lo_, q);
    theta_hi_ = std::max(theta_hi_, q);
  }
  induction_ = std::make_unique<DiffusionSolver>(g, 1.0 / (p.prandtl_m * p.dt));
  heat_ = std::make_unique<DiffusionSolver>(g, 1.0 / p.dt);
  switch (p.model) {
    case Model::Full:
      momentum_ = std::make_unique<StokesWorkspace>(g, p.epsilon / p.dt);
      break;
    case Model::Limit:
      steady_ = std::make_unique<StokesWorkspace>(g, 0.0);
      state_.u = slaved_velocity(state_.b, state_.theta, params_, *steady_);
      break;
    case Model::Effective: {
      steady_ = std::make_unique<StokesWorkspace>(g, 0.0);
      VectorField slaved = slaved_velocity(state_.b, state_.theta, params_, *steady_);
      VectorField w0 = sub(state_.u, slaved);
      layer_ = std::make_unique<SemigroupStepper>(g, w0, p.dt / p.epsilon, p.substep_cap);
      state_.u = add(layer_->value(), slaved);
      break;
    }
  }
  check_state("initial state");
}

ScalarField Simulation::lift(const ScalarField& theta) const {
  return sub(theta, profile_);
}

ScalarField Simulation::unlift(const ScalarField& lifted) const {
  return add(lifted, profile_);
}

VectorField Simulation::induction_rhs(const VectorField& u, const VectorField& b) const {
  double alpha = 1.0 / (params_.prandtl_m * params_.dt);
  double c = 1.0 / params_.prandtl_m;
  VectorField sweep = advect(u, b);
  VectorField stretch = advect(b, u);
  VectorField rhs;
  rhs.x = add(scale(b.x, alpha), scale(add(sub(stretch.x, sweep.x), dy(u.x)), c));
  rhs.y = add(scale(b.y, alpha), scale(add(sub(stretch.y, sweep.y), dy(u.y)), c));
  return rhs;
}

ScalarField Simulation::heat_rhs(const VectorField& u, const ScalarField& lifted) const {
  ScalarField rhs = scale(lifted, 1.0 / params_.dt);
  rhs = sub(rhs, advect(u, lifted));
  return add(rhs, u.y);
}

void Simulation::advance_fields(const VectorField& u, VectorField& b_next,
                                ScalarField& theta_next) const {
  VectorField brhs = induction_rhs(u, state_.b);
  b_next.x = induction_->solve(brhs.x);
  b_next.y = induction_->solve(brhs.y);

  ScalarField lifted = lift(state_.theta);
  theta_next = unlift(heat_->solve(heat_rhs(u, lifted)));
}

// All three integrators transport (B, theta) with the end-of-step
// velocity, computed from predicted fields. Sampling the velocity at
// the start of the step instead would let the initial transient push
// the magnetic and thermal fields by a full dt * w0 impulse however
// small eps is; with end-of-step sampling the backward-damped transient
// of the full model accumulates an impulse of exactly eps / lambda per
// mode, the time integral of the decaying layer. The effective model
// handles its transient separately inside step_effective.

void Simulation::step_full() {
  const VectorField& u = state_.u;

  VectorField b_pred;
  ScalarField theta_pred = state_.theta;
  advance_fields(u, b_pred, theta_pred);

  double gamma = params_.epsilon / params_.dt;
  VectorField f = coupling_force(b_pred, theta_pred, params_);
  VectorField inertia = advect(u, u);
  f.x = add(f.x, sub(scale(u.x, gamma), scale(inertia.x, params_.epsilon)));
  f.y = add(f.y, sub(scale(u.y, gamma), scale(inertia.y, params_.epsilon)));
  VectorField u_next = solve_generalized_stokes(f, gamma, *momentum_);

  VectorField b_next;
  ScalarField theta_next = state_.theta;
  advance_fields(u_next, b_next, theta_next);

  state_.u = u_next;
  state_.b = b_next;
  state_.theta = theta_next;
}

void Simulation::step_limit() {
  const VectorField& u = state_.u;  // slaved to the current (B, theta)

  VectorField b_pred;
  ScalarField theta_pred = state_.theta;
  advance_fields(u, b_pred, theta_pred);
  VectorField u_next = slaved_velocity(b_pred, theta_pred, params_, *steady_);

  VectorField b_next;
  ScalarField theta_next = state_.theta;
  advance_fields(u_next, b_next, theta_next);

  state_.b = b_next;
  state_.theta = theta_next;
  state_.u = slaved_velocity(state_.b, state_.theta, params_, *steady_);
}

void Simulation::step_effective() {
  const VectorField& u = state_.u;

  VectorField b_pred;
  ScalarField theta_pred = state_.theta;
  advance_fields(u, b_pred, theta_pred);

  // The transient can cross several e-foldings within one dt once eps is
  // small, so transporting with its value at either endpoint misstates
  // its accumulated push on (B, theta). Its exact average over the step
  // is recoverable from the endpoint values alone: integrating
  // v' = -(1/eps) A v over the step gives
  // mean = (eps / dt) A^{-1} (v_before - v_after), and summing dt * mean
  // over all steps telescopes to eps A^{-1} w0, the transient's exact
  // time integral.
  VectorField layer_before = layer_->value();
  layer_->advance();
  VectorField layer_mean =
      scale(solve_generalized_stokes(sub(layer_before, layer_->value()), 0.0, *steady_),
            params_.epsilon / params_.dt);
  VectorField u_transport =
      add(layer_mean, slaved_velocity(b_pred, theta_pred, params_, *steady_));

  VectorField b_next;
  ScalarField theta_next = state_.theta;
  advance_fields(u_transport, b_next, theta_next);

  state_.b = b_next;
  state_.theta = theta_next;
  state_.u = add(layer_->value(),
                 slaved_velocity(state_.b, state_.theta, params_, *steady_));
}

void Simulation::step() {
  switch (params_.model) {
    case Model::Full: step_full(); break;
    case Model::Limit: step_limit(); break;
    case Model::Effective: step_effective(); break;
  }
  ++steps_;
  state_.t = steps_ * params_.dt;
  check_state("after step");
}

void Simulation::check_state(const char* where) const {
  const Grid& g = state_.u.grid();
  require(all_finite(state_.u) && all_finite(state_.b) && all_finite(state_.theta),
          std::string("simulation: non-finite values (") + where + ")");

  double uscale = std::max(1.0, norm(state_.u, NormKind::Linf));
  ScalarField div = divergence(state_.u);
  for (double q : div.v)
    require(std::fabs(q) <= 1e-10 * uscale,
            std::string("simulation: velocity divergence out of range (") + where + ")");

  for (double q : state_.theta.v)
    require(q >= theta_lo_ - 1e-8 && q <= theta_hi_ + 1e-8,
            std::string("simulation: temperature left its initial bounds (") + where + ")");

  for (int i = 0; i < g.nx; ++i) {
    bool walls_clean =
        state_.u.x.at(i, 0) == 0.0 && state_.u.x.at(i, g.ny - 1) == 0.0 &&
        state_.u.y.at(i, 0) == 0.0 && state_.u.y.at(i, g.ny - 1) == 0.0 &&
        state_.b.x.at(i, 0) == 0.0 && state_.b.x.at(i, g.ny - 1) == 0.0 &&
        state_.b.y.at(i, 0) == 0.0 && state_.b.y.at(i, g.ny - 1) == 0.0 &&
        state_.theta.at(i, 0) == 1.0 && state_.theta.at(i, g.ny - 1) == 0.0;
    require(walls_clean, std::string("simulation: wall rows drifted (") + where + ")");
  }
}

Trajectory run_model(const ModelParams& p, int save_every) {
  require_arg(save_every >= 1, "run_model: save_every must be at least 1");
  Simulation sim(p);
  Trajectory tr;
  tr.params = p;
  tr.times.push_back(0.0);
  tr.states.push_back(sim.state());
  int n = step_count(p);
  for (int s = 1; s <= n; ++s) {
    sim.step();
    if (s % save_every == 0 || s == n) {
      tr.times.push_back(sim.state().t);
      tr.states.push_back(sim.state());
    }
  }
  return tr;
}

}  // namespace mcnv
