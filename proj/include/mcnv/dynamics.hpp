#pragma once
// Time integration of the coupled velocity / magnetic field /
// temperature system on the channel, in three flavours:
//
//   Full       eps (u_t + u.grad u) + grad p = lap u + Ra k theta
//                                              + Pm Q (B.grad B + dB/dy)
//              B_t = Pm lap B - u.grad B + B.grad u + du/dy
//              theta_t + u.grad theta = lap theta
//   Limit      the eps = 0 system: u is slaved to (B, theta) through a
//              steady Stokes solve, B and theta evolve as above.
//   Effective  u = e^{-tA/eps} w0 + slaved(t): the slaved flow plus a
//              decaying launch transient, with B and theta advected by
//              that composite velocity.
//
// All three advance B and theta with the same first-order scheme,
// implicit in diffusion and explicit in everything else, with the
// advecting velocity taken at the end of the step: a predictor pass
// transports (B, theta) with the current velocity, the new velocity is
// computed from the predicted fields, and the transport is then redone
// with it. One refinement in the effective model: its decaying launch
// transient enters the transport velocity through its exact average
// over the step rather than an endpoint sample, because it can cross
// several e-foldings within a single dt. Temperature is stepped in
// lifted form
// Theta = theta - (1 - y), which is wall-clamped to zero, and restored
// afterwards, so the wall rows of theta hold exactly 1 and 0 forever.
//
// Boundary conditions: u = B = 0 on the walls, theta = 1 at y = 0 and
// 0 at y = 1, everything periodic in x.

#include <memory>
#include <string>
#include <vector>

#include "mcnv/grid.hpp"
#include "mcnv/stokes.hpp"

namespace mcnv {

enum class Model { Full = 0, Limit = 1, Effective = 2 };

Model model_from_string(const std::string& s);
std::string to_string(Model m);

struct InitialCondition {
  std::string preset = "perturbed";  // "conduction" or "perturbed"
  double amp_psi = 0.1;
  double amp_b = 0.1;
  double amp_theta = 0.2;
  int mode = 1;
};

struct ModelParams {
  Model model = Model::Full;
  double epsilon = 1e-2;
  double rayleigh = 1.0;
  double chandrasekhar = 1.0;
  double prandtl_m = 1.0;
  double length = 2.0;
  int nx = 32;
  int ny = 33;
  double dt = 1e-3;
  double t_final = 0.5;
  double substep_cap = 1e-2;
  InitialCondition ic;
};

// Throws std::invalid_argument on out-of-range values, including a
// horizon that is not an integer multiple of dt and a perturbation
// mode the grid cannot carry.
void validate(const ModelParams& p);

// Number of steps implied by (dt, t_final); validate() must pass.
int step_count(const ModelParams& p);

struct FlowState {
  VectorField u;
  VectorField b;
  ScalarField theta;
  double t = 0.0;
};

// The t = 0 state of the full system: conduction is the motionless
// profile theta = 1 - y, perturbed adds single-mode rolls in u and B
// (built from streamfunctions, so they are divergence-free to rounding
// and vanish on the walls bit for bit) and a temperature bump.
FlowState build_initial(const ModelParams& p);

// Ra k theta + Pm Q (B.grad B + dB/dy): the buoyancy and Lorentz
// forcing that drives the momentum balance.
VectorField coupling_force(const VectorField& b, const ScalarField& theta,
                           const ModelParams& p);

// Solves A u = P coupling_force, the velocity the limit system pairs
// with a given (B, theta). The workspace must carry gamma = 0.
VectorField slaved_velocity(const VectorField& b, const ScalarField& theta,
                            const ModelParams& p, StokesWorkspace& ws);

// One (alpha - lap) backward-diffusion solve per x-mode with Dirichlet
// walls; alpha is the mass coefficient 1/(coeff * dt). The Nyquist mode
// keeps its natural wavenumber here.
class DiffusionSolver {
 public:
  DiffusionSolver(const Grid& g, double alpha);
  // Solves (alpha - lap) out = rhs, zero walls.
  ScalarField solve(const ScalarField& rhs) const;

 private:
  Grid grid_;
  double alpha_ = 0.0;
  std::vector<std::unique_ptr<BandedLU>> lu_;  // index min(m, nx - m)
};

// Owns the factorisations and the layer stepper for one run and
// advances the state by dt per step() call. After every step the state
// is checked: finite values, velocity divergence at rounding level,
// temperature inside its initial bounds, hard zeros on the walls.
// Violations throw std::runtime_error.
class Simulation {
 public:
  explicit Simulation(const ModelParams& p);

  const ModelParams& params() const { return params_; }
  const FlowState& state() const { return state_; }
  int steps_taken() const { return steps_; }
  void step();

 private:
  void step_full();
  void step_limit();
  void step_effective();
  // One backward-diffusion transport update of (B, theta) from the
  // stored state, advected by the given velocity.
  void advance_fields(const VectorField& u, VectorField& b_next,
                      ScalarField& theta_next) const;
  VectorField induction_rhs(const VectorField& u, const VectorField& b) const;
  ScalarField heat_rhs(const VectorField& u, const ScalarField& lifted) const;
  ScalarField lift(const ScalarField& theta) const;
  ScalarField unlift(const ScalarField& lifted) const;
  void check_state(const char* where) const;

  ModelParams params_;
  FlowState state_;
  ScalarField profile_;  // 1 - y
  double theta_lo_ = 0.0;
  double theta_hi_ = 1.0;
  int steps_ = 0;
  std::unique_ptr<StokesWorkspace> momentum_;  // full model, gamma = eps/dt
  std::unique_ptr<StokesWorkspace> steady_;    // gamma = 0, slaved solves
  std::unique_ptr<DiffusionSolver> induction_;
  std::unique_ptr<DiffusionSolver> heat_;
  std::unique_ptr<SemigroupStepper> layer_;    // effective model only
};

struct Trajectory {
  ModelParams params;
  std::vector<double> times;
  std::vector<FlowState> states;
};

// Runs the configured model from t = 0 to t_final, keeping every
// save_every-th state (plus the initial and final ones).
Trajectory run_model(const ModelParams& p, int save_every = 1);

}  // namespace mcnv
