#pragma once
// Solver verification behind the `verify` subcommand and the acceptance
// suite. Each check builds its own reference from scratch (manufactured
// solution, dense oracle, conduction profile) and condenses the outcome
// into one pass flag plus the measured numbers.

#include <string>
#include <vector>

#include "mcnv/dynamics.hpp"

namespace mcnv {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Manufactured convection roll: refine Ny over {17, 33, 65, 129} at two
// gammas and demand every successive L2 rate within 2.0 +/- 0.2.
CheckResult check_stokes_refinement();

// Banded solve against the dense-assembly solve at 16x17, Linf <= 1e-9.
CheckResult check_stokes_oracle();

// Slowest decay rate in [9, 12] at L = 2, semigroup norms nonincreasing
// over tau in {0.1, 0.5, 1} and below e^{-(lambda1 - 0.5) tau}.
CheckResult check_semigroup_decay();

// Crank-Nicolson semigroup against the dense matrix exponential at
// 16x17, relative L2 <= 1e-5.
CheckResult check_semigroup_oracle();

// All three integrators hold the motionless conducting state for 500
// steps; largest nodal drift <= 1e-10. Walltime goes into the detail.
CheckResult check_conduction_fixed_point(const ModelParams& base);

// A short perturbed run keeps the temperature inside [0, 1] up to 1e-8.
CheckResult check_maximum_principle(const ModelParams& base);

// Everything above, in that order.
std::vector<CheckResult> run_verification(const ModelParams& base);

}  // namespace mcnv
