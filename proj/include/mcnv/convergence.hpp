#pragma once
// Epsilon sweeps and convergence-rate measurement.
//
// One limit-system run is shared across the sweep; for every epsilon
// the full and effective systems are integrated on the same grid and
// step, trajectory differences are reduced to named error series, and
// the final-time errors are fitted with an ordinary least-squares line
// in ln-ln coordinates. Error floors (successive errors no longer
// shrinking) are cut off the fit and flagged rather than fitted over.
//
// The layer metric tracks max over t >= eps^(1-alpha) of
// t * ||u - u_limit||_H2^2 per epsilon, together with the spread of
// metric / eps across the sweep.

#include <string>
#include <vector>

#include "mcnv/dynamics.hpp"
#include "mcnv/io.hpp"

namespace mcnv {

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;  // ln of the fitted constant
  double residual_rms = 0.0;
  int points_used = 0;
  bool floored = false;
  std::string note;
};

// Plain least squares on (ln eps, ln error). eps must arrive sorted
// strictly descending with matching errors, at least two points, every
// error positive; anything else throws std::invalid_argument, so floor
// entries have to be cut off beforehand.
RateFit fit_rate(const std::vector<double>& eps, const std::vector<double>& errors);

// Length of the leading run of errors that keeps decaying: it stops at
// the first nonpositive entry or the first successive ratio >= 0.9,
// whichever comes first. Everything past the cutoff counts as floor.
std::size_t floor_cutoff(const std::vector<double>& errors);

struct ErrorSeries {
  std::string tag;
  std::vector<double> values;  // one per shared snapshot time
};

// e^{-t A / eps} w0 at the given times (uniformly spaced from zero),
// advanced incrementally by one Crank-Nicolson stepper. The first
// entry is w0 itself, so corrections at t = 0 cancel bit for bit.
std::vector<VectorField> layer_correction_series(const VectorField& w0,
                                                 const std::vector<double>& times,
                                                 double epsilon, double substep_cap);

struct QuantitySweep {
  std::string tag;
  double theory = 1.0;  // expected rate in eps
  bool gated = false;   // participates in the pass verdict
  std::vector<double> final_errors;
  std::vector<double> sup_errors;
  RateFit fit;            // over final_errors, floor entries cut off
  bool monotone = true;   // final_errors[k+1] <= 1.05 * final_errors[k] before the floor
  bool passed = true;
};

struct EpsReport {
  double eps = 0.0;
  std::vector<ErrorSeries> series;
  double sup_u_h1 = 0.0;
  double sup_grad_b_l4 = 0.0;
  double sup_theta_linf = 0.0;
  double b_h2_final = 0.0;
  std::vector<double> layer_profile;  // t * ||u - u_limit||_H2^2
};

struct SweepResult {
  std::vector<double> times;
  std::vector<double> eps;
  std::vector<EpsReport> per_eps;
  std::vector<QuantitySweep> quantities;

  double alpha = 0.1;
  double alt_alpha = 0.5;
  std::vector<double> layer_metric;
  std::vector<double> layer_metric_alt;
  double band_ratio = 0.0;  // max / min of layer_metric / eps
  double band_ratio_alt = 0.0;

  double u_h1_ratio = 0.0;
  double grad_b_l4_ratio = 0.0;
  double theta_linf_max = 0.0;

  bool rates_passed = false;
  bool layer_passed = false;
  bool diagnostics_passed = false;
};

// Runs the whole sweep; cfg.threads > 1 farms the per-eps work out to
// that many concurrent tasks with results identical to a serial run.
SweepResult run_sweep(const RunConfig& cfg);

// rate_report.json, per-quantity rate CSVs, per-eps series CSVs and a
// gnuplot script, all under cfg.output_dir.
void write_sweep_outputs(const SweepResult& sr, const RunConfig& cfg);

std::string rate_report_json(const SweepResult& sr);

// Norm history of a single trajectory for the run subcommand.
Series diagnostics_series(const Trajectory& tr);

}  // namespace mcnv
