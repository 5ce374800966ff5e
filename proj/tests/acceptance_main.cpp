// Acceptance gate for the laboratory. Nine checks, one [PASS]/[FAIL]
// line each with the measured numbers and the tolerance they are held
// to. Checks 1-3 exercise the solver pieces in isolation, 4-8 share a
// single sweep at the default configuration, 9 replays a reduced sweep
// at two thread counts and round-trips the serialization formats. Exit
// status is nonzero when any line fails.

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "mcnv/convergence.hpp"
#include "mcnv/dynamics.hpp"
#include "mcnv/io.hpp"
#include "mcnv/verify.hpp"

using namespace mcnv;

namespace {

std::string format(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const QuantitySweep& quantity(const SweepResult& sr, const std::string& tag) {
  for (const QuantitySweep& q : sr.quantities)
    if (q.tag == tag) return q;
  std::fprintf(stderr, "no quantity tagged %s in the sweep result\n", tag.c_str());
  std::exit(2);
}

// Series in EpsReport are stored in the same order as the quantities.
std::size_t series_index(const SweepResult& sr, const std::string& tag) {
  for (std::size_t q = 0; q < sr.quantities.size(); ++q)
    if (sr.quantities[q].tag == tag) return q;
  std::fprintf(stderr, "no series tagged %s in the sweep result\n", tag.c_str());
  std::exit(2);
}

}  // namespace

int main() {
  int failed = 0;
  auto record = [&](int idx, bool ok, const char* title, const std::string& detail) {
    std::printf("[%s] %d %s: %s\n", ok ? "PASS" : "FAIL", idx, title, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failed;
  };

  ModelParams base;  // 32x33 grid, dt 1e-3, the defaults throughout

  // 1. The motionless conducting state is a fixed point of all three
  //    integrators: 500 steps each, drift at most 1e-10, under 10 s.
  auto t0 = std::chrono::steady_clock::now();
  CheckResult cond = check_conduction_fixed_point(base);
  double cond_s = seconds_since(t0);
  record(1, cond.passed && cond_s <= 10.0, "conduction state held by every integrator",
         format("%s; wall %.1f s against the 10 s budget", cond.detail.c_str(), cond_s));

  // 2. Velocity solver: manufactured-solution refinement at rate
  //    2.0 +/- 0.2 and agreement with the dense-assembly oracle.
  CheckResult sref = check_stokes_refinement();
  CheckResult sora = check_stokes_oracle();
  record(2, sref.passed && sora.passed, "velocity solve refines and matches its oracle",
         sref.detail + "; " + sora.detail);

  // 3. Semigroup: slowest decay rate in [9, 12], norms nonincreasing and
  //    under the spectral bound, matrix-exponential oracle to 1e-5.
  CheckResult sdec = check_semigroup_decay();
  CheckResult sexp = check_semigroup_oracle();
  record(3, sdec.passed && sexp.passed, "semigroup decays at the spectral rate",
         sdec.detail + "; " + sexp.detail);

  // Checks 4 through 8 all read off one sweep at the default
  // configuration. Four worker threads change the walltime only; check
  // 9 holds the report to byte identity across thread counts.
  RunConfig cfg;
  cfg.threads = 4;
  t0 = std::chrono::steady_clock::now();
  SweepResult sr = run_sweep(cfg);
  double sweep_s = seconds_since(t0);

  // 4. Fitted rates for the gated differences against the limit system,
  //    floor entries already cut from the fits, inside 15 minutes.
  const QuantitySweep& qb = quantity(sr, "full_vs_limit.B.L2");
  const QuantitySweep& qt = quantity(sr, "full_vs_limit.theta.L2");
  const QuantitySweep& qu = quantity(sr, "full_vs_limit.u_corrected.L2");
  const QuantitySweep& qg = quantity(sr, "full_vs_limit.u_corrected.gradH1");
  std::string floor_note;
  for (const QuantitySweep* q : {&qb, &qt, &qu, &qg})
    if (q->fit.floored) floor_note += "; " + q->tag + ": " + q->fit.note;
  record(4,
         qb.fit.slope >= 0.85 && qt.fit.slope >= 0.85 && qu.fit.slope >= 0.85 &&
             qg.fit.slope >= 0.35 && sweep_s <= 900.0,
         "sweep rates at the default configuration",
         format("slopes B %.3f, theta %.3f, corrected u %.3f (each >= 0.85), "
                "corrected gradient %.3f (>= 0.35); wall %.1f s of 900 s%s",
                qb.fit.slope, qt.fit.slope, qu.fit.slope, qg.fit.slope, sweep_s,
                floor_note.c_str()));

  // 5. At t = 0 the raw velocity mismatch is order one for every eps
  //    while the layer-corrected one cancels to rounding.
  const std::size_t plain = series_index(sr, "full_vs_limit.u.L2");
  const std::size_t corr = series_index(sr, "full_vs_limit.u_corrected.L2");
  const double ref0 = sr.per_eps.front().series[plain].values[0];
  double plain_min = ref0, corr_max = 0.0;
  for (const EpsReport& r : sr.per_eps) {
    plain_min = std::min(plain_min, r.series[plain].values[0]);
    corr_max = std::max(corr_max, r.series[corr].values[0]);
  }
  record(5,
         sr.eps.front() == 0.1 && plain_min >= 0.5 * ref0 && corr_max <= 1e-10,
         "layer correction cancels the opening mismatch",
         format("raw t = 0 error >= %.3e for every eps (gate: half the %.3e at eps 0.1); "
                "corrected at most %.3e (tolerance 1e-10)",
                plain_min, ref0, corr_max));

  // 6. The layer metric max over t >= eps^(1 - alpha) of
  //    t |u - u_limit|_H2^2 scales like eps uniformly: the spread of
  //    metric / eps across the sweep must stay within x4.
  record(6, sr.band_ratio <= 4.0, "layer metric stays within a fixed band of eps",
         format("metric / eps spreads x%.2f at alpha %.1f (gate: within x4; "
                "x%.2f at alpha %.1f)",
                sr.band_ratio, sr.alpha, sr.band_ratio_alt, sr.alt_alpha));

  // 7. The effective system sits between its neighbours at first order.
  const QuantitySweep& qe = quantity(sr, "effective_vs_limit.B.L2");
  const QuantitySweep& qf = quantity(sr, "full_vs_effective.u.L2");
  record(7, qe.fit.slope >= 0.85 && qf.fit.slope >= 0.85,
         "effective system tracks both neighbours",
         format("effective_vs_limit.B.L2 slope %.3f, full_vs_effective.u.L2 slope %.3f "
                "(each >= 0.85)",
                qe.fit.slope, qf.fit.slope));

  // 8. Uniform-in-eps bounds: the sup-in-time diagnostics spread at most
  //    x2 across the sweep and the temperature never leaves [0, 1].
  double th_lo = sr.per_eps.front().sup_theta_linf, th_hi = th_lo;
  for (const EpsReport& r : sr.per_eps) {
    th_lo = std::min(th_lo, r.sup_theta_linf);
    th_hi = std::max(th_hi, r.sup_theta_linf);
  }
  const double theta_ratio = th_hi / th_lo;
  record(8,
         sr.u_h1_ratio <= 2.0 && sr.grad_b_l4_ratio <= 2.0 && theta_ratio <= 2.0 &&
             sr.theta_linf_max <= 1.0 + 1e-8,
         "uniform bounds across the sweep",
         format("sup|u|_H1 spread x%.3f, sup|grad B|_L4 spread x%.3f, sup|theta|_Linf "
                "spread x%.3f (each <= x2); max|theta|_Linf %.10f (<= 1 + 1e-8)",
                sr.u_h1_ratio, sr.grad_b_l4_ratio, theta_ratio, sr.theta_linf_max));

  // 9. Same report byte for byte at 1 and 4 threads on a reduced sweep,
  //    and both serialization formats round-trip without loss.
  RunConfig small;
  small.params.nx = 16;
  small.params.ny = 17;
  small.params.dt = 2e-3;
  small.params.t_final = 0.08;
  small.save_every = 5;
  small.eps_list = {4e-3, 2e-3, 1e-3};
  small.threads = 1;
  const std::string serial = rate_report_json(run_sweep(small));
  small.threads = 4;
  const std::string farmed = rate_report_json(run_sweep(small));
  const bool bytes_ok = !serial.empty() && serial == farmed;

  ModelParams sp;
  sp.nx = 16;
  sp.ny = 17;
  sp.dt = 2e-3;
  sp.t_final = 0.02;
  Trajectory tr = run_model(sp, 2);
  const FlowState& last = tr.states.back();
  write_snapshot("acceptance_tmp.bin", last, 0.01, sp.model);
  Snapshot snap = read_snapshot("acceptance_tmp.bin");
  std::remove("acceptance_tmp.bin");
  const bool snap_ok = snap.state.u.x.v == last.u.x.v && snap.state.u.y.v == last.u.y.v &&
                       snap.state.b.x.v == last.b.x.v && snap.state.b.y.v == last.b.y.v &&
                       snap.state.theta.v == last.theta.v && snap.state.t == last.t &&
                       snap.epsilon == 0.01 && snap.model == sp.model;

  Series diag = diagnostics_series(tr);
  write_series_csv("acceptance_tmp.csv", diag);
  Series back = read_series_csv("acceptance_tmp.csv");
  std::remove("acceptance_tmp.csv");
  const bool csv_ok = back.columns == diag.columns && back.rows == diag.rows;

  record(9, bytes_ok && snap_ok && csv_ok, "determinism and lossless round-trips",
         format("rate report bytes %s across 1 vs 4 threads; snapshot round-trip %s; "
                "csv round-trip %s",
                bytes_ok ? "identical" : "DIFFER", snap_ok ? "exact" : "LOSSY",
                csv_ok ? "exact" : "LOSSY"));

  if (failed == 0)
    std::printf("all 9 acceptance checks passed\n");
  else
    std::printf("%d of 9 acceptance checks failed\n", failed);
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
