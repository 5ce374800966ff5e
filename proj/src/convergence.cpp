#include "mcnv/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <future>
#include <iterator>
#include <limits>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mcnv/check.hpp"
#include "mcnv/norms.hpp"
#include "mcnv/ops.hpp"
#include "mcnv/stokes.hpp"

namespace mcnv {

namespace {

struct QuantityDef {
  const char* tag;
  double theory;
  bool gated;
};

// Order fixed; EpsReport::series is indexed against this table.
const QuantityDef kQuantityDefs[] = {
    {"full_vs_limit.B.L2", 1.0, true},
    {"full_vs_limit.theta.L2", 1.0, true},
    {"full_vs_limit.u.L2", 1.0, false},
    {"full_vs_limit.u.H2", 1.0, false},
    {"full_vs_limit.u_corrected.L2", 1.0, true},
    {"full_vs_limit.u_corrected.gradH1", 0.5, true},
    {"effective_vs_limit.B.L2", 1.0, true},
    {"effective_vs_limit.theta.L2", 1.0, false},
    {"full_vs_effective.u.L2", 1.0, true},
    {"full_vs_effective.B.L2", 1.0, false},
    {"full_vs_effective.theta.L2", 1.0, false},
    {"full_vs_limit.B.H1", 0.5, false},
    {"full_vs_limit.theta.H1", 0.5, false},
    {"full_vs_limit.gradB.L4", 0.25, false},
    {"full_vs_limit.gradTheta.L4", 0.25, false},
};
constexpr int kQuantityCount = static_cast<int>(std::size(kQuantityDefs));

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

EpsReport make_eps_report(const RunConfig& cfg, double eps, const Trajectory& limit) {
  ModelParams p = cfg.params;
  p.epsilon = eps;
  p.model = Model::Full;
  Trajectory full = run_model(p, cfg.save_every);
  p.model = Model::Effective;
  Trajectory eff = run_model(p, cfg.save_every);

  require(full.times.size() == limit.times.size() &&
              eff.times.size() == limit.times.size(),
          "sweep: trajectories disagree on snapshot count");
  const std::size_t nt = full.times.size();

  // Same subtraction that seeds the effective model, so the corrected
  // velocity error telescopes to exact zeros at t = 0.
  VectorField w0 = sub(full.states[0].u, limit.states[0].u);
  std::vector<VectorField> corr =
      layer_correction_series(w0, full.times, eps, cfg.params.substep_cap);

  EpsReport r;
  r.eps = eps;
  r.series.resize(kQuantityCount);
  for (int q = 0; q < kQuantityCount; ++q) {
    r.series[q].tag = kQuantityDefs[q].tag;
    r.series[q].values.reserve(nt);
  }
  r.layer_profile.reserve(nt);

  for (std::size_t k = 0; k < nt; ++k) {
    const FlowState& f = full.states[k];
    const FlowState& l = limit.states[k];
    const FlowState& e = eff.states[k];

    VectorField du = sub(f.u, l.u);
    VectorField du_corr = sub(du, corr[k]);
    VectorField db = sub(f.b, l.b);
    ScalarField dtheta = sub(f.theta, l.theta);
    double u_h2 = norm(du, NormKind::H2);

    r.series[0].values.push_back(norm(db, NormKind::L2));
    r.series[1].values.push_back(norm(dtheta, NormKind::L2));
    r.series[2].values.push_back(norm(du, NormKind::L2));
    r.series[3].values.push_back(u_h2);
    r.series[4].values.push_back(norm(du_corr, NormKind::L2));
    r.series[5].values.push_back(grad_h1_norm(du_corr));
    r.series[6].values.push_back(norm(sub(e.b, l.b), NormKind::L2));
    r.series[7].values.push_back(norm(sub(e.theta, l.theta), NormKind::L2));
    r.series[8].values.push_back(norm(sub(f.u, e.u), NormKind::L2));
    r.series[9].values.push_back(norm(sub(f.b, e.b), NormKind::L2));
    r.series[10].values.push_back(norm(sub(f.theta, e.theta), NormKind::L2));
    r.series[11].values.push_back(norm(db, NormKind::H1));
    r.series[12].values.push_back(norm(dtheta, NormKind::H1));
    r.series[13].values.push_back(grad_l4_norm(db));
    r.series[14].values.push_back(grad_l4_norm(dtheta));

    r.layer_profile.push_back(full.times[k] * u_h2 * u_h2);

    r.sup_u_h1 = std::max(r.sup_u_h1, norm(f.u, NormKind::H1));
    r.sup_grad_b_l4 = std::max(r.sup_grad_b_l4, grad_l4_norm(f.b));
    r.sup_theta_linf = std::max(r.sup_theta_linf, norm(f.theta, NormKind::Linf));
  }
  r.b_h2_final = norm(full.states.back().b, NormKind::H2);
  return r;
}

double layer_metric_for(const SweepResult& sr, std::size_t i, double alpha) {
  const double threshold = std::pow(sr.eps[i], 1.0 - alpha);
  double best = -1.0;
  for (std::size_t k = 0; k < sr.times.size(); ++k) {
    if (sr.times[k] >= threshold) best = std::max(best, sr.per_eps[i].layer_profile[k]);
  }
  require(best >= 0.0, "layer metric: no snapshot at or beyond eps^(1-alpha) = " +
                           format_double(threshold));
  return best;
}

double band_ratio_of(const std::vector<double>& metric, const std::vector<double>& eps) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t i = 0; i < metric.size(); ++i) {
    double scaled = metric[i] / eps[i];
    lo = std::min(lo, scaled);
    hi = std::max(hi, scaled);
  }
  require(lo > 0.0, "layer metric vanished, band ratio undefined");
  return hi / lo;
}

}  // namespace

RateFit fit_rate(const std::vector<double>& eps, const std::vector<double>& errors) {
  require_arg(eps.size() == errors.size(), "fit_rate: eps and errors differ in length");
  require_arg(eps.size() >= 2, "fit_rate: need at least two points");
  for (std::size_t i = 0; i + 1 < eps.size(); ++i) {
    require_arg(eps[i] > eps[i + 1] && eps[i + 1] > 0.0,
                "fit_rate: eps must be positive and sorted descending");
  }
  for (double e : errors) {
    require_arg(e > 0.0, "fit_rate: errors must be positive; cut floored entries first");
  }

  RateFit out;
  out.points_used = static_cast<int>(eps.size());

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    const double x = std::log(eps[i]);
    const double y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(eps.size());
  out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  out.intercept = (sy - out.slope * sx) / n;

  double ss = 0.0;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    const double res = std::log(errors[i]) - (out.intercept + out.slope * std::log(eps[i]));
    ss += res * res;
  }
  out.residual_rms = std::sqrt(ss / n);
  return out;
}

std::size_t floor_cutoff(const std::vector<double>& errors) {
  // Once successive values decay by less than 10% per eps step, the data
  // has hit a floor (scheme error, rounding) and would only drag the
  // slope down; the same goes for exact zeros.
  std::size_t used = 0;
  while (used < errors.size()) {
    if (!(errors[used] > 0.0)) break;
    if (used > 0 && errors[used] > 0.9 * errors[used - 1]) break;
    ++used;
  }
  return used;
}

std::vector<VectorField> layer_correction_series(const VectorField& w0,
                                                 const std::vector<double>& times,
                                                 double epsilon, double substep_cap) {
  require_arg(epsilon > 0.0, "correction series: epsilon must be positive");
  require_arg(substep_cap > 0.0, "correction series: substep cap must be positive");
  require_arg(!times.empty() && times.front() == 0.0,
              "correction series: times must start at zero");

  std::vector<VectorField> out;
  out.reserve(times.size());
  out.push_back(w0);
  if (times.size() == 1) return out;

  const double spacing = times[1] - times[0];
  require_arg(spacing > 0.0, "correction series: times must increase");
  for (std::size_t k = 1; k + 1 < times.size(); ++k) {
    require_arg(std::abs((times[k + 1] - times[k]) - spacing) <= 1e-12 * times.back(),
                "correction series: snapshot times must be uniformly spaced");
  }

  SemigroupStepper layer(w0.x.grid, w0, spacing / epsilon, substep_cap);
  for (std::size_t k = 1; k < times.size(); ++k) {
    layer.advance();
    out.push_back(layer.value());
  }
  return out;
}

SweepResult run_sweep(const RunConfig& cfg) {
  require_arg(cfg.eps_list.size() >= 3, "sweep: need at least three epsilon values");
  std::vector<double> eps = cfg.eps_list;
  std::sort(eps.begin(), eps.end(), std::greater<double>());
  for (std::size_t i = 0; i + 1 < eps.size(); ++i) {
    require_arg(eps[i] > eps[i + 1], "sweep: duplicate epsilon " + format_double(eps[i]));
  }
  require_arg(step_count(cfg.params) % cfg.save_every == 0,
              "sweep: save_every must divide the step count so snapshots are "
              "uniformly spaced");

  ModelParams lp = cfg.params;
  lp.model = Model::Limit;
  const Trajectory limit = run_model(lp, cfg.save_every);

  SweepResult sr;
  sr.times = limit.times;
  sr.eps = eps;
  sr.alpha = cfg.alpha;
  sr.per_eps.resize(eps.size());

  const int threads = std::max(1, cfg.threads);
  if (threads == 1) {
    for (std::size_t i = 0; i < eps.size(); ++i) {
      sr.per_eps[i] = make_eps_report(cfg, eps[i], limit);
    }
  } else {
    // Batches of independent per-eps tasks; results land in eps order,
    // so the schedule cannot change any output.
    std::size_t next = 0;
    while (next < eps.size()) {
      const std::size_t batch = std::min<std::size_t>(threads, eps.size() - next);
      std::vector<std::future<EpsReport>> futures;
      futures.reserve(batch);
      for (std::size_t b = 0; b < batch; ++b) {
        futures.push_back(std::async(std::launch::async, make_eps_report, std::cref(cfg),
                                     eps[next + b], std::cref(limit)));
      }
      for (std::size_t b = 0; b < batch; ++b) sr.per_eps[next + b] = futures[b].get();
      next += batch;
    }
  }

  sr.quantities.reserve(kQuantityCount);
  bool rates_ok = true;
  for (int q = 0; q < kQuantityCount; ++q) {
    QuantitySweep qs;
    qs.tag = kQuantityDefs[q].tag;
    qs.theory = kQuantityDefs[q].theory;
    qs.gated = kQuantityDefs[q].gated;
    for (std::size_t i = 0; i < eps.size(); ++i) {
      const std::vector<double>& v = sr.per_eps[i].series[q].values;
      qs.final_errors.push_back(v.back());
      qs.sup_errors.push_back(*std::max_element(v.begin(), v.end()));
    }

    const std::size_t used = floor_cutoff(qs.final_errors);
    for (std::size_t k = 0; k + 1 < used; ++k) {
      if (qs.final_errors[k + 1] > 1.05 * qs.final_errors[k]) qs.monotone = false;
    }
    if (used >= 2) {
      qs.fit = fit_rate({eps.begin(), eps.begin() + used},
                        {qs.final_errors.begin(), qs.final_errors.begin() + used});
    }
    qs.fit.points_used = static_cast<int>(used);
    if (used < eps.size()) {
      qs.fit.floored = true;
      qs.fit.note = "error floor reached at eps = " + format_double(eps[used]);
    }
    if (used < 2) {
      qs.fit.note += (qs.fit.note.empty() ? "" : "; ");
      qs.fit.note += "fewer than two points above the floor, no fit";
    }

    qs.passed = !qs.gated || (qs.fit.points_used >= 2 &&
                              qs.fit.slope >= qs.theory - 0.15 &&
                              qs.fit.residual_rms <= 0.3);
    rates_ok = rates_ok && qs.passed;
    sr.quantities.push_back(std::move(qs));
  }
  sr.rates_passed = rates_ok;

  for (std::size_t i = 0; i < eps.size(); ++i) {
    sr.layer_metric.push_back(layer_metric_for(sr, i, sr.alpha));
    sr.layer_metric_alt.push_back(layer_metric_for(sr, i, sr.alt_alpha));
  }
  sr.band_ratio = band_ratio_of(sr.layer_metric, eps);
  sr.band_ratio_alt = band_ratio_of(sr.layer_metric_alt, eps);
  sr.layer_passed = sr.band_ratio <= 4.0;

  double h1_lo = std::numeric_limits<double>::infinity(), h1_hi = 0.0;
  double l4_lo = std::numeric_limits<double>::infinity(), l4_hi = 0.0;
  for (const EpsReport& r : sr.per_eps) {
    h1_lo = std::min(h1_lo, r.sup_u_h1);
    h1_hi = std::max(h1_hi, r.sup_u_h1);
    l4_lo = std::min(l4_lo, r.sup_grad_b_l4);
    l4_hi = std::max(l4_hi, r.sup_grad_b_l4);
    sr.theta_linf_max = std::max(sr.theta_linf_max, r.sup_theta_linf);
  }
  require(h1_lo > 0.0 && l4_lo > 0.0, "sweep: degenerate diagnostics, a sup norm is zero");
  sr.u_h1_ratio = h1_hi / h1_lo;
  sr.grad_b_l4_ratio = l4_hi / l4_lo;
  sr.diagnostics_passed = sr.u_h1_ratio <= 2.0 && sr.grad_b_l4_ratio <= 2.0 &&
                          sr.theta_linf_max <= 1.0 + 1e-8;
  return sr;
}

std::string rate_report_json(const SweepResult& sr) {
  nlohmann::ordered_json j;
  j["t_final"] = sr.times.back();
  j["snapshots"] = sr.times.size();
  j["eps"] = sr.eps;

  nlohmann::ordered_json qs = nlohmann::ordered_json::object();
  for (const QuantitySweep& q : sr.quantities) {
    nlohmann::ordered_json e;
    nlohmann::ordered_json points = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < sr.eps.size(); ++i) {
      points.push_back({sr.eps[i], q.sup_errors[i], q.final_errors[i]});
    }
    e["points"] = std::move(points);
    e["slope"] = q.fit.slope;
    e["intercept"] = q.fit.intercept;
    e["residual"] = q.fit.residual_rms;
    e["theory_slope"] = q.theory;
    e["points_used"] = q.fit.points_used;
    e["floored"] = q.fit.floored;
    e["monotone"] = q.monotone;
    e["gated"] = q.gated;
    e["pass"] = q.passed;
    e["note"] = q.fit.note;
    qs[q.tag] = std::move(e);
  }
  j["quantities"] = std::move(qs);

  nlohmann::ordered_json layer;
  layer["alpha"] = sr.alpha;
  layer["metric"] = sr.layer_metric;
  layer["band_ratio"] = sr.band_ratio;
  layer["passed"] = sr.layer_passed;
  layer["alt_alpha"] = sr.alt_alpha;
  layer["alt_metric"] = sr.layer_metric_alt;
  layer["alt_band_ratio"] = sr.band_ratio_alt;
  j["layer"] = std::move(layer);

  nlohmann::ordered_json diags = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < sr.eps.size(); ++i) {
    const EpsReport& r = sr.per_eps[i];
    nlohmann::ordered_json d;
    d["eps"] = r.eps;
    d["sup_u_h1"] = r.sup_u_h1;
    d["sup_grad_b_l4"] = r.sup_grad_b_l4;
    d["sup_theta_linf"] = r.sup_theta_linf;
    d["b_h2_final"] = r.b_h2_final;
    diags.push_back(std::move(d));
  }
  j["diagnostics"] = std::move(diags);

  nlohmann::ordered_json summary;
  summary["u_h1_ratio"] = sr.u_h1_ratio;
  summary["grad_b_l4_ratio"] = sr.grad_b_l4_ratio;
  summary["theta_linf_max"] = sr.theta_linf_max;
  summary["rates_passed"] = sr.rates_passed;
  summary["layer_passed"] = sr.layer_passed;
  summary["diagnostics_passed"] = sr.diagnostics_passed;
  j["summary"] = std::move(summary);

  return j.dump(2) + "\n";
}

void write_sweep_outputs(const SweepResult& sr, const RunConfig& cfg) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.output_dir);
  fs::create_directories(cfg.output_dir + "/rates");

  write_text_file(cfg.output_dir + "/rate_report.json", rate_report_json(sr));
  save_config(cfg, cfg.output_dir + "/config.json");

  for (const QuantitySweep& q : sr.quantities) {
    Series s;
    s.columns = {"eps", "final_error", "sup_error"};
    for (std::size_t i = 0; i < sr.eps.size(); ++i) {
      s.rows.push_back({sr.eps[i], q.final_errors[i], q.sup_errors[i]});
    }
    write_series_csv(cfg.output_dir + "/rates/" + q.tag + ".csv", s);
  }

  for (const EpsReport& r : sr.per_eps) {
    const std::string dir = cfg.output_dir + "/eps_" + format_double(r.eps);
    fs::create_directories(dir);
    Series s;
    s.columns.push_back("time");
    for (const ErrorSeries& es : r.series) s.columns.push_back(es.tag);
    s.columns.push_back("layer_t_uH2sq");
    for (std::size_t k = 0; k < sr.times.size(); ++k) {
      std::vector<double> row;
      row.reserve(s.columns.size());
      row.push_back(sr.times[k]);
      for (const ErrorSeries& es : r.series) row.push_back(es.values[k]);
      row.push_back(r.layer_profile[k]);
      s.rows.push_back(std::move(row));
    }
    write_series_csv(dir + "/series.csv", s);
  }

  std::string gp;
  gp += "set terminal pngcairo size 1000,750\n";
  gp += "set output \"rates.png\"\n";
  gp += "set logscale xy\n";
  gp += "set key outside right\n";
  gp += "set xlabel \"epsilon\"\n";
  gp += "set ylabel \"error at final time\"\n";
  gp += "set datafile separator \",\"\n";
  gp += "plot \\\n";
  bool first = true;
  for (const QuantitySweep& q : sr.quantities) {
    if (!q.gated) continue;
    if (!first) gp += ", \\\n";
    first = false;
    gp += "  \"rates/" + q.tag + ".csv\" skip 1 using 1:2 with linespoints title \"" +
          q.tag + "\"";
    if (q.fit.points_used >= 2) {
      char ref[160];
      std::snprintf(ref, sizeof ref,
                    ", exp(%.17g) * x**%.17g with lines dashtype 2 notitle",
                    q.fit.intercept, q.fit.slope);
      gp += ref;
    }
  }
  gp += "\n";
  write_text_file(cfg.output_dir + "/rates.gp", gp);
}

Series diagnostics_series(const Trajectory& tr) {
  Series s;
  s.columns = {"time",       "u_L2",      "u_H1",        "u_Linf",
               "b_L2",       "b_H2",      "grad_b_L4",   "theta_L2",
               "theta_Linf", "div_u_Linf"};
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    const FlowState& st = tr.states[k];
    s.rows.push_back({tr.times[k], norm(st.u, NormKind::L2), norm(st.u, NormKind::H1),
                      norm(st.u, NormKind::Linf), norm(st.b, NormKind::L2),
                      norm(st.b, NormKind::H2), grad_l4_norm(st.b),
                      norm(st.theta, NormKind::L2), norm(st.theta, NormKind::Linf),
                      norm(divergence(st.u), NormKind::Linf)});
  }
  return s;
}

}  // namespace mcnv
