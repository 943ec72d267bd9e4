#include "rjd/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "rjd/coupling.hpp"
#include "rjd/engine.hpp"
#include "rjd/errors.hpp"
#include "rjd/parallel.hpp"

namespace rjd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kSlack = 1.1;
constexpr std::size_t kChunk = 64;

Verdict at_most(std::string name, double measured, double threshold) {
  return Verdict{std::move(name), measured <= threshold, measured, threshold, "<="};
}

Verdict within(std::string name, double measured, double target, double tol) {
  Verdict v{std::move(name), std::abs(measured - target) <= tol, measured, target, "within"};
  v.relation = "within " + format_number(tol) + " of";
  return v;
}

Json assumptions_json(const AssumptionReport& a) {
  return Json{{"a1_constant_intensity", a.a1_constant_intensity},
              {"a2_stochastic_order", a.a2_stochastic_order},
              {"a4_jump_monotone", a.a4_jump_monotone},
              {"a4_G", a.a4_G ? number_json(*a.a4_G) : Json(nullptr)},
              {"mean_drift_bound", a.mean_drift_bound ? number_json(*a.mean_drift_bound) : Json(nullptr)},
              {"notes", a.notes}};
}

std::string time_label(double t) { return "t=" + format_number(t); }

DecayOptions decay_options(const ExperimentConfig& cfg) {
  DecayOptions opt;
  opt.n_paths = cfg.numerics.paths;
  opt.p = cfg.run.p;
  opt.h = cfg.numerics.dt;
  opt.seed = cfg.numerics.seed;
  opt.jobs = cfg.numerics.jobs;
  return opt;
}

/// Verdicts every decay curve carries: the optimal coupling is no worse than
/// the constructed one, and both estimates respect the bounds up to the
/// declared slack and 3-sigma band.
void decay_verdicts(const std::string& prefix, const DecayCurve& c, Report& r) {
  for (std::size_t i = 0; i < c.times.size(); ++i) {
    const std::string at = prefix + "." + time_label(c.times[i]);
    if (!std::isnan(c.wp_marginal[i])) {
      const double se = std::hypot(c.wp_coupling_stderr[i], c.wp_marginal_stderr[i]);
      r.add(at_most(at + ".coupling_dominates_optimum", c.wp_marginal[i], c.wp_coupling[i] + 3.0 * se));
    }
    const double est = std::isnan(c.wp_marginal[i]) ? c.wp_coupling[i] : c.wp_marginal[i];
    const double est_se = std::isnan(c.wp_marginal[i]) ? c.wp_coupling_stderr[i] : c.wp_marginal_stderr[i];
    if (!std::isnan(c.bound1[i]))
      r.add(at_most(at + ".bound_thm1", est, kSlack * c.bound1[i] + 3.0 * std::hypot(est_se, c.bound1_stderr[i])));
    if (c.bound2 && !std::isnan((*c.bound2)[i]))
      r.add(at_most(at + ".bound_thm2", c.wp_coupling[i],
                    kSlack * (*c.bound2)[i] + 3.0 * std::hypot(c.wp_coupling_stderr[i], (*c.bound2_stderr)[i])));
  }
}

Report run_certificate(const ExperimentConfig& cfg) {
  Report r;
  r.certificate = make_certificate(*cfg.process, cfg.run.p);
  r.details["assumptions"] = assumptions_json(check_assumptions(*cfg.process));
  return r;
}

Report run_simulate(const ExperimentConfig& cfg, TableSink& sink) {
  const auto& spec = *cfg.process;
  const auto& num = cfg.numerics;
  const TimeGrid grid = TimeGrid::make(num.t_max, num.dt);
  const std::size_t stride = cfg.run.stride;
  sink.begin("paths", {"path_id", "t", "x", "ell"});

  for (std::size_t first = 0; first < num.paths; first += kChunk) {
    const std::size_t count = std::min(kChunk, num.paths - first);
    std::vector<PathSample> chunk(count);
    parallel_for(count, num.jobs, [&](std::size_t k) {
      chunk[k] = simulate_path(spec, cfg.run.x0, num.t_max, num.dt, StreamKey{num.seed, family::primary, first + k});
    });
    for (std::size_t k = 0; k < count; ++k) {
      const PathSample& s = chunk[k];
      for (std::size_t i = 0; i <= grid.steps; i += stride)
        sink.row(std::initializer_list<double>{static_cast<double>(first + k), grid.time(i), s.values[i],
                                               s.local_time[i]});
    }
  }
  return Report{};
}

Report run_couple(const ExperimentConfig& cfg, TableSink& sink) {
  const auto& spec = *cfg.process;
  const auto& num = cfg.numerics;
  const std::size_t stride = cfg.run.stride;
  sink.begin("coupled_paths", {"path_id", "t", "x_lower", "x_upper", "coalesced"});

  std::size_t order_violations = 0;
  std::size_t permanence_violations = 0;
  for (std::size_t first = 0; first < num.paths; first += kChunk) {
    const std::size_t count = std::min(kChunk, num.paths - first);
    std::vector<CoupledPaths> chunk(count);
    parallel_for(count, num.jobs, [&](std::size_t k) {
      chunk[k] = simulate_coupled(spec, cfg.run.x1, cfg.run.x2, num.t_max, num.dt,
                                  StreamKey{num.seed, family::primary, first + k});
    });
    for (std::size_t k = 0; k < count; ++k) {
      const CoupledPaths& cp = chunk[k];
      const std::size_t from = cp.coalesced_from.value_or(cp.lower.size());
      for (std::size_t i = 0; i < cp.lower.size(); ++i) {
        if (cp.lower[i] > cp.upper[i]) ++order_violations;
        if (i >= from && cp.lower[i] != cp.upper[i]) ++permanence_violations;
        if (i % stride == 0)
          sink.row(std::initializer_list<double>{static_cast<double>(first + k), cp.grid.time(i), cp.lower[i],
                                                 cp.upper[i], i >= from ? 1.0 : 0.0});
      }
    }
  }
  Report r;
  r.add(at_most("ordering_violations", static_cast<double>(order_violations), 0.0));
  r.add(at_most("coalescence_permanence_violations", static_cast<double>(permanence_violations), 0.0));
  return r;
}

Report run_decay(const ExperimentConfig& cfg, TableSink& sink) {
  Report r;
  r.certificate = make_certificate(*cfg.process, cfg.run.p);
  const DecayCurve c = decay_curve(*cfg.process, *r.certificate, cfg.run.x1, cfg.run.x2, cfg.run.times,
                                   decay_options(cfg));
  emit_decay_table("decay", c, sink);
  decay_verdicts("decay", c, r);
  r.details["notes"] = c.notes;
  return r;
}

Report run_path_decay(const ExperimentConfig& cfg, TableSink& sink) {
  Report r;
  r.certificate = make_certificate(*cfg.process, cfg.run.p);
  std::vector<std::pair<double, double>> windows;
  for (double t : cfg.run.times) windows.emplace_back(t, t + cfg.run.window);
  const DecayCurve c =
      path_decay_curve(*cfg.process, *r.certificate, cfg.run.x1, cfg.run.x2, windows, decay_options(cfg));
  emit_decay_table("path_decay", c, sink);
  decay_verdicts("path_decay", c, r);
  r.details["notes"] = c.notes;
  return r;
}

Report run_stationary(const ExperimentConfig& cfg, TableSink& sink) {
  const auto& num = cfg.numerics;
  Report r;
  r.certificate = make_certificate(*cfg.process, cfg.run.p);
  const RateCertificate& cert = *r.certificate;
  if (!cert.a3_holds) throw NumericError("no valid certificate");

  // The automatic burn-in is rounded up to the grid.
  double burn_in = num.burn_in.value_or(default_burn_in(cert));
  if (!num.burn_in) burn_in = std::ceil(burn_in / num.dt - 1e-9) * num.dt;
  const EnsembleSummary pi =
      estimate_stationary(*cfg.process, cert, burn_in, num.paths, 0.0, num.dt, num.seed, num.jobs);
  const DecayCurve c = stationary_gap(*cfg.process, cert, cfg.run.x, cfg.run.times, pi, decay_options(cfg));
  emit_decay_table("stationary", c, sink);
  decay_verdicts("stationary", c, r);
  r.details["burn_in"] = burn_in;
  r.details["pi_V"] = pi.mean_V;
  r.details["pi_V_stderr"] = pi.stderr_V;
  r.details["warnings"] = pi.warnings;
  r.details["notes"] = c.notes;
  return r;
}

struct Lemma1Summary {
  double max_violation = -std::numeric_limits<double>::infinity();
  std::size_t order_violations = 0;
  std::size_t permanence_violations = 0;
  std::size_t gap_jumps = 0;
  std::size_t gap_jump_violations = 0;
};

Lemma1Summary lemma1_sweep(const ProcessSpec& spec, double G, double x1, double x2, double horizon, double h,
                           std::size_t n, std::uint64_t seed, unsigned jobs) {
  std::vector<Lemma1Summary> per(n);
  parallel_for(n, jobs, [&](std::size_t i) {
    const CoupledPaths cp = simulate_coupled(spec, x1, x2, horizon, h, StreamKey{seed, family::primary, i});
    Lemma1Summary& s = per[i];
    s.max_violation = check_lemma1(cp, G);
    const std::size_t from = cp.coalesced_from.value_or(cp.lower.size());
    for (std::size_t k = 0; k < cp.lower.size(); ++k) {
      if (cp.lower[k] > cp.upper[k]) ++s.order_violations;
      if (k >= from && cp.lower[k] != cp.upper[k]) ++s.permanence_violations;
    }
  });
  Lemma1Summary total;
  for (const auto& s : per) {
    total.max_violation = std::max(total.max_violation, s.max_violation);
    total.order_violations += s.order_violations;
    total.permanence_violations += s.permanence_violations;
  }
  return total;
}

void verify_into(Report& r, const std::string& prefix, const ProcessSpec& spec, const RateCertificate& cert,
                 double x1, double x2, double horizon, double h, std::size_t n, std::uint64_t seed, unsigned jobs) {
  if (cert.G) {
    const Lemma1Summary s = lemma1_sweep(spec, *cert.G, x1, x2, horizon, h, n, seed, jobs);
    r.add(at_most(prefix + ".lemma1_max_excess", s.max_violation, 5.0 * h));
    r.add(at_most(prefix + ".ordering_violations", static_cast<double>(s.order_violations), 0.0));
    r.add(at_most(prefix + ".coalescence_permanence_violations", static_cast<double>(s.permanence_violations), 0.0));
  }
  const ProbeResult probe = supermartingale_probe(spec, cert, x2, horizon, n, h, seed, jobs);
  r.add(at_most(prefix + ".supermartingale", probe.estimate, probe.bound + 3.0 * probe.std_error));
  r.details[prefix + ".supermartingale"] = Json{{"estimate", probe.estimate},
                                                {"std_error", probe.std_error},
                                                {"bound", probe.bound},
                                                {"n_paths", probe.n_paths},
                                                {"hit_count", probe.hit_count}};
}

Report run_verify(const ExperimentConfig& cfg) {
  const auto& num = cfg.numerics;
  Report r;
  r.certificate = make_certificate(*cfg.process, cfg.run.p);
  verify_into(r, "verify", *cfg.process, *r.certificate, cfg.run.x1, cfg.run.x2, num.t_max, num.dt, num.paths,
              num.seed, num.jobs);
  return r;
}

}  // namespace

double log_slope(const std::vector<double>& times, const std::vector<double>& values) {
  if (times.size() != values.size() || times.size() < 2)
    throw std::invalid_argument("log_slope needs at least two matching points");
  double st = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(values[i] > 0.0)) return -std::numeric_limits<double>::infinity();
    st += times[i];
    sy += std::log(values[i]);
  }
  const double n = static_cast<double>(times.size());
  const double mt = st / n;
  const double my = sy / n;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    num += (times[i] - mt) * (std::log(values[i]) - my);
    den += (times[i] - mt) * (times[i] - mt);
  }
  return num / den;
}

void emit_decay_table(const std::string& name, const DecayCurve& c, TableSink& sink) {
  std::vector<std::string> cols{"t",       "wp_coupling",        "wp_coupling_stderr", "wp_marginal",
                                "bound_thm1", "bound_thm2",      "n_paths",            "wp_marginal_stderr",
                                "bound_thm1_stderr", "bound_thm2_stderr"};
  const bool windows = !c.window_ends.empty();
  if (windows) cols.emplace_back("t_end");
  sink.begin(name, cols);
  for (std::size_t i = 0; i < c.times.size(); ++i) {
    std::vector<double> row{c.times[i],
                            c.wp_coupling[i],
                            c.wp_coupling_stderr[i],
                            c.wp_marginal[i],
                            c.bound1[i],
                            c.bound2 ? (*c.bound2)[i] : kNaN,
                            static_cast<double>(c.n_paths),
                            c.wp_marginal_stderr[i],
                            c.bound1_stderr[i],
                            c.bound2_stderr ? (*c.bound2_stderr)[i] : kNaN};
    if (windows) row.push_back(c.window_ends[i]);
    sink.row(row);
  }
}

Report run_experiment(const ExperimentConfig& cfg, TableSink& tables) {
  const auto start = std::chrono::steady_clock::now();
  Report r;
  switch (cfg.run.kind) {
    case RunKind::certificate: r = run_certificate(cfg); break;
    case RunKind::simulate: r = run_simulate(cfg, tables); break;
    case RunKind::couple: r = run_couple(cfg, tables); break;
    case RunKind::decay: r = run_decay(cfg, tables); break;
    case RunKind::path_decay: r = run_path_decay(cfg, tables); break;
    case RunKind::stationary: r = run_stationary(cfg, tables); break;
    case RunKind::verify: r = run_verify(cfg); break;
    case RunKind::examples:
      r = run_examples(ExamplesOptions{cfg.numerics.seed, cfg.numerics.jobs, cfg.numerics.paths, cfg.numerics.dt},
                       tables);
      break;
  }
  r.config = cfg.echo;
  r.defaults_applied = cfg.defaults_applied;
  r.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

Report run_examples(const ExamplesOptions& opt, TableSink& tables) {
  Report r;
  const double h = opt.dt;

  // (i) Lévy-driven certificate.
  const ProcessSpec levy = presets::levy_exp2();
  const RateCertificate levy_cert = make_certificate(levy, 1.0);
  r.add(within("levy.lambda", levy_cert.lambda, 0.304, 0.005));
  r.add(within("levy.k", levy_cert.k, 0.0785, 0.001));
  r.details["levy_certificate"] = certificate_json(levy_cert);

  // (ii) OU closed form for (a, m, sigma) = (1, 1, 1), p = 1.
  const ProcessSpec ou = presets::reflected_ou(1.0, 1.0, 1.0);
  const RateCertificate ou_cert = make_certificate(ou, 1.0);
  r.add(within("ou.lambda", ou_cert.lambda, 1.0, 1e-4));
  r.add(within("ou.k", ou_cert.k, 0.5, 0.5e-4));
  const double K = ou_cert.K.value_or(kNaN);
  r.add(within("ou.K", K, 1.5, 1.5e-4));
  r.add(Verdict{"ou.K_assembled", K == ou_cert.k / ou_cert.p - ou_cert.G.value_or(kNaN), K,
                ou_cert.k / ou_cert.p - ou_cert.G.value_or(kNaN), "=="});
  r.add(Verdict{"ou.pK_exceeds_k", ou_cert.p * K > ou_cert.k, ou_cert.p * K, ou_cert.k, ">"});
  r.details["ou_certificate"] = certificate_json(ou_cert);

  DecayOptions dopt;
  dopt.n_paths = opt.paths;
  dopt.p = 1.0;
  dopt.h = h;
  dopt.seed = opt.seed;
  dopt.jobs = opt.jobs;

  // (iii) Drifted RBM: marginal distance against the Lyapunov bound.
  const ProcessSpec rbm = presets::drifted_rbm();
  const RateCertificate rbm_cert = make_certificate(rbm, 1.0);
  const DecayCurve rbm_curve = decay_curve(rbm, rbm_cert, 0.0, 1.0, {2.0, 4.0, 6.0, 8.0}, dopt);
  for (std::size_t i = 0; i < rbm_curve.times.size(); ++i)
    r.add(at_most("rbm." + time_label(rbm_curve.times[i]) + ".wp_marginal_vs_bound_thm1", rbm_curve.wp_marginal[i],
                  kSlack * rbm_curve.bound1[i]));
  emit_decay_table("rbm_decay", rbm_curve, tables);

  // (iv) OU: coupling distance against the contraction bound, and its rate.
  const std::vector<double> ou_times{0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0};
  const DecayCurve ou_curve = decay_curve(ou, ou_cert, 0.0, 1.0, ou_times, dopt);
  for (std::size_t i = 0; i < ou_times.size(); ++i) {
    const double t = ou_times[i];
    if (t == 0.5 || t == 1.0 || t == 2.0)
      r.add(at_most("ou." + time_label(t) + ".wp_coupling_vs_bound_thm2", ou_curve.wp_coupling[i],
                    kSlack * (*ou_curve.bound2)[i]));
  }
  r.add(at_most("ou.wp_coupling_log_slope", log_slope(ou_times, ou_curve.wp_coupling), -1.0));
  emit_decay_table("ou_decay", ou_curve, tables);

  // (v) Contraction estimate and supermartingale probes.
  verify_into(r, "ou", ou, ou_cert, 0.0, 1.0, 10.0, h, opt.paths, opt.seed, opt.jobs);
  const ProbeResult rbm_probe = supermartingale_probe(rbm, rbm_cert, 1.0, 5.0, opt.paths, h, opt.seed, opt.jobs);
  r.add(at_most("rbm.supermartingale", rbm_probe.estimate, rbm_probe.bound + 3.0 * rbm_probe.std_error));
  const ProbeResult levy_probe =
      supermartingale_probe(levy, levy_cert, 1.0, 5.0, opt.paths, h, opt.seed, opt.jobs);
  r.add(at_most("levy.supermartingale", levy_probe.estimate, levy_probe.bound + 3.0 * levy_probe.std_error));
  for (const auto& [name, probe] : {std::pair{"rbm", rbm_probe}, std::pair{"levy", levy_probe}})
    r.details[std::string(name) + ".supermartingale"] = Json{
        {"estimate", probe.estimate}, {"std_error", probe.std_error}, {"bound", probe.bound}, {"n_paths", probe.n_paths}};
  return r;
}

}  // namespace rjd
