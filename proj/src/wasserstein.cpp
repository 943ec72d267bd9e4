#include "rjd/wasserstein.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>

#include "rjd/coupling.hpp"
#include "rjd/errors.hpp"
#include "rjd/parallel.hpp"
#include "rjd/rng.hpp"

namespace rjd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

inline double abs_pow(double d, double p) {
  d = std::abs(d);
  if (p == 1.0) return d;
  if (p == 2.0) return d * d;
  return std::pow(d, p);
}

TimeGrid grid_for(double horizon, double h) { return TimeGrid::make(std::max(horizon, h), h); }

std::vector<std::size_t> observation_indices(const TimeGrid& grid, const std::vector<double>& times) {
  std::vector<std::size_t> idx;
  idx.reserve(times.size());
  for (double t : times) idx.push_back(grid.index_of(t));
  return idx;
}

void check_times(const std::vector<double>& times) {
  if (times.empty()) throw ConfigError("at least one observation time is required");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0)) throw ConfigError("observation times must be nonnegative");
    if (i > 0 && !(times[i] > times[i - 1])) throw ConfigError("observation times must be increasing");
  }
}

/// Coupled ensemble observed at grid indices: lower[j][i] and the
/// integrator's gap[j][i].
struct CoupledObservations {
  std::vector<std::vector<double>> lower;
  std::vector<std::vector<double>> gap;
};

CoupledObservations coupled_ensemble(const ProcessSpec& spec, const std::function<std::pair<double, double>(std::size_t)>& starts,
                                     std::size_t n, const TimeGrid& grid, const std::vector<std::size_t>& observe,
                                     std::uint64_t seed, std::uint64_t fam, unsigned jobs) {
  const std::vector<std::vector<double>> blank(observe.size(), std::vector<double>(n));
  CoupledObservations out{blank, blank};
  const std::size_t last = observe.empty() ? 0 : observe.back();
  parallel_for(n, jobs, [&](std::size_t i) {
    const auto [x1, x2] = starts(i);
    CoupledIntegrator integrator(spec, grid, StreamKey{seed, fam, i}, x1, x2);
    std::size_t j = 0;
    auto record = [&](std::size_t step) {
      while (j < observe.size() && observe[j] == step) {
        out.lower[j][i] = step == 0 ? x1 : integrator.lower();
        out.gap[j][i] = step == 0 ? x2 - x1 : integrator.gap();
        ++j;
      }
    };
    record(0);
    for (std::size_t step = 1; step <= last; ++step) {
      integrator.advance();
      record(step);
    }
  });
  return out;
}

/// (mean D^p)^{1/p} with a delta-method standard error.
std::pair<double, double> coupling_estimate(const std::vector<double>& gaps, double p) {
  std::vector<double> d(gaps.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = abs_pow(gaps[i], p);
  const MeanEstimate est = mean_and_stderr(d);
  if (!(est.mean > 0.0)) return {0.0, 0.0};
  const double wp = std::pow(est.mean, 1.0 / p);
  return {wp, est.std_error * wp / (p * est.mean)};
}

double bound1_or_nan(const RateCertificate& cert, double x1, double x2, double t) {
  return cert.a3_holds ? bound_thm1(cert, x1, x2, t) : kNaN;
}

void fill_bounds(DecayCurve& c, const RateCertificate& cert, double x1, double x2, bool contraction_allowed) {
  c.bound1.clear();
  for (double t : c.times) c.bound1.push_back(bound1_or_nan(cert, x1, x2, t));
  c.bound1_stderr.assign(c.times.size(), 0.0);
  if (!cert.a3_holds) c.notes.emplace_back("no valid certificate: bound_thm1 column is NaN");
  if (contraction_allowed && cert.K && cert.thm2_applicable) {
    c.bound2.emplace();
    for (double t : c.times) c.bound2->push_back(bound_thm2(cert, x1, x2, t));
    c.bound2_stderr.emplace(c.times.size(), 0.0);
  } else {
    c.notes.emplace_back("contraction bound unavailable for this experiment: bound_thm2 column is NaN");
  }
}

}  // namespace

// ---------------------------------------------------------------------------

double wp_exact(const EmpiricalDistribution& a, const EmpiricalDistribution& b, double p) {
  if (a.empty() || b.empty()) throw std::invalid_argument("wp_exact requires nonempty samples");
  if (!(p >= 1.0)) throw std::invalid_argument("Wasserstein order p must be >= 1");
  const auto pa = a.points();
  const auto pb = b.points();

  if (a.uniform() && b.uniform() && a.size() == b.size()) {
    double acc = 0.0;
    for (std::size_t i = 0; i < pa.size(); ++i) acc += abs_pow(pa[i] - pb[i], p);
    return std::pow(acc / static_cast<double>(pa.size()), 1.0 / p);
  }

  // Merge the two cumulative-weight partitions of [0, 1].
  auto cumulative = [](std::span<const double> w) {
    std::vector<double> c(w.size());
    std::partial_sum(w.begin(), w.end(), c.begin());
    c.back() = 1.0;
    return c;
  };
  const auto ca = cumulative(a.weights());
  const auto cb = cumulative(b.weights());
  std::size_t i = 0;
  std::size_t j = 0;
  double prev = 0.0;
  double acc = 0.0;
  while (i < pa.size() && j < pb.size()) {
    const double next = std::min(ca[i], cb[j]);
    acc += (next - prev) * abs_pow(pa[i] - pb[j], p);
    prev = next;
    if (ca[i] <= next) ++i;
    if (cb[j] <= next) ++j;
  }
  return std::pow(acc, 1.0 / p);
}

double wp_bruteforce(const std::vector<double>& a, const std::vector<double>& b, double p) {
  if (a.size() != b.size()) throw std::invalid_argument("wp_bruteforce requires equal sample sizes");
  if (a.empty()) throw std::invalid_argument("wp_bruteforce requires nonempty samples");
  if (a.size() > 8) throw std::invalid_argument("oracle size exceeded");
  std::vector<std::size_t> perm(a.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best = std::numeric_limits<double>::infinity();
  do {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += abs_pow(a[i] - b[perm[i]], p);
    best = std::min(best, acc);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::pow(best / static_cast<double>(a.size()), 1.0 / p);
}

double path_sup_distance(const TimeGrid& grid, const std::vector<double>& P, const std::vector<double>& Q, double t,
                         double T) {
  if (P.size() != Q.size() || P.size() != grid.steps + 1) throw std::invalid_argument("mismatched grids");
  if (!(t <= T)) throw std::invalid_argument("window must satisfy t <= T");
  const std::size_t lo = grid.index_of(t);
  const std::size_t hi = grid.index_of(T);
  double sup = 0.0;
  for (std::size_t i = lo; i <= hi; ++i) sup = std::max(sup, std::abs(P[i] - Q[i]));
  return sup;
}

double path_sup_distance(const PathSample& P, const PathSample& Q, double t, double T) {
  if (P.grid.h != Q.grid.h || P.grid.steps != Q.grid.steps) throw std::invalid_argument("mismatched grids");
  return path_sup_distance(P.grid, P.values, Q.values, t, T);
}

double wp_resolution(const EmpiricalDistribution& a, const EmpiricalDistribution& b, double p, int replicates,
                     std::uint64_t seed) {
  if (replicates <= 0) return 0.0;
  std::vector<double> pooled(a.points().begin(), a.points().end());
  pooled.insert(pooled.end(), b.points().begin(), b.points().end());
  RandomStream rng(StreamKey{seed, family::resolution, 0}, Substream::resampling);
  auto resample = [&](std::size_t n) {
    std::vector<double> s(n);
    for (auto& v : s) v = pooled[static_cast<std::size_t>(rng.uniform() * static_cast<double>(pooled.size()))];
    return EmpiricalDistribution(std::move(s));
  };
  double sum_sq = 0.0;
  for (int r = 0; r < replicates; ++r) {
    const double w = wp_exact(resample(a.size()), resample(b.size()), p);
    sum_sq += w * w;
  }
  return std::sqrt(sum_sq / replicates);
}

// ---------------------------------------------------------------------------

DecayCurve decay_curve(const ProcessSpec& spec, const RateCertificate& cert, double x1, double x2,
                       const std::vector<double>& times, const DecayOptions& opt) {
  if (!(0.0 <= x1 && x1 <= x2)) throw ConfigError("decay starts must satisfy 0 <= x1 <= x2");
  if (opt.n_paths == 0) throw ConfigError("paths must be at least 1");
  if (!(opt.p >= 1.0)) throw ConfigError("Wasserstein order p must be >= 1");
  check_times(times);
  validate(spec);
  check_coupling_step(spec, opt.h);
  const TimeGrid grid = grid_for(times.back(), opt.h);
  const auto observe = observation_indices(grid, times);
  const std::size_t n = opt.n_paths;

  // The lower copy doubles as the x1 marginal ensemble; the x2 marginal is an
  // independent family so the two ensembles share no randomness.
  const auto coupled = coupled_ensemble(
      spec, [&](std::size_t) { return std::pair{x1, x2}; }, n, grid, observe, opt.seed, family::primary, opt.jobs);
  const auto upper_marginal = simulate_ensemble(spec, {x2}, n, grid, observe, opt.seed, family::independent, opt.jobs);

  DecayCurve c;
  c.times = times;
  c.n_paths = n;
  c.p = opt.p;
  for (std::size_t j = 0; j < times.size(); ++j) {
    const auto [wp, se] = coupling_estimate(coupled.gap[j], opt.p);
    c.wp_coupling.push_back(wp);
    c.wp_coupling_stderr.push_back(se);
    const EmpiricalDistribution lo(coupled.lower[j]);
    const EmpiricalDistribution hi(upper_marginal[j]);
    c.wp_marginal.push_back(wp_exact(lo, hi, opt.p));
    c.wp_marginal_stderr.push_back(wp_resolution(lo, hi, opt.p, opt.bootstrap_replicates, opt.seed + j));
  }
  fill_bounds(c, cert, x1, x2, true);
  return c;
}

DecayCurve path_decay_curve(const ProcessSpec& spec, const RateCertificate& cert, double x1, double x2,
                            const std::vector<std::pair<double, double>>& windows, const DecayOptions& opt) {
  if (!(0.0 <= x1 && x1 <= x2)) throw ConfigError("decay starts must satisfy 0 <= x1 <= x2");
  if (opt.n_paths == 0) throw ConfigError("paths must be at least 1");
  if (!(opt.p >= 1.0)) throw ConfigError("Wasserstein order p must be >= 1");
  if (windows.empty()) throw ConfigError("at least one window is required");
  validate(spec);
  check_coupling_step(spec, opt.h);

  double horizon = 0.0;
  for (const auto& [t, T] : windows) {
    if (!(0.0 <= t && t <= T)) throw ConfigError("windows must satisfy 0 <= t <= T");
    horizon = std::max(horizon, T);
  }
  const TimeGrid grid = grid_for(horizon, opt.h);
  std::vector<std::pair<std::size_t, std::size_t>> idx;
  for (const auto& [t, T] : windows) idx.emplace_back(grid.index_of(t), grid.index_of(T));
  const std::size_t n = opt.n_paths;
  const std::size_t last = grid.index_of(horizon);

  // sups[w][i]: sup over window w of the gap on path i.
  std::vector<std::vector<double>> sups(windows.size(), std::vector<double>(n, 0.0));
  parallel_for(n, opt.jobs, [&](std::size_t i) {
    CoupledIntegrator integrator(spec, grid, StreamKey{opt.seed, family::primary, i}, x1, x2);
    auto record = [&](std::size_t step, double gap) {
      for (std::size_t w = 0; w < idx.size(); ++w)
        if (idx[w].first <= step && step <= idx[w].second) sups[w][i] = std::max(sups[w][i], gap);
    };
    record(0, x2 - x1);
    for (std::size_t step = 1; step <= last; ++step) {
      integrator.advance();
      record(step, integrator.gap());
    }
  });

  DecayCurve c;
  c.n_paths = n;
  c.p = opt.p;
  for (std::size_t w = 0; w < windows.size(); ++w) {
    c.times.push_back(windows[w].first);
    c.window_ends.push_back(windows[w].second);
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = abs_pow(sups[w][i], opt.p);
    const MeanEstimate est = mean_and_stderr(d);
    const double wp = est.mean > 0.0 ? std::pow(est.mean, 1.0 / opt.p) : 0.0;
    c.wp_coupling.push_back(wp);
    c.wp_coupling_stderr.push_back(est.mean > 0.0 ? est.std_error * wp / (opt.p * est.mean) : 0.0);
    c.wp_marginal.push_back(kNaN);
    c.wp_marginal_stderr.push_back(kNaN);
  }
  c.notes.emplace_back("path-space marginal distance not computed: coupling estimate only");
  const bool g_nonpositive = cert.G && *cert.G <= 0.0;
  if (!g_nonpositive) c.notes.emplace_back("G > 0: the path-space contraction bound does not apply");
  fill_bounds(c, cert, x1, x2, g_nonpositive);
  return c;
}

DecayCurve stationary_gap(const ProcessSpec& spec, const RateCertificate& cert, const StartLaw& start,
                          const std::vector<double>& times, const EnsembleSummary& stationary,
                          const DecayOptions& opt) {
  if (stationary.endpoint_sample.empty()) throw ConfigError("stationary sample is empty");
  if (opt.n_paths == 0) throw ConfigError("paths must be at least 1");
  if (!(opt.p >= 1.0)) throw ConfigError("Wasserstein order p must be >= 1");
  check_times(times);
  validate(spec);
  check_coupling_step(spec, opt.h);
  const TimeGrid grid = grid_for(times.back(), opt.h);
  const auto observe = observation_indices(grid, times);
  const std::size_t n = opt.n_paths;

  // Initial states of the paths started from `start`.
  std::vector<double> starts(n);
  double rho_V = 0.0;
  if (const double* x = std::get_if<double>(&start)) {
    if (!(*x >= 0.0)) throw ConfigError("x must be nonnegative");
    std::fill(starts.begin(), starts.end(), *x);
    rho_V = cert.V(*x);
  } else {
    const auto& rho = std::get<EmpiricalDistribution>(start);
    if (rho.empty()) throw ConfigError("initial sample is empty");
    std::vector<double> cum(rho.size());
    std::partial_sum(rho.weights().begin(), rho.weights().end(), cum.begin());
    for (std::size_t i = 0; i < n; ++i) {
      RandomStream u(StreamKey{opt.seed, family::bootstrap, i}, Substream::resampling);
      const auto it = std::upper_bound(cum.begin(), cum.end(), u.uniform() * cum.back());
      starts[i] = rho.points()[std::min<std::size_t>(it - cum.begin(), rho.size() - 1)];
    }
    for (std::size_t i = 0; i < rho.size(); ++i) rho_V += rho.weights()[i] * cert.V(rho.points()[i]);
  }

  const auto pi_points = stationary.endpoint_sample.points();
  const auto marginal = simulate_ensemble(spec, starts, n, grid, observe, opt.seed, family::primary, opt.jobs);
  const auto coupled = coupled_ensemble(
      spec,
      [&](std::size_t i) {
        const double s = pi_points[i % pi_points.size()];
        return std::pair{std::min(starts[i], s), std::max(starts[i], s)};
      },
      n, grid, observe, opt.seed, family::independent, opt.jobs);

  DecayCurve c;
  c.times = times;
  c.n_paths = n;
  c.p = opt.p;
  for (std::size_t j = 0; j < times.size(); ++j) {
    const auto [wp, se] = coupling_estimate(coupled.gap[j], opt.p);
    c.wp_coupling.push_back(wp);
    c.wp_coupling_stderr.push_back(se);
    const EmpiricalDistribution law(marginal[j]);
    c.wp_marginal.push_back(wp_exact(law, stationary.endpoint_sample, opt.p));
    c.wp_marginal_stderr.push_back(
        wp_resolution(law, stationary.endpoint_sample, opt.p, opt.bootstrap_replicates, opt.seed + j));
  }

  // Bounds use the Monte Carlo (pi, V); its standard error is carried through
  // the (.)^{1/p} map by the delta method.
  const double pi_V = std::max(1.0, stationary.mean_V);
  const double total_V = pi_V + rho_V;
  for (double t : times) {
    if (cert.a3_holds) {
      const double b = bound_thm1_measures(cert, pi_V, rho_V, t);
      c.bound1.push_back(b);
      c.bound1_stderr.push_back(b * stationary.stderr_V / (cert.p * total_V));
    } else {
      c.bound1.push_back(kNaN);
      c.bound1_stderr.push_back(kNaN);
    }
  }
  const double* x = std::get_if<double>(&start);
  if (x && cert.K && cert.thm2_applicable) {
    c.bound2.emplace();
    c.bound2_stderr.emplace();
    for (double t : times) {
      const double b = bound_thm2_stationary(cert, pi_V, *x, t);
      c.bound2->push_back(b);
      c.bound2_stderr->push_back(b * stationary.stderr_V / (cert.p * total_V));
    }
  } else {
    c.notes.emplace_back("contraction bound to pi is stated for point starts only: bound_thm2 column is NaN");
  }
  return c;
}

}  // namespace rjd
