#include "rjd/engine.hpp"

#include <algorithm>
#include <cmath>

#include "rjd/errors.hpp"
#include "rjd/parallel.hpp"

namespace rjd {

TimeGrid TimeGrid::make(double horizon, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("dt must be positive");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ConfigError("t_max must be positive");
  if (h > horizon * (1.0 + 1e-12)) throw ConfigError("dt must not exceed t_max");
  const double ratio = horizon / h;
  const double steps = std::round(ratio);
  if (std::abs(ratio - steps) > 1e-9 * std::max(1.0, ratio))
    throw ConfigError("t_max must be a whole number of dt steps");
  return TimeGrid{h, static_cast<std::size_t>(steps)};
}

std::size_t TimeGrid::index_of(double t) const {
  if (t < 0.0) throw ConfigError("observation time must be nonnegative");
  const double ratio = t / h;
  const double i = std::round(ratio);
  if (std::abs(ratio - i) > 1e-9 * std::max(1.0, ratio))
    throw ConfigError("observation time is not on the dt grid");
  if (i > static_cast<double>(steps)) throw ConfigError("observation time beyond the simulated horizon");
  return static_cast<std::size_t>(i);
}

// ---------------------------------------------------------------------------

StepResult reflected_step(double x, const ProcessSpec& spec, double h, double z) {
  const double y = x + drift_value(spec.drift, x) * h + spec.sigma * std::sqrt(h) * z;
  return y >= 0.0 ? StepResult{y, 0.0} : StepResult{0.0, -y};
}

std::vector<double> sample_jump_times(double intensity, double horizon, RandomStream& rng) {
  if (intensity < 0.0) throw std::invalid_argument("jump intensity must be nonnegative");
  std::vector<double> times;
  if (intensity == 0.0) return times;
  double t = 0.0;
  for (;;) {
    t += rng.exponential(intensity);
    if (t > horizon) break;
    times.push_back(t);
  }
  return times;
}

double apply_jump(double x, const JumpFamily& jumps, double u) {
  if (const auto* levy = std::get_if<LevyUpward>(&jumps)) return x + displacement_quantile(levy->displacement, u);
  throw std::invalid_argument("apply_jump requires an upward Levy jump family");
}

// ---------------------------------------------------------------------------

PathIntegrator::PathIntegrator(const ProcessSpec& spec, const TimeGrid& grid, const StreamKey& key)
    : spec_(&spec), grid_(grid), sigma_sqrt_h_(spec.sigma * std::sqrt(grid.h)), streams_(key) {
  jump_times_ = sample_jump_times(jump_intensity(spec.jumps), grid.horizon(), streams_.clock);
}

StepResult PathIntegrator::advance(double x) {
  const double z = streams_.diffusion.normal();
  const double y = x + drift_value(spec_->drift, x) * grid_.h + sigma_sqrt_h_ * z;
  StepResult r = y >= 0.0 ? StepResult{y, 0.0} : StepResult{0.0, -y};
  ++index_;
  const double t = grid_.time(index_);
  while (next_jump_ < jump_times_.size() && jump_times_[next_jump_] <= t) {
    r.x = apply_jump(r.x, spec_->jumps, streams_.marks.uniform());
    ++next_jump_;
  }
  return r;
}

PathSample simulate_path(const ProcessSpec& spec, double x0, double horizon, double h, const StreamKey& key) {
  if (!(x0 >= 0.0)) throw ConfigError("x0 must be nonnegative");
  validate(spec);
  const TimeGrid grid = TimeGrid::make(horizon, h);

  PathSample out;
  out.grid = grid;
  out.stream = key;
  out.values.reserve(grid.steps + 1);
  out.local_time.reserve(grid.steps + 1);
  out.values.push_back(x0);
  out.local_time.push_back(0.0);

  PathIntegrator integrator(spec, grid, key);
  double x = x0;
  double ell = 0.0;
  for (std::size_t i = 0; i < grid.steps; ++i) {
    const StepResult r = integrator.advance(x);
    x = r.x;
    ell += r.dl;
    out.values.push_back(x);
    out.local_time.push_back(ell);
  }
  out.jump_times = integrator.jump_times();
  return out;
}

std::vector<std::vector<double>> simulate_ensemble(const ProcessSpec& spec, const std::vector<double>& starts,
                                                   std::size_t n, const TimeGrid& grid,
                                                   const std::vector<std::size_t>& observe, std::uint64_t seed,
                                                   std::uint64_t family, unsigned jobs) {
  if (starts.empty() || (starts.size() != 1 && starts.size() != n))
    throw std::invalid_argument("starts must hold one value or one per path");
  if (!std::is_sorted(observe.begin(), observe.end())) throw std::invalid_argument("observation indices must be sorted");
  if (!observe.empty() && observe.back() > grid.steps) throw std::invalid_argument("observation beyond the grid");
  validate(spec);

  std::vector<std::vector<double>> out(observe.size(), std::vector<double>(n));
  const std::size_t last = observe.empty() ? 0 : observe.back();

  parallel_for(n, jobs, [&](std::size_t i) {
    PathIntegrator integrator(spec, grid, StreamKey{seed, family, i});
    double x = starts.size() == 1 ? starts[0] : starts[i];
    std::size_t j = 0;
    while (j < observe.size() && observe[j] == 0) out[j++][i] = x;
    for (std::size_t step = 1; step <= last; ++step) {
      x = integrator.advance(x).x;
      while (j < observe.size() && observe[j] == step) out[j++][i] = x;
    }
  });
  return out;
}

// ---------------------------------------------------------------------------

MeanEstimate mean_and_stderr(const std::vector<double>& values) {
  MeanEstimate est;
  if (values.empty()) return est;
  // Welford
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t count = 0;
  for (double v : values) {
    ++count;
    const double delta = v - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (v - mean);
  }
  est.mean = mean;
  if (count > 1) est.std_error = std::sqrt(m2 / static_cast<double>(count - 1) / static_cast<double>(count));
  return est;
}

double default_burn_in(const RateCertificate& cert) {
  if (!(cert.k > 0.0)) throw NumericError("no valid certificate");
  return 20.0 / cert.k;
}

EnsembleSummary estimate_stationary(const ProcessSpec& spec, const RateCertificate& cert, double burn_in,
                                    std::size_t n, double horizon, double h, std::uint64_t seed, unsigned jobs,
                                    double x0) {
  if (n == 0) throw ConfigError("paths must be at least 1");
  if (!(burn_in >= 0.0)) throw ConfigError("burn_in must be nonnegative");
  if (!(horizon >= 0.0)) throw ConfigError("horizon must be nonnegative");

  EnsembleSummary out;
  if (!cert.a3_holds) out.warnings.emplace_back("stationarity not certified");
  const TimeGrid grid = TimeGrid::make(burn_in + horizon, h);
  auto ends = simulate_ensemble(spec, {x0}, n, grid, {grid.steps}, seed, family::stationary, jobs);

  std::vector<double> v(n);
  std::transform(ends[0].begin(), ends[0].end(), v.begin(), [&](double x) { return std::exp(cert.lambda * x); });
  const MeanEstimate est = mean_and_stderr(v);

  out.n_paths = n;
  out.lambda = cert.lambda;
  out.burn_in = burn_in;
  out.mean_V = est.mean;
  out.stderr_V = est.std_error;
  out.endpoint_sample = EmpiricalDistribution(std::move(ends[0]));
  return out;
}

}  // namespace rjd
