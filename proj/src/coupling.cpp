#include "rjd/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rjd/errors.hpp"
#include "rjd/parallel.hpp"

namespace rjd {

namespace {

inline StepResult project(double y) { return y >= 0.0 ? StepResult{y, 0.0} : StepResult{0.0, -y}; }

}  // namespace

double max_monotone_step(const DriftSpec& drift) {
  const double lo = drift_lower_slope(drift);
  return lo < 0.0 ? 1.0 / -lo : std::numeric_limits<double>::infinity();
}

void check_coupling_step(const ProcessSpec& spec, double h) {
  if (!(h > 0.0)) throw ConfigError("dt must be positive");
  if (!(h < max_monotone_step(spec.drift))) throw ConfigError("step too large for monotone coupling");
}

std::pair<double, double> coupled_step(double x1, double x2, const ProcessSpec& spec, double h, double z) {
  if (!(x1 <= x2)) throw std::invalid_argument("coupled_step requires x1 <= x2");
  check_coupling_step(spec, h);
  return {reflected_step(x1, spec, h, z).x, reflected_step(x2, spec, h, z).x};
}

std::pair<double, double> coupled_jump(double y1, double y2, const JumpFamily& jumps, double u) {
  if (!(y1 <= y2)) throw std::invalid_argument("coupled_jump requires y1 <= y2");
  return {apply_jump(y1, jumps, u), apply_jump(y2, jumps, u)};
}

// ---------------------------------------------------------------------------

CoupledIntegrator::CoupledIntegrator(const ProcessSpec& spec, const TimeGrid& grid, const StreamKey& key, double x1,
                                     double x2)
    : spec_(&spec),
      grid_(grid),
      sigma_sqrt_h_(spec.sigma * std::sqrt(grid.h)),
      streams_(key),
      lower_(x1),
      gap_(x2 - x1) {
  if (!(x1 <= x2)) throw std::invalid_argument("coupled starts must satisfy x1 <= x2");
  jump_times_ = sample_jump_times(jump_intensity(spec.jumps), grid.horizon(), streams_.clock);
}

void CoupledIntegrator::advance() {
  const double z = streams_.diffusion.normal();
  const double h = grid_.h;
  ++index_;
  const double t = grid_.time(index_);

  const double lo = project(lower_ + drift_value(spec_->drift, lower_) * h + sigma_sqrt_h_ * z).x;
  if (gap_ == 0.0) {
    lower_ = lo;
    upper_hit_ = lo == 0.0;
  } else {
    const double up = upper();
    const double hi = project(up + drift_value(spec_->drift, up) * h + sigma_sqrt_h_ * z).x;
    upper_hit_ = hi == 0.0;
    if (hi < lo) ++order_violations_;
    lower_ = lo;
    gap_ = hi > lo ? hi - lo : 0.0;
  }

  while (next_jump_ < jump_times_.size() && jump_times_[next_jump_] <= t) {
    const double before = gap_;
    lower_ = apply_jump(lower_, spec_->jumps, streams_.marks.uniform());
    if (before != 0.0) {
      ++gap_jumps_;
      if (gap_ != before) ++gap_jump_violations_;
    }
    ++next_jump_;
  }
}

CoupledPaths simulate_coupled(const ProcessSpec& spec, double x1, double x2, double horizon, double h,
                              const StreamKey& key) {
  if (!(0.0 <= x1 && x1 <= x2)) throw ConfigError("coupled starts must satisfy 0 <= x1 <= x2");
  validate(spec);
  check_coupling_step(spec, h);
  const TimeGrid grid = TimeGrid::make(horizon, h);

  CoupledPaths cp;
  cp.grid = grid;
  cp.x1 = x1;
  cp.x2 = x2;
  cp.lower.reserve(grid.steps + 1);
  cp.upper.reserve(grid.steps + 1);
  cp.lower.push_back(x1);
  cp.upper.push_back(x2);
  if (x2 == 0.0) cp.tau_index = 0;
  if (x1 == x2) cp.coalesced_from = 0;

  CoupledIntegrator integrator(spec, grid, key, x1, x2);
  for (std::size_t i = 1; i <= grid.steps; ++i) {
    integrator.advance();
    cp.lower.push_back(integrator.lower());
    cp.upper.push_back(integrator.upper());
    if (!cp.tau_index && integrator.upper_hit()) cp.tau_index = i;
    if (!cp.coalesced_from && integrator.coalesced()) cp.coalesced_from = i;
  }
  cp.jump_times = integrator.jump_times();
  cp.gap_jumps = integrator.gap_jumps();
  cp.gap_jump_violations = integrator.gap_jump_violations();
  cp.order_violations = integrator.order_violations();
  return cp;
}

double check_lemma1(const CoupledPaths& cp, double G) {
  const double gap0 = cp.x2 - cp.x1;
  const std::size_t end = std::min(cp.tau_index.value_or(cp.lower.size()), cp.lower.size());
  if (end == 0) return gap0 == 0.0 ? 0.0 : -gap0;
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < end; ++i) {
    const double bound = gap0 * std::exp(G * cp.grid.time(i));
    worst = std::max(worst, (cp.upper[i] - cp.lower[i]) - bound);
  }
  return worst;
}

// ---------------------------------------------------------------------------

ProbeResult supermartingale_probe(const ProcessSpec& spec, const RateCertificate& cert, double x2, double t,
                                  std::size_t n, double h, std::uint64_t seed, unsigned jobs) {
  if (!cert.a3_holds) throw NumericError("no valid certificate");
  if (!(x2 >= 0.0)) throw ConfigError("x2 must be nonnegative");
  if (n == 0) throw ConfigError("paths must be at least 1");
  validate(spec);
  check_coupling_step(spec, h);
  const TimeGrid grid = TimeGrid::make(t, h);

  std::vector<double> values(n);
  std::vector<char> hit(n, 0);
  parallel_for(n, jobs, [&](std::size_t i) {
    if (x2 == 0.0) {
      values[i] = 1.0;
      hit[i] = 1;
      return;
    }
    CoupledIntegrator integrator(spec, grid, StreamKey{seed, family::primary, i}, 0.0, x2);
    for (std::size_t step = 1; step <= grid.steps; ++step) {
      integrator.advance();
      if (integrator.upper_hit()) {
        values[i] = std::exp(cert.k * grid.time(step));
        hit[i] = 1;
        return;
      }
    }
    values[i] = std::exp(cert.k * grid.horizon()) * cert.V(integrator.upper());
  });

  const MeanEstimate est = mean_and_stderr(values);
  ProbeResult r;
  r.estimate = est.mean;
  r.std_error = est.std_error;
  r.bound = cert.V(x2);
  r.n_paths = n;
  r.hit_count = static_cast<std::size_t>(std::count(hit.begin(), hit.end(), 1));
  return r;
}

}  // namespace rjd
