#pragma once
/**
 * @file engine.hpp
 * @brief Path simulation of reflected jump-diffusions.
 *
 * Between grid points the diffusion is advanced by a projected Euler step,
 *
 *   y = x + g(x) h + sigma sqrt(h) z,   x' = max(0, y),   dl = max(0, -y),
 *
 * so that dl > 0 only when x' = 0. Jump epochs come from a Poisson clock with
 * i.i.d. Exp(Lambda) gaps; a jump whose epoch falls in (t_i, t_{i+1}] is
 * applied at t_{i+1}, after that step's diffusion increment.
 */

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rjd/certificate.hpp"
#include "rjd/empirical.hpp"
#include "rjd/model.hpp"
#include "rjd/rng.hpp"

namespace rjd {

/// Uniform grid t_i = i h, i = 0..steps.
struct TimeGrid {
  double h = 0.0;
  std::size_t steps = 0;

  /// Grid covering [0, horizon]; horizon must be a whole number of steps
  /// (up to 1e-9 relative). Throws ConfigError otherwise.
  static TimeGrid make(double horizon, double h);

  double time(std::size_t i) const { return static_cast<double>(i) * h; }
  double horizon() const { return time(steps); }
  /// Grid index of time t (which must lie on the grid).
  std::size_t index_of(double t) const;
};

struct StepResult {
  double x = 0.0;
  double dl = 0.0;
};

StepResult reflected_step(double x, const ProcessSpec& spec, double h, double z);

/// Ordered Poisson epochs on (0, horizon]; empty when intensity is 0.
std::vector<double> sample_jump_times(double intensity, double horizon, RandomStream& rng);

/// x + Z, Z the displacement drawn by inverse CDF at u.
double apply_jump(double x, const JumpFamily& jumps, double u);

struct PathSample {
  TimeGrid grid;
  std::vector<double> values;
  std::vector<double> local_time;
  std::vector<double> jump_times;
  StreamKey stream;

  std::uint64_t seed_tag() const { return stream.path; }
};

/// Step-by-step driver shared by every simulation routine so that all of them
/// consume random numbers in the same order.
class PathIntegrator {
 public:
  PathIntegrator(const ProcessSpec& spec, const TimeGrid& grid, const StreamKey& key);

  /// Advance x from grid index index() to index() + 1.
  StepResult advance(double x);

  std::size_t index() const { return index_; }
  const std::vector<double>& jump_times() const { return jump_times_; }

 private:
  const ProcessSpec* spec_;
  TimeGrid grid_;
  double sigma_sqrt_h_;
  PathStreams streams_;
  std::vector<double> jump_times_;
  std::size_t next_jump_ = 0;
  std::size_t index_ = 0;
};

PathSample simulate_path(const ProcessSpec& spec, double x0, double horizon, double h, const StreamKey& key);

/// Values of n independent paths at the given grid indices: result[j][i] is
/// path i at observe[j]. Path i starts at starts[i] (or starts[0] when only
/// one start is given) and uses StreamKey{seed, family, i}.
std::vector<std::vector<double>> simulate_ensemble(const ProcessSpec& spec, const std::vector<double>& starts,
                                                   std::size_t n, const TimeGrid& grid,
                                                   const std::vector<std::size_t>& observe, std::uint64_t seed,
                                                   std::uint64_t family, unsigned jobs = 1);

struct EnsembleSummary {
  std::size_t n_paths = 0;
  EmpiricalDistribution endpoint_sample;
  double lambda = 0.0;
  /// Monte Carlo mean of V(X) = exp(lambda X) over the endpoints.
  double mean_V = 0.0;
  double stderr_V = 0.0;
  double burn_in = 0.0;
  std::vector<std::string> warnings;
};

/// Default burn-in: 20 / k.
double default_burn_in(const RateCertificate& cert);

/// Simulates n paths from x0 to burn_in + horizon and summarizes the endpoint
/// sample as an approximate stationary sample.
EnsembleSummary estimate_stationary(const ProcessSpec& spec, const RateCertificate& cert, double burn_in,
                                    std::size_t n, double horizon, double h, std::uint64_t seed,
                                    unsigned jobs = 1, double x0 = 0.0);

/// Sample mean and its standard error.
struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};
MeanEstimate mean_and_stderr(const std::vector<double>& values);

}  // namespace rjd
