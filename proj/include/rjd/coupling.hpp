#pragma once
/**
 * @file coupling.hpp
 * @brief Ordered synchronous coupling of two copies of the process.
 *
 * Both copies share the Brownian increments, the Poisson jump clock and the
 * jump-mark uniforms (so jump displacements are comonotone and, for
 * translation-invariant jumps, identical). Started from x1 <= x2 the lower
 * copy stays below the upper one; once the upper copy reaches 0 both are at 0
 * and from then on a single path is evolved and assigned to both.
 */

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "rjd/certificate.hpp"
#include "rjd/engine.hpp"
#include "rjd/model.hpp"
#include "rjd/rng.hpp"

namespace rjd {

struct CoupledPaths {
  TimeGrid grid;
  std::vector<double> lower;
  std::vector<double> upper;
  /// First grid index at which the upper copy's projected step is 0. A jump
  /// at the same grid point may leave upper[tau_index] > 0; the two copies
  /// are equal from there on either way.
  std::optional<std::size_t> tau_index;
  /// First grid index from which lower == upper on every later point.
  std::optional<std::size_t> coalesced_from;
  /// Jump statistics of the run, see CoupledIntegrator.
  std::size_t gap_jumps = 0;
  std::size_t gap_jump_violations = 0;
  std::size_t order_violations = 0;
  std::vector<double> jump_times;
  double x1 = 0.0;
  double x2 = 0.0;
};

/// Largest step (exclusive) for which the projected Euler map is monotone in
/// x, i.e. 1 + h * min_slope(g) > 0. +inf for nondecreasing drifts.
double max_monotone_step(const DriftSpec& drift);

/// Throws ConfigError("step too large for monotone coupling") unless
/// h < max_monotone_step(spec.drift).
void check_coupling_step(const ProcessSpec& spec, double h);

std::pair<double, double> coupled_step(double x1, double x2, const ProcessSpec& spec, double h, double z);

/// Comonotone jump: both copies receive the displacement quantile at u.
std::pair<double, double> coupled_jump(double y1, double y2, const JumpFamily& jumps, double u);

/// Drives a coupled pair over a grid. The pair is held as (lower, gap) with
/// gap = upper - lower >= 0, so a shared translation-invariant jump moves the
/// lower state and leaves the gap bit-for-bit unchanged. Random numbers are
/// consumed in exactly the order PathIntegrator uses, so the lower copy
/// reproduces simulate_path(x1) bit for bit under the same StreamKey.
class CoupledIntegrator {
 public:
  CoupledIntegrator(const ProcessSpec& spec, const TimeGrid& grid, const StreamKey& key, double x1, double x2);

  /// Advances the pair by one grid step. After coalescence a single path is
  /// evolved and the gap stays 0.
  void advance();

  double lower() const { return lower_; }
  double upper() const { return lower_ + gap_; }
  double gap() const { return gap_; }

  std::size_t index() const { return index_; }
  bool coalesced() const { return gap_ == 0.0; }
  /// The upper copy's projected diffusion step ended at 0 on the last
  /// advance (before any jump applied at the same grid point).
  bool upper_hit() const { return upper_hit_; }
  const std::vector<double>& jump_times() const { return jump_times_; }

  /// Number of jumps applied while the pair was distinct, and how many of
  /// those changed the gap.
  std::size_t gap_jumps() const { return gap_jumps_; }
  std::size_t gap_jump_violations() const { return gap_jump_violations_; }
  /// Diffusion steps whose rounded upper image fell below the lower one.
  /// The gap is then reset to 0 (coalescence).
  std::size_t order_violations() const { return order_violations_; }

 private:
  const ProcessSpec* spec_;
  TimeGrid grid_;
  double sigma_sqrt_h_;
  PathStreams streams_;
  std::vector<double> jump_times_;
  std::size_t next_jump_ = 0;
  std::size_t index_ = 0;
  double lower_;
  double gap_;
  bool upper_hit_ = false;
  std::size_t gap_jumps_ = 0;
  std::size_t gap_jump_violations_ = 0;
  std::size_t order_violations_ = 0;
};

CoupledPaths simulate_coupled(const ProcessSpec& spec, double x1, double x2, double horizon, double h,
                              const StreamKey& key);

/// max over grid points before tau of (upper - lower) - (x2 - x1) exp(G t).
/// Nonpositive when the pair respects the contraction estimate. A coalesced
/// pair (no pre-tau points) reports -(x2 - x1), or 0 when x1 == x2.
double check_lemma1(const CoupledPaths& cp, double G);

struct ProbeResult {
  double estimate = 0.0;
  double std_error = 0.0;
  /// V(x2).
  double bound = 0.0;
  std::size_t n_paths = 0;
  std::size_t hit_count = 0;

  /// estimate <= bound + 3 std_error.
  bool passes() const { return estimate <= bound + 3.0 * std_error; }
};

/// Monte Carlo mean of exp(k (t ^ tau)) V(X2(t ^ tau)) for the upper copy
/// started at x2, tau its first grid time at 0.
ProbeResult supermartingale_probe(const ProcessSpec& spec, const RateCertificate& cert, double x2, double t,
                                  std::size_t n, double h, std::uint64_t seed, unsigned jobs = 1);

}  // namespace rjd
