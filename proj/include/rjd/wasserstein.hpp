#pragma once
/**
 * @file wasserstein.hpp
 * @brief Wasserstein distances on the line and decay-curve experiments.
 *
 * On R the comonotone (quantile) coupling is optimal for every order p, so
 *
 *   W_p(A, B)^p = int_0^1 |F_A^{-1}(u) - F_B^{-1}(u)|^p du,
 *
 * which for two weighted samples is a finite sum over the common refinement
 * of their cumulative-weight partitions.
 */

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rjd/certificate.hpp"
#include "rjd/empirical.hpp"
#include "rjd/engine.hpp"
#include "rjd/model.hpp"

namespace rjd {

double wp_exact(const EmpiricalDistribution& a, const EmpiricalDistribution& b, double p);

/// Minimum over all n! pairings of equal-size uniform samples (n <= 8).
/// Independent check of wp_exact.
double wp_bruteforce(const std::vector<double>& a, const std::vector<double>& b, double p);

/// max |P(t_i) - Q(t_i)| over grid points in [t, T]. Upper-bounds the Skorohod
/// distance between the two paths on that window.
double path_sup_distance(const PathSample& P, const PathSample& Q, double t, double T);
double path_sup_distance(const TimeGrid& grid, const std::vector<double>& P, const std::vector<double>& Q, double t,
                         double T);

/// Monte Carlo resolution of wp_exact between two samples of the given sizes:
/// RMS of wp_exact over bootstrap pairs drawn from the pooled sample. This is
/// the typical value the estimator takes when both laws coincide.
double wp_resolution(const EmpiricalDistribution& a, const EmpiricalDistribution& b, double p, int replicates,
                     std::uint64_t seed);

/// Coupling and marginal Wasserstein estimates against the certificate bounds.
/// Columns that an experiment does not produce hold NaN.
struct DecayCurve {
  std::vector<double> times;
  /// Right window ends for path-space curves; empty otherwise.
  std::vector<double> window_ends;
  std::vector<double> wp_coupling;
  std::vector<double> wp_coupling_stderr;
  std::vector<double> wp_marginal;
  std::vector<double> wp_marginal_stderr;
  std::vector<double> bound1;
  std::vector<double> bound1_stderr;
  std::optional<std::vector<double>> bound2;
  std::optional<std::vector<double>> bound2_stderr;
  std::size_t n_paths = 0;
  double p = 1.0;
  std::vector<std::string> notes;
};

struct DecayOptions {
  std::size_t n_paths = 10000;
  double p = 1.0;
  double h = 1e-3;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  int bootstrap_replicates = 10;
};

/// Transition-law distances between starts x1 <= x2 at each time.
DecayCurve decay_curve(const ProcessSpec& spec, const RateCertificate& cert, double x1, double x2,
                       const std::vector<double>& times, const DecayOptions& opt);

/// Path-space version over windows [t, T] (coupling estimate only).
DecayCurve path_decay_curve(const ProcessSpec& spec, const RateCertificate& cert, double x1, double x2,
                            const std::vector<std::pair<double, double>>& windows, const DecayOptions& opt);

/// Initial condition for stationary_gap: a point or a weighted sample.
using StartLaw = std::variant<double, EmpiricalDistribution>;

/// Distance from the law at time t started at `start` to the stationary
/// sample in `stationary`.
DecayCurve stationary_gap(const ProcessSpec& spec, const RateCertificate& cert, const StartLaw& start,
                          const std::vector<double>& times, const EnsembleSummary& stationary,
                          const DecayOptions& opt);

}  // namespace rjd
