#pragma once
/**
 * @file model.hpp
 * @brief Declarative description of a reflected jump-diffusion on [0, inf).
 *
 * Between jumps the process follows dX = g(X) dt + sigma dW + dl, where l is
 * the boundary local time at 0. Jumps arrive at the epochs of a Poisson clock
 * with constant intensity and displace the state upward by an i.i.d. amount
 * drawn from a displacement law, so the jump measure from x is the
 * translation of a fixed measure:  nu_x([x + z, inf)) = mu([z, inf)).
 *
 * All types here are immutable values and safe to share across threads.
 */

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace rjd {

// ---------------------------------------------------------------------------
// Drift
// ---------------------------------------------------------------------------

struct ConstantDrift {
  double value = 0.0;
};

/// g(x) = slope * x + intercept.
struct AffineDrift {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Piecewise-linear g through (x, g(x)) knots; constant beyond both ends.
struct TabulatedDrift {
  std::vector<std::pair<double, double>> knots;
};

using DriftSpec = std::variant<ConstantDrift, AffineDrift, TabulatedDrift>;

double drift_value(const DriftSpec& drift, double x);

/// Smallest G such that x -> g(x) - G x is nonincreasing (on the knot set for
/// tabulated drifts).
double drift_upper_slope(const DriftSpec& drift);

/// Most negative slope of g (0 if g is nondecreasing). Bounds the Euler step
/// for which the one-step map x -> x + g(x) h stays monotone.
double drift_lower_slope(const DriftSpec& drift);

// ---------------------------------------------------------------------------
// Jumps
// ---------------------------------------------------------------------------

struct ExponentialLaw {
  double rate = 1.0;
};

struct DeterministicLaw {
  double size = 0.0;
};

struct MixtureComponent;

struct MixtureLaw {
  std::vector<MixtureComponent> components;
};

using DisplacementLaw = std::variant<ExponentialLaw, DeterministicLaw, MixtureLaw>;

struct MixtureComponent {
  double weight = 0.0;
  DisplacementLaw law;
};

struct NoJumps {};

/// Translation-invariant upward jumps at total rate `intensity`.
struct LevyUpward {
  DisplacementLaw displacement;
  double intensity = 0.0;
};

/// Reserved for general state-dependent jump kernels; not implemented.
struct StateCatalog {};

using JumpFamily = std::variant<NoJumps, LevyUpward, StateCatalog>;

double displacement_mean(const DisplacementLaw& law);

/// E[exp(lambda Z)]; requires lambda < displacement_mgf_domain(law).
double displacement_mgf(const DisplacementLaw& law, double lambda);

/// P(Z >= z).
double displacement_tail(const DisplacementLaw& law, double z);

/// Inverse CDF of the displacement evaluated at u in [0, 1). Mixtures pick a
/// component by the cumulative weights and rescale u inside that stratum, so a
/// single uniform drives the whole draw.
double displacement_quantile(const DisplacementLaw& law, double u);

double displacement_mgf_domain(const DisplacementLaw& law);

/// Total jump intensity Lambda (0 for NoJumps).
double jump_intensity(const JumpFamily& jumps);

/// Supremum of lambda with finite displacement MGF; +inf without jumps.
double mgf_domain(const JumpFamily& jumps);

/// nu_x([z, inf)): jump measure mass at or above destination z.
double jump_tail_mass(const JumpFamily& jumps, double x, double z);

// ---------------------------------------------------------------------------
// Process
// ---------------------------------------------------------------------------

struct ProcessSpec {
  DriftSpec drift;
  double sigma = 0.0;
  JumpFamily jumps;
};

/// Throws ConfigError on structurally invalid specs (negative sigma,
/// unsorted knots, bad mixture weights, nonpositive rates, unsupported
/// StateCatalog).
void validate(const ProcessSpec& spec);

struct AssumptionReport {
  bool a1_constant_intensity = false;
  bool a2_stochastic_order = false;
  bool a4_jump_monotone = false;
  std::optional<double> a4_G;
  std::optional<double> mean_drift_bound;
  std::vector<std::string> notes;
};

/// {0} and 2^j for j = -4..20.
std::vector<double> probe_grid();

/// m(x) = g(x) + Lambda * E[Z].
double effective_drift(const ProcessSpec& spec, double x);

AssumptionReport check_assumptions(const ProcessSpec& spec);

// Presets used throughout the tests, the CLI and the examples runner.
namespace presets {

/// Reflected Brownian motion with constant drift.
ProcessSpec drifted_rbm(double drift = -1.0, double sigma = 1.0);

/// dX = -a (m + X) dt + sigma dW + dl.
ProcessSpec reflected_ou(double a = 1.0, double m = 1.0, double sigma = 1.0);

/// Constant drift -1, sigma 1, Exp(2) displacements at unit intensity.
ProcessSpec levy_exp2();

}  // namespace presets

}  // namespace rjd
