#include "rjd/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rjd/errors.hpp"

namespace rjd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double tabulated_value(const TabulatedDrift& tab, double x) {
  const auto& k = tab.knots;
  if (k.empty()) return 0.0;
  if (x <= k.front().first) return k.front().second;
  if (x >= k.back().first) return k.back().second;
  auto hi = std::upper_bound(k.begin(), k.end(), x,
                             [](double v, const auto& knot) { return v < knot.first; });
  auto lo = hi - 1;
  const double w = (x - lo->first) / (hi->first - lo->first);
  return lo->second + w * (hi->second - lo->second);
}

std::vector<double> secant_slopes(const TabulatedDrift& tab) {
  std::vector<double> s;
  for (std::size_t i = 1; i < tab.knots.size(); ++i) {
    const auto& [x0, g0] = tab.knots[i - 1];
    const auto& [x1, g1] = tab.knots[i];
    s.push_back((g1 - g0) / (x1 - x0));
  }
  return s;
}

void validate_law(const DisplacementLaw& law) {
  std::visit(Overloaded{
                 [](const ExponentialLaw& e) {
                   if (!(e.rate > 0.0) || !std::isfinite(e.rate))
                     throw ConfigError("exponential displacement rate must be positive and finite");
                 },
                 [](const DeterministicLaw& d) {
                   if (!(d.size >= 0.0) || !std::isfinite(d.size))
                     throw ConfigError("deterministic displacement must be nonnegative and finite");
                 },
                 [](const MixtureLaw& m) {
                   if (m.components.empty()) throw ConfigError("mixture has no components");
                   double total = 0.0;
                   for (const auto& c : m.components) {
                     if (!(c.weight > 0.0)) throw ConfigError("mixture weights must be positive");
                     total += c.weight;
                     validate_law(c.law);
                   }
                   if (std::abs(total - 1.0) > 1e-12) throw ConfigError("mixture weights must sum to 1");
                 },
             },
             law);
}

}  // namespace

// ---------------------------------------------------------------------------

double drift_value(const DriftSpec& drift, double x) {
  return std::visit(Overloaded{
                        [](const ConstantDrift& c) { return c.value; },
                        [x](const AffineDrift& a) { return a.slope * x + a.intercept; },
                        [x](const TabulatedDrift& t) { return tabulated_value(t, x); },
                    },
                    drift);
}

double drift_upper_slope(const DriftSpec& drift) {
  return std::visit(Overloaded{
                        [](const ConstantDrift&) { return 0.0; },
                        [](const AffineDrift& a) { return a.slope; },
                        [](const TabulatedDrift& t) {
                          const auto s = secant_slopes(t);
                          return s.empty() ? 0.0 : *std::max_element(s.begin(), s.end());
                        },
                    },
                    drift);
}

double drift_lower_slope(const DriftSpec& drift) {
  return std::visit(Overloaded{
                        [](const ConstantDrift&) { return 0.0; },
                        [](const AffineDrift& a) { return std::min(a.slope, 0.0); },
                        [](const TabulatedDrift& t) {
                          const auto s = secant_slopes(t);
                          double lo = 0.0;
                          for (double v : s) lo = std::min(lo, v);
                          return lo;
                        },
                    },
                    drift);
}

// ---------------------------------------------------------------------------

double displacement_mean(const DisplacementLaw& law) {
  return std::visit(Overloaded{
                        [](const ExponentialLaw& e) { return e.rate > 0.0 ? 1.0 / e.rate : kInf; },
                        [](const DeterministicLaw& d) { return d.size; },
                        [](const MixtureLaw& m) {
                          double mean = 0.0;
                          for (const auto& c : m.components) mean += c.weight * displacement_mean(c.law);
                          return mean;
                        },
                    },
                    law);
}

double displacement_mgf_domain(const DisplacementLaw& law) {
  return std::visit(Overloaded{
                        [](const ExponentialLaw& e) { return e.rate; },
                        [](const DeterministicLaw&) { return kInf; },
                        [](const MixtureLaw& m) {
                          double dom = kInf;
                          for (const auto& c : m.components)
                            dom = std::min(dom, displacement_mgf_domain(c.law));
                          return dom;
                        },
                    },
                    law);
}

double displacement_mgf(const DisplacementLaw& law, double lambda) {
  if (lambda >= displacement_mgf_domain(law)) throw NumericError("MGF divergence");
  return std::visit(Overloaded{
                        [lambda](const ExponentialLaw& e) { return e.rate / (e.rate - lambda); },
                        [lambda](const DeterministicLaw& d) { return std::exp(lambda * d.size); },
                        [lambda](const MixtureLaw& m) {
                          double mgf = 0.0;
                          for (const auto& c : m.components) mgf += c.weight * displacement_mgf(c.law, lambda);
                          return mgf;
                        },
                    },
                    law);
}

double displacement_tail(const DisplacementLaw& law, double z) {
  return std::visit(Overloaded{
                        [z](const ExponentialLaw& e) { return z <= 0.0 ? 1.0 : std::exp(-e.rate * z); },
                        [z](const DeterministicLaw& d) { return z <= d.size ? 1.0 : 0.0; },
                        [z](const MixtureLaw& m) {
                          double tail = 0.0;
                          for (const auto& c : m.components) tail += c.weight * displacement_tail(c.law, z);
                          return tail;
                        },
                    },
                    law);
}

double displacement_quantile(const DisplacementLaw& law, double u) {
  return std::visit(Overloaded{
                        [u](const ExponentialLaw& e) { return -std::log1p(-u) / e.rate; },
                        [](const DeterministicLaw& d) { return d.size; },
                        [u](const MixtureLaw& m) {
                          double lo = 0.0;
                          for (std::size_t i = 0; i < m.components.size(); ++i) {
                            const auto& c = m.components[i];
                            const double hi = lo + c.weight;
                            if (u < hi || i + 1 == m.components.size()) {
                              const double v = std::clamp((u - lo) / c.weight, 0.0, std::nextafter(1.0, 0.0));
                              return displacement_quantile(c.law, v);
                            }
                            lo = hi;
                          }
                          return 0.0;
                        },
                    },
                    law);
}

double jump_intensity(const JumpFamily& jumps) {
  if (const auto* levy = std::get_if<LevyUpward>(&jumps)) return levy->intensity;
  return 0.0;
}

double mgf_domain(const JumpFamily& jumps) {
  if (const auto* levy = std::get_if<LevyUpward>(&jumps)) return displacement_mgf_domain(levy->displacement);
  return kInf;
}

double jump_tail_mass(const JumpFamily& jumps, double x, double z) {
  if (const auto* levy = std::get_if<LevyUpward>(&jumps))
    return levy->intensity * displacement_tail(levy->displacement, z - x);
  if (std::holds_alternative<StateCatalog>(jumps))
    throw ConfigError("state-dependent jump catalogs are not supported");
  return 0.0;
}

// ---------------------------------------------------------------------------

void validate(const ProcessSpec& spec) {
  if (!(spec.sigma >= 0.0) || !std::isfinite(spec.sigma)) throw ConfigError("sigma must be nonnegative and finite");

  if (const auto* tab = std::get_if<TabulatedDrift>(&spec.drift)) {
    if (tab->knots.empty()) throw ConfigError("tabulated drift needs at least one knot");
    for (std::size_t i = 1; i < tab->knots.size(); ++i)
      if (!(tab->knots[i].first > tab->knots[i - 1].first))
        throw ConfigError("tabulated drift knots must be strictly increasing in x");
  }

  std::visit(Overloaded{
                 [](const NoJumps&) {},
                 [](const LevyUpward& l) {
                   if (!(l.intensity > 0.0) || !std::isfinite(l.intensity))
                     throw ConfigError("jump intensity must be positive and finite");
                   validate_law(l.displacement);
                 },
                 [](const StateCatalog&) {
                   throw ConfigError("state-dependent jump catalogs are not supported");
                 },
             },
             spec.jumps);
}

std::vector<double> probe_grid() {
  std::vector<double> grid{0.0};
  for (int j = -4; j <= 20; ++j) grid.push_back(std::ldexp(1.0, j));
  return grid;
}

double effective_drift(const ProcessSpec& spec, double x) {
  double m = drift_value(spec.drift, x);
  if (const auto* levy = std::get_if<LevyUpward>(&spec.jumps)) {
    const double mean = displacement_mean(levy->displacement);
    if (!std::isfinite(mean)) throw NumericError("mean drift undefined");
    m += levy->intensity * mean;
  } else if (std::holds_alternative<StateCatalog>(spec.jumps)) {
    throw ConfigError("state-dependent jump catalogs are not supported");
  }
  return m;
}

AssumptionReport check_assumptions(const ProcessSpec& spec) {
  AssumptionReport r;
  const bool catalog = std::holds_alternative<StateCatalog>(spec.jumps);
  r.a1_constant_intensity = !catalog;
  r.a2_stochastic_order = !catalog;
  r.a4_jump_monotone = !catalog;
  if (catalog) r.notes.emplace_back("state-dependent jump catalog: assumptions not verified");

  r.a4_G = drift_upper_slope(spec.drift);
  if (std::holds_alternative<TabulatedDrift>(spec.drift) && *r.a4_G < 0.0)
    r.notes.emplace_back(
        "a4_G is the maximum secant slope over the knots; the constant extension beyond the "
        "last knot is only covered by G >= 0");

  if (!catalog) {
    try {
      double sup = -kInf;
      for (double x : probe_grid()) sup = std::max(sup, effective_drift(spec, x));
      r.mean_drift_bound = sup;
      if (sup >= 0.0)
        r.notes.emplace_back("effective drift is not uniformly negative on the probe grid");
    } catch (const NumericError& e) {
      r.notes.emplace_back(e.what());
    }
  }

  if (spec.sigma == 0.0 && std::holds_alternative<NoJumps>(spec.jumps) &&
      !(r.mean_drift_bound && *r.mean_drift_bound < 0.0))
    r.notes.emplace_back("degenerate process: sigma = 0, no jumps and no strictly negative drift");

  r.notes.emplace_back("probe grid: {0} U {2^j : j = -4..20}");
  return r;
}

namespace presets {

ProcessSpec drifted_rbm(double drift, double sigma) {
  return ProcessSpec{ConstantDrift{drift}, sigma, NoJumps{}};
}

ProcessSpec reflected_ou(double a, double m, double sigma) {
  return ProcessSpec{AffineDrift{-a, -a * m}, sigma, NoJumps{}};
}

ProcessSpec levy_exp2() {
  return ProcessSpec{ConstantDrift{-1.0}, 1.0, LevyUpward{ExponentialLaw{2.0}, 1.0}};
}

}  // namespace presets

}  // namespace rjd
