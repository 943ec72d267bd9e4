#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "rjd/errors.hpp"
#include "rjd/model.hpp"

namespace rjd {
namespace {

const double kInf = std::numeric_limits<double>::infinity();

ProcessSpec ou_spec() { return ProcessSpec{AffineDrift{-1.0, -1.0}, 1.0, NoJumps{}}; }

TEST(EffectiveDrift, LevyExp2AtZero) {
  EXPECT_NEAR(effective_drift(presets::levy_exp2(), 0.0), -0.5, 1e-15);
}

TEST(EffectiveDrift, NoJumpsIsDrift) {
  const ProcessSpec spec = presets::drifted_rbm();
  for (double x : {0.0, 0.3, 7.0, 1e6}) EXPECT_EQ(effective_drift(spec, x), -1.0);
}

TEST(EffectiveDrift, AffineDirect) { EXPECT_DOUBLE_EQ(effective_drift(ou_spec(), 2.0), -3.0); }

TEST(EffectiveDrift, AffineWithJumpsIsAffine) {
  ProcessSpec spec{AffineDrift{-0.7, 0.2}, 1.0, LevyUpward{DeterministicLaw{0.5}, 2.0}};
  const double m0 = effective_drift(spec, 0.0);
  const double m1 = effective_drift(spec, 1.0);
  for (double x : {0.25, 3.0, 11.0}) EXPECT_NEAR(effective_drift(spec, x), m0 + (m1 - m0) * x, 1e-12);
  EXPECT_NEAR(m0, 0.2 + 2.0 * 0.5, 1e-15);
}

TEST(CheckAssumptions, OrnsteinUhlenbeck) {
  const AssumptionReport r = check_assumptions(ou_spec());
  ASSERT_TRUE(r.a4_G.has_value());
  EXPECT_EQ(*r.a4_G, -1.0);
  EXPECT_TRUE(r.a1_constant_intensity);
  EXPECT_TRUE(r.a2_stochastic_order);
  EXPECT_TRUE(r.a4_jump_monotone);
}

TEST(CheckAssumptions, LevyExample) {
  const AssumptionReport r = check_assumptions(presets::levy_exp2());
  EXPECT_EQ(*r.a4_G, 0.0);
  ASSERT_TRUE(r.mean_drift_bound.has_value());
  EXPECT_NEAR(*r.mean_drift_bound, -0.5, 1e-15);
}

TEST(CheckAssumptions, TabulatedSingleSecant) {
  ProcessSpec spec{TabulatedDrift{{{0.0, 0.0}, {1.0, -1.0}}}, 1.0, NoJumps{}};
  EXPECT_EQ(*check_assumptions(spec).a4_G, -1.0);
}

TEST(CheckAssumptions, TabulatedMaxSecant) {
  ProcessSpec spec{TabulatedDrift{{{0.0, 1.0}, {1.0, 0.0}, {2.0, 0.5}, {4.0, -3.0}}}, 1.0, NoJumps{}};
  EXPECT_DOUBLE_EQ(*check_assumptions(spec).a4_G, 0.5);
}

TEST(CheckAssumptions, DegenerateSpecIsReportedNotRejected) {
  ProcessSpec spec{ConstantDrift{0.0}, 0.0, NoJumps{}};
  const AssumptionReport r = check_assumptions(spec);
  bool found = false;
  for (const auto& n : r.notes) found |= n.find("degenerate") != std::string::npos;
  EXPECT_TRUE(found);
}

TEST(MgfDomain, Examples) {
  EXPECT_EQ(mgf_domain(LevyUpward{ExponentialLaw{2.0}, 1.0}), 2.0);
  EXPECT_EQ(mgf_domain(LevyUpward{DeterministicLaw{1.0}, 1.0}), kInf);
  MixtureLaw mix{{{0.5, ExponentialLaw{2.0}}, {0.5, ExponentialLaw{3.0}}}};
  EXPECT_EQ(mgf_domain(LevyUpward{mix, 1.0}), 2.0);
  EXPECT_EQ(mgf_domain(NoJumps{}), kInf);
}

TEST(Displacement, ExponentialMgfClosedForm) {
  const DisplacementLaw law = ExponentialLaw{2.0};
  EXPECT_NEAR(displacement_mgf(law, 0.5), 2.0 / 1.5, 1e-15);
  EXPECT_THROW(displacement_mgf(law, 2.0), NumericError);
}

TEST(Displacement, MixtureMgfIsWeightedSum) {
  MixtureLaw mix{{{0.25, ExponentialLaw{4.0}}, {0.75, DeterministicLaw{0.5}}}};
  const double l = 1.3;
  EXPECT_NEAR(displacement_mgf(mix, l), 0.25 * 4.0 / (4.0 - l) + 0.75 * std::exp(0.5 * l), 1e-14);
  EXPECT_NEAR(displacement_mean(mix), 0.25 * 0.25 + 0.75 * 0.5, 1e-15);
}

TEST(Displacement, QuantileInvertsTail) {
  const DisplacementLaw law = ExponentialLaw{2.0};
  EXPECT_NEAR(displacement_quantile(law, 1.0 - std::exp(-2.0)), 1.0, 1e-14);
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> U(0.0, 0.999);
  for (int i = 0; i < 200; ++i) {
    const double u = U(gen);
    EXPECT_NEAR(displacement_tail(law, displacement_quantile(law, u)), 1.0 - u, 1e-12);
  }
}

TEST(Displacement, MixtureQuantileMatchesCdf) {
  MixtureLaw mix{{{0.4, ExponentialLaw{1.0}}, {0.6, ExponentialLaw{5.0}}}};
  // Stratified inverse: the u-quantile lies in component 0 for u < 0.4.
  EXPECT_NEAR(displacement_quantile(mix, 0.2), -std::log1p(-0.5) / 1.0, 1e-14);
  EXPECT_NEAR(displacement_quantile(mix, 0.7), -std::log1p(-0.5) / 5.0, 1e-14);
}

// Translation-invariant tails are stochastically ordered in the start state.
TEST(JumpFamilyProperty, LevyTailsOrderedInState) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> U(0.0, 10.0);
  const JumpFamily jumps = LevyUpward{MixtureLaw{{{0.5, ExponentialLaw{2.0}}, {0.5, DeterministicLaw{1.0}}}}, 1.5};
  for (int i = 0; i < 1000; ++i) {
    double x = U(gen), y = U(gen);
    if (x > y) std::swap(x, y);
    const double z = U(gen) + y;
    EXPECT_LE(jump_tail_mass(jumps, x, z), jump_tail_mass(jumps, y, z));
  }
}

TEST(DriftProperty, AffineSlopeIsOneSidedLipschitzWithEquality) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> U(0.0, 50.0);
  const DriftSpec d = AffineDrift{-1.7, 0.3};
  const double G = *check_assumptions(ProcessSpec{d, 1.0, NoJumps{}}).a4_G;
  for (int i = 0; i < 1000; ++i) {
    double x = U(gen), y = U(gen);
    if (x > y) std::swap(x, y);
    EXPECT_NEAR(drift_value(d, y) - drift_value(d, x), G * (y - x), 1e-12 * (1.0 + y));
  }
}

TEST(DriftProperty, TabulatedInterpolatesAndExtrapolatesFlat) {
  const DriftSpec d = TabulatedDrift{{{1.0, 2.0}, {3.0, -2.0}}};
  EXPECT_DOUBLE_EQ(drift_value(d, 0.0), 2.0);
  EXPECT_DOUBLE_EQ(drift_value(d, 2.0), 0.0);
  EXPECT_DOUBLE_EQ(drift_value(d, 10.0), -2.0);
}

TEST(Validate, RejectsBadSpecs) {
  EXPECT_THROW(validate(ProcessSpec{ConstantDrift{-1.0}, -1.0, NoJumps{}}), ConfigError);
  EXPECT_THROW(validate(ProcessSpec{TabulatedDrift{{{1.0, 0.0}, {1.0, 1.0}}}, 1.0, NoJumps{}}), ConfigError);
  EXPECT_THROW(validate(ProcessSpec{ConstantDrift{-1.0}, 1.0, LevyUpward{ExponentialLaw{2.0}, 0.0}}), ConfigError);
  EXPECT_THROW(validate(ProcessSpec{ConstantDrift{-1.0}, 1.0, LevyUpward{ExponentialLaw{-2.0}, 1.0}}), ConfigError);
  MixtureLaw bad{{{0.5, ExponentialLaw{2.0}}, {0.6, ExponentialLaw{3.0}}}};
  EXPECT_THROW(validate(ProcessSpec{ConstantDrift{-1.0}, 1.0, LevyUpward{bad, 1.0}}), ConfigError);
  EXPECT_THROW(validate(ProcessSpec{ConstantDrift{-1.0}, 1.0, StateCatalog{}}), ConfigError);
  EXPECT_NO_THROW(validate(presets::levy_exp2()));
}

TEST(ProbeGrid, Shape) {
  const auto g = probe_grid();
  ASSERT_EQ(g.size(), 26u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g[1], 1.0 / 16.0);
  EXPECT_EQ(g.back(), 1048576.0);
}

}  // namespace
}  // namespace rjd
