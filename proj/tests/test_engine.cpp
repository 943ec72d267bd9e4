#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "rjd/engine.hpp"
#include "rjd/errors.hpp"

namespace rjd {
namespace {

ProcessSpec constant(double g, double sigma) { return ProcessSpec{ConstantDrift{g}, sigma, NoJumps{}}; }

TEST(ReflectedStep, IdentityDynamics) {
  for (double h : {1e-3, 0.5, 7.0}) {
    const StepResult r = reflected_step(1.0, constant(0.0, 0.0), h, 0.3);
    EXPECT_EQ(r.x, 1.0);
    EXPECT_EQ(r.dl, 0.0);
  }
}

TEST(ReflectedStep, FullReflection) {
  const StepResult r = reflected_step(0.0, constant(-1.0, 0.0), 0.1, 0.0);
  EXPECT_EQ(r.x, 0.0);
  EXPECT_DOUBLE_EQ(r.dl, 0.1);
}

TEST(ReflectedStep, HandEvaluation) {
  const StepResult r = reflected_step(1.0, constant(-1.0, 1.0), 0.01, 0.5);
  EXPECT_NEAR(r.x, 1.04, 1e-15);
  EXPECT_EQ(r.dl, 0.0);
}

TEST(SampleJumpTimes, ZeroIntensity) {
  RandomStream rng(1);
  EXPECT_TRUE(sample_jump_times(0.0, 100.0, rng).empty());
}

TEST(SampleJumpTimes, PoissonCount) {
  RandomStream rng(StreamKey{0, family::primary, 0}, Substream::jump_clock);
  const auto t = sample_jump_times(1.0, 1000.0, rng);
  EXPECT_NEAR(static_cast<double>(t.size()), 1000.0, 3.0 * std::sqrt(1000.0));
  EXPECT_TRUE(std::is_sorted(t.begin(), t.end()));
  EXPECT_GT(t.front(), 0.0);
  EXPECT_LE(t.back(), 1000.0);
}

TEST(SampleJumpTimes, GapsAreExponential) {
  RandomStream rng(StreamKey{7, family::primary, 3}, Substream::jump_clock);
  const double rate = 2.5;
  const auto t = sample_jump_times(rate, 5000.0, rng);
  std::vector<double> gaps;
  double prev = 0.0;
  for (double s : t) gaps.push_back(s - prev), prev = s;
  gaps.resize(10000);
  std::sort(gaps.begin(), gaps.end());
  // Kolmogorov-Smirnov statistic against the Exp(rate) CDF.
  const double n = static_cast<double>(gaps.size());
  double d = 0.0;
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    const double F = 1.0 - std::exp(-rate * gaps[i]);
    d = std::max({d, F - i / n, (i + 1) / n - F});
  }
  EXPECT_LT(d, 1.628 / std::sqrt(n));
}

TEST(ApplyJump, Examples) {
  EXPECT_EQ(apply_jump(2.0, LevyUpward{DeterministicLaw{1.0}, 1.0}, 0.42), 3.0);
  EXPECT_NEAR(apply_jump(0.5, LevyUpward{ExponentialLaw{2.0}, 1.0}, 1.0 - std::exp(-2.0)), 1.5, 1e-14);
  EXPECT_THROW(apply_jump(0.5, NoJumps{}, 0.5), std::invalid_argument);
}

TEST(ApplyJump, ExponentialMean) {
  RandomStream rng(StreamKey{0, family::primary, 0}, Substream::jump_marks);
  const JumpFamily jumps = LevyUpward{ExponentialLaw{2.0}, 1.0};
  double sum = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) sum += apply_jump(0.0, jumps, rng.uniform());
  EXPECT_NEAR(sum / n, 0.5, 0.002);
}

TEST(SimulatePath, ConstantPath) {
  const PathSample s = simulate_path(constant(0.0, 0.0), 1.0, 3.0, 1e-2, StreamKey{});
  for (double v : s.values) EXPECT_EQ(v, 1.0);
  for (double l : s.local_time) EXPECT_EQ(l, 0.0);
}

TEST(SimulatePath, DeterministicReflection) {
  const PathSample s = simulate_path(constant(-1.0, 0.0), 1.0, 2.0, 0.125, StreamKey{});
  for (std::size_t i = 0; i < s.values.size(); ++i) EXPECT_EQ(s.values[i], std::max(0.0, 1.0 - s.grid.time(i)));
  EXPECT_EQ(s.local_time.back(), 1.0);

  const PathSample fine = simulate_path(constant(-1.0, 0.0), 1.0, 2.0, 1e-3, StreamKey{});
  for (std::size_t i = 0; i < fine.values.size(); ++i)
    EXPECT_NEAR(fine.values[i], std::max(0.0, 1.0 - fine.grid.time(i)), 1e-12);
}

TEST(SimulatePath, RejectsBadGrid) {
  EXPECT_THROW(simulate_path(constant(-1.0, 1.0), 0.0, 1.0, 0.0, StreamKey{}), ConfigError);
  EXPECT_THROW(simulate_path(constant(-1.0, 1.0), 0.0, -1.0, 0.1, StreamKey{}), ConfigError);
  EXPECT_THROW(simulate_path(constant(-1.0, 1.0), 0.0, 1.0, 0.3, StreamKey{}), ConfigError);
  EXPECT_THROW(simulate_path(constant(-1.0, 1.0), -1.0, 1.0, 0.1, StreamKey{}), ConfigError);
}

TEST(SimulatePath, JumpsLandOnNextGridPoint) {
  const ProcessSpec spec{ConstantDrift{0.0}, 0.0, LevyUpward{DeterministicLaw{1.0}, 3.0}};
  const PathSample s = simulate_path(spec, 0.0, 10.0, 0.01, StreamKey{4, family::primary, 2});
  ASSERT_FALSE(s.jump_times.empty());
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    const double t = s.grid.time(i);
    const auto count = std::count_if(s.jump_times.begin(), s.jump_times.end(), [&](double tau) { return tau <= t; });
    EXPECT_EQ(s.values[i], static_cast<double>(count));
  }
}

TEST(SimulatePath, DriftedRbmStationaryMean) {
  const ProcessSpec spec = constant(-1.0, 1.0);
  const TimeGrid grid = TimeGrid::make(200.0, 1e-3);
  const auto ends = simulate_ensemble(spec, {0.0}, 10000, grid, {grid.steps}, 0, family::primary);
  const MeanEstimate m = mean_and_stderr(ends[0]);
  EXPECT_NEAR(m.mean, 0.5, 0.02);
  // Projecting at grid points only lowers the stationary mean by about
  // beta sigma sqrt(h), beta = -zeta(1/2) / sqrt(2 pi).
  EXPECT_NEAR(m.mean, 0.5 - 0.5826 * std::sqrt(1e-3), 4.0 * m.std_error);

  const PathSample one = simulate_path(spec, 0.0, 200.0, 1e-3, StreamKey{});
  const auto zeros = std::count(one.values.begin(), one.values.end(), 0.0);
  EXPECT_GT(zeros, 0);
}

// Nonnegativity and local-time complementarity on random specs and steps.
TEST(SimulatePathProperty, NonnegativeAndComplementary) {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    ProcessSpec spec;
    spec.sigma = 2.0 * U(gen);
    if (trial % 3 == 0) spec.drift = ConstantDrift{-3.0 * U(gen) + 0.5};
    else if (trial % 3 == 1) spec.drift = AffineDrift{-2.0 * U(gen), -U(gen)};
    else spec.drift = TabulatedDrift{{{0.0, 1.0 - 2.0 * U(gen)}, {1.0 + U(gen), -2.0 * U(gen)}}};
    if (trial % 2) spec.jumps = LevyUpward{ExponentialLaw{0.5 + 3.0 * U(gen)}, 2.0 * U(gen) + 0.1};
    const double h = std::ldexp(1.0, -4 - static_cast<int>(8.0 * U(gen)));
    const PathSample s = simulate_path(spec, 3.0 * U(gen), 2.0, h, StreamKey{static_cast<std::uint64_t>(trial), 0, 0});
    ASSERT_EQ(s.local_time[0], 0.0);
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      ASSERT_GE(s.values[i], 0.0);
      if (i > 0) {
        ASSERT_GE(s.local_time[i], s.local_time[i - 1]);
        // Complementarity is exact on the diffusion step; a jump at the same
        // grid point may then lift the state off 0.
        const double t = s.grid.time(i);
        const bool jumped = std::any_of(s.jump_times.begin(), s.jump_times.end(),
                                        [&](double tau) { return tau > t - h && tau <= t; });
        if (s.local_time[i] > s.local_time[i - 1] && !jumped) {
          ASSERT_EQ(s.values[i], 0.0);
        }
      }
    }
  }
}

TEST(SimulatePathProperty, Deterministic) {
  const ProcessSpec spec = presets::levy_exp2();
  const StreamKey key{12345, family::primary, 17};
  const PathSample a = simulate_path(spec, 0.5, 20.0, 1e-3, key);
  const PathSample b = simulate_path(spec, 0.5, 20.0, 1e-3, key);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.local_time, b.local_time);
  EXPECT_EQ(a.jump_times, b.jump_times);
  EXPECT_EQ(a.seed_tag(), 17u);
  const PathSample c = simulate_path(spec, 0.5, 20.0, 1e-3, StreamKey{12346, family::primary, 17});
  EXPECT_NE(a.values, c.values);
}

TEST(SimulatePathProperty, JumpsDoNotPerturbBrownianIncrements) {
  const StreamKey key{5, family::primary, 1};
  const PathSample plain = simulate_path(constant(0.0, 1.0), 50.0, 1.0, 1e-2, key);
  const ProcessSpec jumpy{ConstantDrift{0.0}, 1.0, LevyUpward{DeterministicLaw{0.0}, 4.0}};
  const PathSample with = simulate_path(jumpy, 50.0, 1.0, 1e-2, key);
  EXPECT_FALSE(with.jump_times.empty());
  EXPECT_EQ(plain.values, with.values);
}

// Halving h moves the endpoint mean by less than two standard errors. The two
// resolutions share Brownian paths: the coarse increment is the sum of the
// two fine ones.
TEST(SimulatePathProperty, WeakOrderSanity) {
  const ProcessSpec spec = constant(-1.0, 1.0);
  const double h = 1e-3;
  const int steps = 5000;
  const int n = 10000;
  std::vector<double> coarse(n), fine(n);
  for (int i = 0; i < n; ++i) {
    RandomStream rng(StreamKey{0, family::primary, static_cast<std::uint64_t>(i)}, Substream::diffusion);
    double xc = 1.0, xf = 1.0;
    for (int s = 0; s < steps; ++s) {
      const double z1 = rng.normal();
      const double z2 = rng.normal();
      xf = reflected_step(xf, spec, h / 2, z1).x;
      xf = reflected_step(xf, spec, h / 2, z2).x;
      xc = reflected_step(xc, spec, h, (z1 + z2) / std::sqrt(2.0)).x;
    }
    coarse[i] = xc;
    fine[i] = xf;
  }
  const MeanEstimate mc = mean_and_stderr(coarse);
  const MeanEstimate mf = mean_and_stderr(fine);
  EXPECT_LT(std::abs(mc.mean - mf.mean), 2.0 * mc.std_error);
}

TEST(SimulateEnsemble, IndependentOfJobs) {
  const ProcessSpec spec = presets::levy_exp2();
  const TimeGrid grid = TimeGrid::make(2.0, 1e-3);
  const auto a = simulate_ensemble(spec, {1.0}, 300, grid, {0, 1000, 2000}, 9, family::primary, 1);
  const auto b = simulate_ensemble(spec, {1.0}, 300, grid, {0, 1000, 2000}, 9, family::primary, 4);
  EXPECT_EQ(a, b);
  const PathSample p = simulate_path(spec, 1.0, 2.0, 1e-3, StreamKey{9, family::primary, 42});
  EXPECT_EQ(a[1][42], p.values[1000]);
  EXPECT_EQ(a[2][42], p.values[2000]);
}

TEST(EstimateStationary, DriftedRbmMeanV) {
  const ProcessSpec spec = constant(-1.0, 1.0);
  RateCertificate cert = make_certificate(spec);
  cert.lambda = 1.0;
  cert.k = 0.5;
  const EnsembleSummary s = estimate_stationary(spec, cert, 10.0, 10000, 0.0, 1e-3, 0);
  EXPECT_NEAR(s.mean_V, 2.0, 3.0 * s.stderr_V);
  EXPECT_GE(s.mean_V, 1.0);
  EXPECT_TRUE(s.warnings.empty());
}

TEST(EstimateStationary, DeterministicAbsorption) {
  const ProcessSpec spec = constant(-1.0, 0.0);
  const RateCertificate cert = make_certificate(spec);
  const EnsembleSummary s = estimate_stationary(spec, cert, 5.0, 50, 0.0, 1e-2, 0, 1, 2.0);
  for (double x : s.endpoint_sample.points()) EXPECT_EQ(x, 0.0);
  EXPECT_EQ(s.mean_V, 1.0);
}

TEST(EstimateStationary, LevyExampleSelfConsistent) {
  const ProcessSpec spec = presets::levy_exp2();
  const RateCertificate cert = make_certificate(spec);
  const EnsembleSummary s = estimate_stationary(spec, cert, 30.0, 4000, 0.0, 1e-2, 0);
  EXPECT_TRUE(std::isfinite(s.endpoint_sample.mean()));
  EXPECT_TRUE(std::isfinite(s.mean_V));
  EXPECT_LT(s.stderr_V / s.mean_V, 0.05);
  EXPECT_NEAR(s.lambda, 0.304, 0.005);
}

TEST(EstimateStationary, WarnsWithoutCertificate) {
  const ProcessSpec spec = constant(0.5, 1.0);
  const RateCertificate cert = make_certificate(spec);
  const EnsembleSummary s = estimate_stationary(spec, cert, 1.0, 10, 0.0, 1e-2, 0);
  ASSERT_EQ(s.warnings.size(), 1u);
  EXPECT_EQ(s.warnings[0], "stationarity not certified");
}

TEST(TimeGrid, Construction) {
  const TimeGrid g = TimeGrid::make(10.0, 1e-3);
  EXPECT_EQ(g.steps, 10000u);
  EXPECT_EQ(g.index_of(2.5), 2500u);
  EXPECT_THROW(TimeGrid::make(1.0, 0.0), ConfigError);
  EXPECT_THROW(g.index_of(10.5), ConfigError);
}

TEST(MeanAndStderr, Known) {
  const MeanEstimate m = mean_and_stderr({1.0, 2.0, 3.0, 4.0});
  EXPECT_DOUBLE_EQ(m.mean, 2.5);
  EXPECT_NEAR(m.std_error, std::sqrt(5.0 / 3.0 / 4.0), 1e-15);
}

}  // namespace
}  // namespace rjd
