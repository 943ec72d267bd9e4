#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "rjd/certificate.hpp"
#include "rjd/errors.hpp"

namespace rjd {
namespace {

constexpr double e = std::numbers::e;

// Closed form of c for constant drift -1, sigma 1, Exp(2) jumps at rate 1.
double levy_c(double l) { return -l + l * l / 2.0 + 2.0 / (2.0 - l) - 1.0; }

RateCertificate rbm_cert(double p = 1.0) {
  RateCertificate c;
  c.lambda = 1.0;
  c.k = 0.5;
  c.G = 0.0;
  c.p = p;
  c.K = c.k / p;
  c.lambda_max = std::numeric_limits<double>::infinity();
  c.a3_holds = true;
  c.thm2_applicable = true;
  return c;
}

TEST(EvalC, LevyAtReferenceLambda) {
  const ProcessSpec spec = presets::levy_exp2();
  for (double x : {0.0, 1.0, 50.0}) EXPECT_NEAR(eval_c(spec, x, 0.304), levy_c(0.304), 1e-14);
  EXPECT_NEAR(eval_c(spec, 0.0, 0.304), -0.0785, 1e-4);
}

TEST(EvalC, VanishesAtZero) {
  for (const ProcessSpec& s : {presets::levy_exp2(), presets::reflected_ou(), presets::drifted_rbm()})
    for (double x : {0.0, 0.5, 9.0}) EXPECT_EQ(eval_c(s, x, 0.0), 0.0);
  EXPECT_NEAR(eval_c(presets::levy_exp2(), 0.0, 1e-9), 0.0, 1e-8);
}

TEST(EvalC, OuHandValue) { EXPECT_DOUBLE_EQ(eval_c(presets::reflected_ou(), 0.0, 1.0), -0.5); }

TEST(EvalC, MgfDivergence) {
  EXPECT_THROW(eval_c(presets::levy_exp2(), 0.0, 2.0), NumericError);
  EXPECT_THROW(eval_c(presets::levy_exp2(), 0.0, 3.0), NumericError);
}

TEST(KOfLambda, Examples) {
  EXPECT_NEAR(k_of_lambda(presets::levy_exp2(), 0.304), 0.0785, 5e-4);
  EXPECT_NEAR(k_of_lambda(presets::drifted_rbm(), 1.0), 0.5, 1e-15);
  EXPECT_NEAR(k_of_lambda(presets::reflected_ou(), 1.0), 0.5, 1e-15);
}

TEST(KOfLambda, IsBelowMinusCEverywhere) {
  ProcessSpec tab{TabulatedDrift{{{0.0, -0.5}, {1.0, -2.0}, {3.0, -1.0}}}, 1.0, LevyUpward{ExponentialLaw{3.0}, 0.5}};
  for (const ProcessSpec& s : {presets::levy_exp2(), presets::reflected_ou(), tab}) {
    for (double l : {0.1, 0.5, 1.2}) {
      const double k = k_of_lambda(s, l);
      double best = -std::numeric_limits<double>::infinity();
      for (int i = 0; i <= 2000; ++i) {
        const double x = i / 100.0;
        EXPECT_LE(k, -eval_c(s, x, l) + 1e-12);
        best = std::max(best, eval_c(s, x, l));
      }
      EXPECT_NEAR(k, -best, 1e-9);
    }
  }
}

TEST(OptimizeLambda, LevyExample) {
  const LambdaOptimum o = optimize_lambda(presets::levy_exp2());
  EXPECT_NEAR(o.lambda, 0.304, 0.005);
  EXPECT_NEAR(o.k, 0.0785, 0.001);
  // Independent oracle: dense scan of the closed form.
  double best_l = 0.0, best_k = -1.0;
  for (double l = 1e-4; l < 2.0; l += 1e-5)
    if (-levy_c(l) > best_k) best_k = -levy_c(l), best_l = l;
  EXPECT_NEAR(o.lambda, best_l, 1e-4);
  EXPECT_NEAR(o.k, best_k, 1e-9);
}

TEST(OptimizeLambda, DriftedRbmClosedForm) {
  const LambdaOptimum o = optimize_lambda(presets::drifted_rbm());
  EXPECT_NEAR(o.lambda, 1.0, 1e-5);
  EXPECT_NEAR(o.k, 0.5, 1e-10);
}

TEST(OptimizeLambda, OuGridClosedForm) {
  for (double a : {0.5, 1.0, 2.0})
    for (double m : {0.5, 1.0, 2.0})
      for (double s : {0.5, 1.0, 2.0}) {
        const LambdaOptimum o = optimize_lambda(presets::reflected_ou(a, m, s));
        const double l = a * m / (s * s);
        const double k = a * a * m * m / (2.0 * s * s);
        EXPECT_LE(std::abs(o.lambda - l), 1e-4 * l) << a << ' ' << m << ' ' << s;
        EXPECT_LE(std::abs(o.k - k), 1e-4 * k) << a << ' ' << m << ' ' << s;
      }
}

TEST(OptimizeLambda, DominatesRandomLambdas) {
  std::mt19937_64 gen(17);
  for (const ProcessSpec& s : {presets::levy_exp2(), presets::reflected_ou(2.0, 0.5, 1.0)}) {
    const LambdaOptimum o = optimize_lambda(s);
    const double top = std::isfinite(mgf_domain(s.jumps)) ? mgf_domain(s.jumps) : 50.0;
    std::uniform_real_distribution<double> U(0.0, top);
    for (int i = 0; i < 100; ++i) {
      const double l = U(gen);
      if (l <= 0.0 || l >= top) continue;
      EXPECT_GE(o.k, k_of_lambda(s, l) - 1e-9);
    }
  }
}

TEST(MakeCertificate, OuContractionConstant) {
  const RateCertificate c = make_certificate(presets::reflected_ou(), 1.0);
  ASSERT_TRUE(c.K.has_value());
  EXPECT_NEAR(*c.K, 1.5, 1e-6);
  EXPECT_EQ(*c.K, c.k / c.p - *c.G);
  EXPECT_GT(c.p * *c.K, c.k);
  EXPECT_TRUE(c.a3_holds);
  EXPECT_TRUE(c.thm2_applicable);
}

TEST(MakeCertificate, LevyGZero) {
  const RateCertificate c = make_certificate(presets::levy_exp2(), 1.0);
  EXPECT_EQ(*c.G, 0.0);
  EXPECT_EQ(*c.K, c.k);
  EXPECT_NEAR(*c.K, 0.0785, 1e-3);
  EXPECT_EQ(c.lambda_max, 2.0);
  EXPECT_GT(c.lambda, 0.0);
  EXPECT_LT(c.lambda, c.lambda_max);
}

TEST(MakeCertificate, OrderTwoHalvesK) {
  const RateCertificate c = make_certificate(presets::drifted_rbm(), 2.0);
  EXPECT_NEAR(*c.K, 0.25, 1e-9);
}

TEST(MakeCertificate, NoContractionWithoutRate) {
  const RateCertificate c = make_certificate(presets::drifted_rbm(1.0, 1.0), 1.0);
  EXPECT_FALSE(c.a3_holds);
  EXPECT_LE(c.k, 0.0);
  EXPECT_THROW(bound_thm1(c, 0.0, 1.0, 1.0), NumericError);
}

TEST(MakeCertificate, RejectsOrderBelowOne) {
  EXPECT_THROW(make_certificate(presets::drifted_rbm(), 0.5), ConfigError);
}

TEST(Accessors, CalculusConstantBoundsPower) {
  const RateCertificate c = make_certificate(presets::levy_exp2(), 2.0);
  for (double x = 0.0; x < 200.0; x += 0.25)
    EXPECT_LE(std::pow(x, c.p), c.calculus_constant() * c.V(x) * (1.0 + 1e-12));
  EXPECT_DOUBLE_EQ(c.C(), e * 2.0 / c.lambda);
}

TEST(BoundThm1, HandValues) {
  const RateCertificate c = rbm_cert();
  EXPECT_NEAR(bound_thm1(c, 0.0, 0.0, 0.0), e, 1e-15);
  EXPECT_NEAR(bound_thm1(c, 0.0, 0.0, 2.0), 1.0, 1e-15);
}

TEST(BoundThm1Measures, HandValues) {
  const RateCertificate c = rbm_cert();
  EXPECT_NEAR(bound_thm1_measures(c, 1.0, 1.0, 0.0), 2.0 * e, 1e-14);
  EXPECT_NEAR(bound_thm1_measures(c, 2.0, 1.0, 0.0), 3.0 * e, 1e-14);
  const double t = (2.0 / c.k) * std::log(2.0);
  EXPECT_NEAR(bound_thm1_measures(c, 1.0, 1.0, t) / bound_thm1_measures(c, 1.0, 1.0, 0.0), 0.25, 1e-14);
}

TEST(BoundThm2, HandValues) {
  const RateCertificate c = make_certificate(presets::reflected_ou(), 1.0);
  EXPECT_EQ(bound_thm2(c, 0.7, 0.7, 3.0), 0.0);
  EXPECT_NEAR(bound_thm2(c, 0.0, 1.0, 0.0), e, 1e-5);
  EXPECT_NEAR(bound_thm2(c, 0.0, 1.0, 1.0), e * std::exp(-1.5), 1e-5);
  EXPECT_NEAR(bound_thm2(c, 0.0, 1.0, 1.0), 0.6065, 1e-4);
}

TEST(BoundThm2, RequiresConstant) {
  RateCertificate c = rbm_cert();
  c.K.reset();
  EXPECT_THROW(bound_thm2(c, 0.0, 1.0, 1.0), NumericError);
}

TEST(BoundThm2Stationary, Form) {
  const RateCertificate c = rbm_cert();
  EXPECT_NEAR(bound_thm2_stationary(c, 2.0, 0.0, 0.0), 3.0, 1e-15);
  EXPECT_NEAR(bound_thm2_stationary(c, 2.0, 1.0, 2.0), (2.0 + e) * std::exp(-1.0), 1e-14);
}

TEST(BoundProperty, MonotoneInTimeAndState) {
  const RateCertificate ou = make_certificate(presets::reflected_ou(), 1.0);
  const RateCertificate rbm = rbm_cert(2.0);
  for (double x = 0.0; x < 4.0; x += 0.5)
    for (double t = 0.0; t < 10.0; t += 0.5) {
      EXPECT_GE(bound_thm1(rbm, 0.0, x, t), bound_thm1(rbm, 0.0, x, t + 0.5));
      EXPECT_LE(bound_thm1(rbm, 0.0, x, t), bound_thm1(rbm, 0.0, x + 0.5, t));
      EXPECT_GE(bound_thm2(ou, 0.0, x, t), bound_thm2(ou, 0.0, x, t + 0.5));
      EXPECT_LE(bound_thm2(ou, 0.0, x, t), bound_thm2(ou, 0.0, x + 0.5, t));
    }
}

}  // namespace
}  // namespace rjd
