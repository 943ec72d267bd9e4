#pragma once
/**
 * @file certificate.hpp
 * @brief Exponential Lyapunov rate certificates and the Wasserstein decay
 *        bounds they imply.
 *
 * For V(x) = exp(lambda x) the generator gives L V = c(x, lambda) V with
 *
 *   c(x, lambda) = lambda g(x) + lambda^2 sigma^2 / 2 + Lambda (M(lambda) - 1),
 *
 * M the displacement MGF. The rate k(lambda) = -sup_x c(x, lambda) is
 * maximized over lambda; with G the one-sided Lipschitz constant of g, the
 * contraction exponent is K = k / p - G.
 */

#include <optional>
#include <string>
#include <vector>

#include "rjd/model.hpp"

namespace rjd {

struct RateCertificate {
  double lambda = 0.0;
  double k = 0.0;
  std::optional<double> G;
  double lambda_max = 0.0;
  double p = 1.0;
  std::optional<double> K;
  bool a3_holds = false;
  /// k > p G, the hypothesis of the contraction bound.
  bool thm2_applicable = false;
  std::vector<std::string> notes;

  double V(double x) const;
  /// a = (p e / lambda)^p, the constant in x^p <= a exp(lambda x).
  double calculus_constant() const;
  /// C = e p / lambda.
  double C() const;
};

/// c(x, lambda). Throws NumericError("MGF divergence") at or beyond the
/// displacement MGF domain.
double eval_c(const ProcessSpec& spec, double x, double lambda);

/// k(lambda) = -sup_{x > 0} c(x, lambda). Exact for constant and affine
/// drifts; for tabulated drifts the sup runs over the knots, 0 and the probe
/// grid, which is exact for piecewise-linear g.
double k_of_lambda(const ProcessSpec& spec, double lambda);

/// How k_of_lambda takes the supremum over x, for report notes.
std::string sup_method(const DriftSpec& drift);

struct LambdaOptimum {
  double lambda = 0.0;
  double k = 0.0;
  std::vector<std::string> notes;
};

/// Maximizes k over (0, lambda_max) by golden-section search.
LambdaOptimum optimize_lambda(const ProcessSpec& spec);

RateCertificate make_certificate(const ProcessSpec& spec, double p = 1.0);

/// (e p / lambda) exp(lambda (x1 v x2) / p) exp(-k t / p).
double bound_thm1(const RateCertificate& cert, double x1, double x2, double t);

/// C [(rho1, V) + (rho2, V)]^{1/p} exp(-k t / p).
double bound_thm1_measures(const RateCertificate& cert, double rho1_V, double rho2_V, double t);

/// exp(lambda (x1 v x2) / p) |x1 - x2| exp(-K t).
double bound_thm2(const RateCertificate& cert, double x1, double x2, double t);

/// [(pi, V) + V(x)]^{1/p} exp(-K t), distance from P^t(x, .) to pi.
double bound_thm2_stationary(const RateCertificate& cert, double pi_V, double x, double t);

}  // namespace rjd
